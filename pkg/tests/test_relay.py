import math

import numpy as np
import pytest

from coopswipt.errors import DegenerateChannelError
from coopswipt.relay import (
    EnergyLedger,
    GainVector,
    build_mmse_system,
    dense_mmse_gains,
    direct_link_rate,
    harvest_third_stage,
    mse,
    normalize_gains,
    primary_rate,
    pt_alone_rate,
    pt_power,
    relay_budget_power,
    sparse_relay_select,
)

from util import make_channel, random_channel_any_n

KAPPA = 0.01e-6


def random_system(n, seed, p_p=1e-7, kappa=KAPPA):
    ch = random_channel_any_n(n, seed)
    return ch, build_mmse_system(ch, p_p, kappa)


def scalar_channel(h_p=1.0, h_pd=1.0):
    return make_channel(1, {(1, "p"): h_p, (1, "pd"): h_pd})


class TestPtPower:
    def test_hand_value(self):
        ledger = EnergyLedger(e_p=50e-12)
        assert pt_power(ledger, 0.0, 1e-3) == pytest.approx(100e-9, rel=1e-12)

    def test_linearity_in_ledger(self):
        a = pt_power(EnergyLedger(1e-12, 2e-12, 3e-12), 0.2, 1e-3)
        b = pt_power(EnergyLedger(2e-12, 4e-12, 6e-12), 0.2, 1e-3)
        assert b == pytest.approx(2.0 * a, rel=1e-12)

    def test_alpha_scaling(self):
        ledger = EnergyLedger(5e-11)
        assert pt_power(ledger, 0.5, 1e-3) == pytest.approx(2.0 * pt_power(ledger, 0.0, 1e-3))

    def test_alpha_one_rejected(self):
        with pytest.raises(ValueError):
            pt_power(EnergyLedger(1e-12), 1.0, 1e-3)

    def test_negative_ledger_rejected(self):
        with pytest.raises(ValueError):
            EnergyLedger(e_p=-1.0)
        with pytest.raises(ValueError):
            EnergyLedger(e_p=1.0, e_h2_carry=-1e-30)


class TestBuildMmseSystem:
    def test_scalar_by_hand(self):
        sys = build_mmse_system(scalar_channel(), p_p=1.0, kappa=1.0)
        assert sys.r[0, 0] == pytest.approx(2.0)
        assert sys.ell[0, 0] == pytest.approx(math.sqrt(2.0))
        assert np.allclose(sys.h_tilde, [1.0])

    def test_random_system_is_pd(self):
        ch, sys = random_system(10, 0)
        eigs = np.linalg.eigvalsh(sys.r)
        assert np.all(eigs >= sys.r_vv.min() * (1 - 1e-9))
        assert np.linalg.norm(sys.ell @ sys.ell.conj().T - sys.r) <= 1e-10 * np.linalg.norm(sys.r)

    def test_cascade_definition(self):
        ch, sys = random_system(6, 1)
        assert np.allclose(sys.h, ch.sec_to_pd * ch.sec_to_pt, rtol=0)
        assert np.allclose(sys.h_tilde, sys.p_p * sys.h, rtol=0)
        assert np.allclose(sys.r_vv, ch.sec_to_pt_gain * sys.kappa, rtol=0)

    def test_paper_literal_r_uses_sqrt(self):
        ch, _ = random_system(4, 2)
        default = build_mmse_system(ch, 4.0, 1.0)
        literal = build_mmse_system(ch, 4.0, 1.0, paper_literal_r=True)
        outer = np.outer(sys_h := ch.sec_to_pd * ch.sec_to_pt, sys_h.conj())
        assert np.allclose(default.r - literal.r, (4.0 - 2.0) * outer, rtol=1e-12)

    def test_invalid_inputs_rejected(self):
        ch = scalar_channel()
        with pytest.raises(ValueError):
            build_mmse_system(ch, 0.0, 1.0)
        with pytest.raises(ValueError):
            build_mmse_system(ch, 1.0, 0.0)


class TestDenseGains:
    def test_scalar_half(self):
        sys = build_mmse_system(scalar_channel(), 1.0, 1.0)
        assert np.allclose(dense_mmse_gains(sys), [0.5])

    def test_zero_target_gives_zero(self):
        ch = make_channel(2, {(1, "p"): 1.0, (2, "p"): 0.5})  # no pd links: h = 0
        sys = build_mmse_system(ch, 1.0, 1.0)
        assert np.allclose(dense_mmse_gains(sys), 0.0)

    def test_perturbation_oracle(self):
        rng = np.random.default_rng(3)
        ch, sys = random_system(8, 3)
        g_star = dense_mmse_gains(sys)
        best = mse(g_star, sys).total
        scale = 0.01 * np.linalg.norm(g_star)
        for _ in range(100):
            delta = rng.standard_normal(8) + 1j * rng.standard_normal(8)
            delta *= scale / np.linalg.norm(delta)
            assert mse(g_star + delta, sys).total >= best - 1e-15 * abs(best)

    def test_solves_normal_equations(self):
        ch, sys = random_system(12, 4)
        g = dense_mmse_gains(sys)
        assert np.linalg.norm(sys.r @ g - sys.h_tilde) <= 1e-9 * np.linalg.norm(sys.h_tilde)


class TestMse:
    def test_zero_gain(self):
        ch, sys = random_system(6, 5)
        split = mse(np.zeros(6, dtype=complex), sys)
        assert split.total == pytest.approx(sys.p_p + sys.kappa, rel=1e-12)
        z = np.linalg.solve(sys.ell, sys.h_tilde)
        assert split.excess == pytest.approx(np.linalg.norm(z) ** 2, rel=1e-9)

    def test_optimum_has_zero_excess(self):
        ch, sys = random_system(6, 6)
        split = mse(dense_mmse_gains(sys), sys)
        assert split.excess <= 1e-10 * (sys.p_p + sys.kappa)

    def test_decomposition_identity(self):
        rng = np.random.default_rng(7)
        for seed in range(20):
            ch, sys = random_system(10, seed + 100)
            ref = np.linalg.norm(dense_mmse_gains(sys))
            for _ in range(10):
                g = rng.standard_normal(10) + 1j * rng.standard_normal(10)
                g *= ref / np.linalg.norm(g)
                split = mse(g, sys)
                assert split.total == pytest.approx(split.minimum + split.excess,
                                                    rel=1e-9, abs=1e-300)

    def test_minimum_closed_form(self):
        ch, sys = random_system(9, 8)
        split = mse(np.zeros(9, dtype=complex), sys)
        closed = sys.p_p - float(
            np.real(np.vdot(sys.h_tilde, np.linalg.solve(sys.r, sys.h_tilde)))
        ) + sys.kappa
        assert split.minimum == pytest.approx(closed, rel=1e-9)


class TestSparseSelect:
    def test_full_sparsity_matches_dense(self):
        for n, seed in ((4, 0), (10, 1), (25, 2)):
            ch, sys = random_system(n, seed + 300)
            dense = dense_mmse_gains(sys)
            sparse = sparse_relay_select(sys, n).g
            assert np.linalg.norm(sparse - dense) <= 1e-8 * np.linalg.norm(dense)

    def test_scalar_forced(self):
        sys = build_mmse_system(scalar_channel(), 1.0, 1.0)
        gain = sparse_relay_select(sys, 1)
        assert gain.support == (0,)
        assert gain.g[0] == pytest.approx(0.5)

    def test_excess_monotone_in_sparsity(self):
        ch, sys = random_system(12, 11)
        excesses = [mse(sparse_relay_select(sys, k).g, sys).excess for k in (1, 3, 5, 6, 12)]
        for a, b in zip(excesses, excesses[1:]):
            assert b <= a * (1 + 1e-9)

    def test_excess_equals_squared_residual(self):
        ch, sys = random_system(10, 12)
        gain = sparse_relay_select(sys, 4)
        split = mse(gain.g, sys)
        assert split.excess == pytest.approx(gain.residual_norms[-1] ** 2, rel=1e-6)

    def test_sparsity_bounds(self):
        ch, sys = random_system(4, 13)
        with pytest.raises(ValueError):
            sparse_relay_select(sys, 0)
        with pytest.raises(ValueError):
            sparse_relay_select(sys, 5)

    def test_support_size(self):
        ch, sys = random_system(20, 14)
        gain = sparse_relay_select(sys, 5)
        assert len(gain.support) == 5
        assert np.count_nonzero(gain.g) == 5


class TestNormalizeGains:
    def test_constraint_holds_with_equality(self):
        for seed in range(10):
            ch, sys = random_system(10, seed + 500)
            gain = normalize_gains(sparse_relay_select(sys, 5), ch, sys.p_p, 0.1e-6, sys.kappa)
            spent = relay_budget_power(gain.g, ch.sec_to_pt, sys.p_p, sys.kappa)
            assert spent == pytest.approx(0.1e-6, rel=1e-9)

    def test_fixed_point(self):
        ch, sys = random_system(6, 21)
        first = normalize_gains(sparse_relay_select(sys, 3), ch, sys.p_p, 0.1e-6, sys.kappa)
        again = normalize_gains(first, ch, sys.p_p, 0.1e-6, sys.kappa)
        assert again.rho == pytest.approx(1.0, rel=1e-12)
        assert np.allclose(again.g, first.g, rtol=1e-12)

    def test_scalar_hand_value(self):
        ch = scalar_channel()
        gain = normalize_gains(np.array([1.0 + 0j]), ch, 1.0, 2.0, 1.0)
        assert gain.rho == pytest.approx(1.0, rel=1e-12)

    def test_zero_vector_rejected(self):
        ch = scalar_channel()
        with pytest.raises(DegenerateChannelError):
            normalize_gains(np.zeros(1, dtype=complex), ch, 1.0, 1.0, 1.0)


class TestHarvestThirdStage:
    def test_silent_relays(self):
        ch, sys = random_system(6, 30)
        assert harvest_third_stage(GainVector.silent(6), ch, sys.p_p, 0.5, 1e-3, 0.8, KAPPA) == 0.0

    def test_alpha_one_zero_duration(self):
        ch, sys = random_system(6, 31)
        gain = normalize_gains(sparse_relay_select(sys, 2), ch, sys.p_p, 0.1e-6, KAPPA)
        assert harvest_third_stage(gain, ch, sys.p_p, 1.0, 1e-3, 0.8, KAPPA) == 0.0

    def test_term_by_term_oracle(self):
        ch, sys = random_system(10, 32)
        gain = normalize_gains(sparse_relay_select(sys, 4), ch, sys.p_p, 0.1e-6, KAPPA)
        g = gain.g
        h_p = ch.sec_to_pt * ch.sec_to_pt
        received = sys.p_p * abs(np.vdot(g, h_p)) ** 2 + float(
            np.sum(np.abs(g) ** 2 * ch.sec_to_pt_gain * KAPPA)
        )
        expected = received * 0.5 * (1.0 - 0.4) * 1e-3 * 0.8
        got = harvest_third_stage(gain, ch, sys.p_p, 0.4, 1e-3, 0.8, KAPPA)
        assert got == pytest.approx(expected, rel=1e-12)

    def test_linear_in_eta_and_t(self):
        ch, sys = random_system(8, 33)
        gain = normalize_gains(sparse_relay_select(sys, 3), ch, sys.p_p, 0.1e-6, KAPPA)
        base = harvest_third_stage(gain, ch, sys.p_p, 0.5, 1e-3, 0.4, KAPPA)
        assert harvest_third_stage(gain, ch, sys.p_p, 0.5, 1e-3, 0.8, KAPPA) == pytest.approx(
            2 * base, rel=1e-12
        )
        assert harvest_third_stage(gain, ch, sys.p_p, 0.5, 2e-3, 0.4, KAPPA) == pytest.approx(
            2 * base, rel=1e-12
        )


class TestPrimaryRate:
    def test_dead_relay_branch(self):
        ch, sys = random_system(6, 40)
        rate = primary_rate(ch, GainVector.silent(6), sys, 0.3)
        assert rate == pytest.approx(direct_link_rate(ch, sys.p_p, sys.kappa, 0.3), rel=1e-14)

    def test_no_signal_no_rate(self):
        # relay links exist (R is PD) but theta(p, pd) = 0 and relays are silent
        ch = make_channel(2, {(1, "p"): 1.0, (2, "p"): 0.5})
        sys = build_mmse_system(ch, 1.0, 1.0)
        assert primary_rate(ch, GainVector.silent(2), sys, 0.5) == 0.0

    def test_scalar_hand_evaluation(self):
        ch = scalar_channel(h_p=1.0, h_pd=1.0)
        # add a direct PT->PD link
        ch = make_channel(1, {(1, "p"): 1.0, (1, "pd"): 1.0, ("p", "pd"): 2.0})
        sys = build_mmse_system(ch, 1.0, 1.0)
        g = dense_mmse_gains(sys)  # [0.5]
        gain = GainVector(g, support=(0,))
        # direct SNR = P_p * theta / kappa = 4; relay SNR = P_p |g h|^2 / (kappa + |g|^2 theta kappa)
        relay = 1.0 * 0.25 / (1.0 + 0.25)
        expected = 0.5 * (1 - 0.5) * math.log2(1.0 + 4.0 + relay)
        assert primary_rate(ch, gain, sys, 0.5) == pytest.approx(expected, rel=1e-12)

    def test_paper_literal_rate_drops_power(self):
        ch, sys = random_system(6, 41)
        gain = normalize_gains(sparse_relay_select(sys, 3), ch, sys.p_p, 0.1e-6, sys.kappa)
        default = primary_rate(ch, gain, sys, 0.3)
        literal = primary_rate(ch, gain, sys, 0.3, paper_literal_rate=True)
        # dropping the p_p factor (p_p << 1 W/Hz) inflates the relayed SNR
        assert literal > default

    def test_monotone_in_power(self):
        ch, _ = random_system(6, 42)
        rates = []
        for p_p in (1e-8, 1e-7, 1e-6):
            sys = build_mmse_system(ch, p_p, KAPPA)
            gain = normalize_gains(sparse_relay_select(sys, 3), ch, p_p, 0.1e-6, KAPPA)
            rates.append(primary_rate(ch, gain, sys, 0.3))
        assert rates[0] < rates[1] < rates[2]

    def test_monotone_decreasing_in_alpha(self):
        ch, sys = random_system(6, 43)
        gain = normalize_gains(sparse_relay_select(sys, 3), ch, sys.p_p, 0.1e-6, sys.kappa)
        r1 = primary_rate(ch, gain, sys, 0.2)
        r2 = primary_rate(ch, gain, sys, 0.6)
        assert r2 < r1


class TestPtAlone:
    def test_zero_link(self):
        ch = make_channel(2, {(1, 2): 1.0})
        assert pt_alone_rate(ch, 50e-12, 1e-3, KAPPA) == 0.0

    def test_hand_value(self):
        ch = make_channel(2, {("p", "pd"): 1.0})
        got = pt_alone_rate(ch, 50e-12, 1e-3, KAPPA)
        assert got == pytest.approx(math.log2(6.0), rel=1e-12)

    def test_log_law_at_high_snr(self):
        ch = make_channel(2, {("p", "pd"): 1.0})
        base = pt_alone_rate(ch, 50e-9, 1e-3, KAPPA)  # SNR 5000
        doubled = pt_alone_rate(ch, 100e-9, 1e-3, KAPPA)
        assert 0.0 < doubled - base <= 1.0
