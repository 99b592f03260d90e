"""Reduced-scale self-validation: the cross-checks behind the simulator.

Runs the independent-oracle and property checks at small size (N <= 12,
<= 200 slots): Cholesky reconstruction, dense-solve equivalence of full
OMP, the MSE decomposition identity, exact power renormalization, OMP
residual monotonicity, scheme rate identities, channel reciprocity and the
energy-carry invariants. Paper-literal comparison flags make some
identities diverge by construction; those checks are reported as
expected-divergent instead of failing.
"""

from dataclasses import dataclass, replace

import numpy as np

from .channel import ChannelRealization, FadingParams, NetworkTopology, draw_realization
from .config import SimConfig
from .engine import run_simulation, run_slot
from .linalg import cholesky, omp
from .relay import (
    build_mmse_system,
    dense_mmse_gains,
    mse,
    normalize_gains,
    relay_budget_power,
    sparse_relay_select,
)
from .schemes import eval_fifth_psa, eval_first_psa, eval_fourth_psa, eval_third_psa


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    expected_divergent: bool = False


@dataclass
class ValidationReport:
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed or c.expected_divergent for c in self.checks)

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.checks:
            status = "DIVERGES-AS-EXPECTED" if c.expected_divergent else ("PASS" if c.passed else "FAIL")
            lines.append(f"{status} {c.name}: {c.detail}")
        lines.append(f"{'OK' if self.passed else 'FAILED'}: "
                     f"{sum(1 for c in self.checks if c.passed or c.expected_divergent)}"
                     f"/{len(self.checks)} checks")
        return lines


def _reduced(cfg: SimConfig) -> SimConfig:
    n = min(cfg.n_secondary, 12)
    n -= n % 2
    return replace(
        cfg,
        n_secondary=n,
        slots=min(cfg.slots, 200),
        k_r=min(cfg.k_r, n) if cfg.k_r > 0 else 0,
        k_beam=None,
    ).validate()


def _random_system(rng, cfg):
    topo = NetworkTopology(cfg.n_secondary)
    ch = draw_realization(rng, topo, FadingParams())
    p_p = 2.0 * cfg.e_p_per_hz / ((1.0 - cfg.alpha) * cfg.slot_seconds)
    return ch, build_mmse_system(ch, p_p, cfg.kappa, paper_literal_r=cfg.paper_literal_r)


def check_cholesky_reconstruction(cfg: SimConfig, rng) -> CheckResult:
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(2, cfg.n_secondary + 1))
        b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        r = b @ b.conj().T + np.eye(n)
        ell = cholesky(r)
        worst = max(worst, float(np.linalg.norm(ell @ ell.conj().T - r) / np.linalg.norm(r)))
    return CheckResult(
        "cholesky_reconstruction", worst <= 1e-10, f"max relative error {worst:.3e} (tol 1e-10)"
    )


def check_dense_vs_full_omp(cfg: SimConfig, rng) -> CheckResult:
    worst = 0.0
    for _ in range(20):
        ch, sys = _random_system(rng, cfg)
        dense = dense_mmse_gains(sys)
        full = sparse_relay_select(sys, cfg.n_secondary).g
        worst = max(worst, float(np.linalg.norm(full - dense) / np.linalg.norm(dense)))
    return CheckResult(
        "dense_vs_full_omp", worst <= 1e-8, f"max relative gap {worst:.3e} (tol 1e-8)"
    )


def check_mse_decomposition(cfg: SimConfig, rng) -> CheckResult:
    worst = 0.0
    for _ in range(20):
        ch, sys = _random_system(rng, cfg)
        for _ in range(10):
            g = rng.standard_normal(cfg.n_secondary) + 1j * rng.standard_normal(cfg.n_secondary)
            g *= np.linalg.norm(dense_mmse_gains(sys)) / np.linalg.norm(g)
            split = mse(g, sys)
            worst = max(worst, float(abs(split.total - (split.minimum + split.excess)) / abs(split.total)))
    if cfg.paper_literal_r:
        return CheckResult(
            "mse_decomposition", True,
            f"sqrt-P_p covariance flag active; observed violation {worst:.3e}",
            expected_divergent=True,
        )
    return CheckResult(
        "mse_decomposition", worst <= 1e-9, f"max relative violation {worst:.3e} (tol 1e-9)"
    )


def check_power_constraint(cfg: SimConfig, rng) -> CheckResult:
    worst = 0.0
    for _ in range(20):
        ch, sys = _random_system(rng, cfg)
        k_r = max(1, cfg.k_r)
        gain = normalize_gains(
            sparse_relay_select(sys, k_r), ch, sys.p_p, cfg.cooperation_power, cfg.kappa
        )
        spent = relay_budget_power(gain.g, ch.sec_to_pt, sys.p_p, cfg.kappa)
        worst = max(worst, float(abs(spent - cfg.cooperation_power) / cfg.cooperation_power))
    return CheckResult(
        "power_constraint_equality", worst <= 1e-9, f"max relative gap {worst:.3e} (tol 1e-9)"
    )


def check_omp_monotonicity(cfg: SimConfig, rng) -> CheckResult:
    violations = 0
    for _ in range(100):
        m = int(rng.integers(4, 16))
        n = int(rng.integers(4, 16))
        a = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
        y = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        hist = omp(a, y, min(n, m)).residual_norm_history
        slack = 1e-12 * hist[0]
        violations += sum(1 for u, v in zip(hist, hist[1:]) if v > u + slack)
    return CheckResult(
        "omp_residual_monotonicity", violations == 0, f"{violations} increases over 100 runs"
    )


def check_scheme_identities(cfg: SimConfig, rng) -> CheckResult:
    topo = NetworkTopology(cfg.n_secondary)
    exact = True
    for _ in range(50):
        ch = draw_realization(rng, topo, FadingParams())
        first = eval_first_psa(ch, cfg)
        fifth = eval_fifth_psa(ch, cfg)
        third = eval_third_psa(ch, cfg)
        fourth = eval_fourth_psa(ch, cfg)
        exact &= bool(np.array_equal(first.secondary_rates, fifth.secondary_rates))
        exact &= bool(np.array_equal(third.secondary_rates, fourth.secondary_rates))
    return CheckResult(
        "scheme_rate_identities", exact, "first==fifth and third==fourth rate vectors (exact)"
    )


def check_reciprocity(cfg: SimConfig, rng) -> CheckResult:
    topo = NetworkTopology(cfg.n_secondary)
    ok = True
    for _ in range(10):
        ch = draw_realization(rng, topo, FadingParams())
        ok &= bool(np.array_equal(ch.coefficients, ch.coefficients.T))
    return CheckResult("channel_reciprocity", ok, "h(a,b) == h(b,a) exactly")


def check_energy_chain(cfg: SimConfig, rng) -> CheckResult:
    run_cfg = replace(cfg, slots=min(cfg.slots, 50)).validate()
    result = run_simulation(run_cfg)
    nonneg = bool((result.e_h2 >= 0).all() and (result.e_h1 >= 0).all())
    # slot-1 carry is zero by construction; verify via a fresh chain
    chain_rng = np.random.default_rng(run_cfg.seed)
    slot, _, carry = run_slot(0.0, run_cfg, chain_rng)
    return CheckResult(
        "energy_chain", nonneg and carry >= 0.0, "e_h1, e_h2 >= 0 and slot-1 carry starts at 0"
    )


ALL_CHECKS = (
    check_cholesky_reconstruction,
    check_dense_vs_full_omp,
    check_mse_decomposition,
    check_power_constraint,
    check_omp_monotonicity,
    check_scheme_identities,
    check_reciprocity,
    check_energy_chain,
)


def run_validate(cfg: SimConfig) -> ValidationReport:
    """Execute every check at reduced scale against the given configuration."""
    cfg.validate()
    reduced = _reduced(cfg)
    rng = np.random.default_rng(reduced.seed)
    return ValidationReport([check(reduced, rng) for check in ALL_CHECKS])
