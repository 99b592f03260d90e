"""Stages two and three: PT power, MMSE relay selection, re-harvesting, rate.

The PT spends its energy ledger over the second half-stage, every secondary
node listens as a candidate amplify-and-forward relay, and a sparse gain
vector (orthogonal matching pursuit over the whitened MMSE system) picks
K_R of them. The selected gains are rescaled to the aggregate relay power
budget, the PT re-harvests from the relay transmissions, and the primary
destination MRC-combines the direct and relayed branches.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import ChannelRealization
from .errors import DegenerateChannelError
from .linalg import cholesky, omp, solve_lower, solve_upper_conj

POWER_CONSTRAINT_RTOL = 1e-9


@dataclass(frozen=True)
class EnergyLedger:
    """Energy available to the PT this slot, all in J/Hz.

    e_h2_carry is the third-stage harvest of the previous slot; it is zero
    in the first slot.
    """

    e_p: float
    e_h1: float = 0.0
    e_h2_carry: float = 0.0

    def __post_init__(self):
        for name in ("e_p", "e_h1", "e_h2_carry"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    @property
    def total(self) -> float:
        return self.e_p + self.e_h1 + self.e_h2_carry


def pt_power(ledger: EnergyLedger, alpha: float, slot_seconds: float) -> float:
    """PT transmit power in W/Hz: the ledger spent over the (1-alpha)/2 stage."""
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must be in [0, 1), got {alpha}")
    if not slot_seconds > 0:
        raise ValueError(f"slot_seconds must be positive, got {slot_seconds}")
    return 2.0 * ledger.total / ((1.0 - alpha) * slot_seconds)


@dataclass(frozen=True)
class MmseSystem:
    """Whitened relay-selection system for one slot.

    h stacks the cascaded PT->relay->destination coefficients, h_tilde is h
    scaled by the PT power, r_vv the diagonal relayed-noise covariance, r
    the (Hermitian PD) received-signal covariance and ell its Cholesky
    factor.
    """

    h: np.ndarray
    h_tilde: np.ndarray
    r: np.ndarray
    r_vv: np.ndarray  # diagonal entries only
    ell: np.ndarray
    p_p: float
    kappa: float


def build_mmse_system(
    ch: ChannelRealization, p_p: float, kappa: float, *, paper_literal_r: bool = False
) -> MmseSystem:
    """Assemble h, h_tilde, R and its factor for the current realization.

    R = P_p h h^H + diag(theta(p, s_n) kappa). paper_literal_r reproduces
    the sqrt(P_p) variant of the rank-one term for comparison runs; with it
    the dense solution is no longer the MSE minimizer.
    """
    if not p_p > 0:
        raise ValueError(f"p_p must be positive, got {p_p}")
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    h = ch.sec_to_pd * ch.sec_to_pt  # h(s_n, pd) * h(p, s_n)
    h_tilde = p_p * h
    r_vv = ch.sec_to_pt_gain * kappa
    scale = math.sqrt(p_p) if paper_literal_r else p_p
    r = scale * np.outer(h, h.conj())
    r[np.diag_indices_from(r)] += r_vv
    ell = cholesky(r, check_hermitian=False)  # Hermitian by construction
    return MmseSystem(h, h_tilde, r, r_vv, ell, p_p, kappa)


def dense_mmse_gains(sys: MmseSystem) -> np.ndarray:
    """MSE-optimal dense gain vector R^{-1} h_tilde through the factor."""
    return solve_upper_conj(sys.ell, solve_lower(sys.ell, sys.h_tilde))


class MseSplit(NamedTuple):
    total: float
    minimum: float
    excess: float


def mse(g, sys: MmseSystem) -> MseSplit:
    """Destination MSE of a gain vector, split into floor and excess.

    total is evaluated directly from the quadratic form; minimum is the
    gain-independent floor P_p - h_tilde^H R^{-1} h_tilde + kappa; excess is
    ||L^H g - L^{-1} h_tilde||^2. total == minimum + excess holds as an
    identity (up to rounding) for the default covariance model.
    """
    g = np.asarray(g, dtype=complex)
    total = (
        sys.p_p
        - 2.0 * float(np.real(np.vdot(g, sys.h_tilde)))
        + float(np.real(np.vdot(g, sys.r @ g)))
        + sys.kappa
    )
    z = solve_lower(sys.ell, sys.h_tilde)
    excess = float(np.linalg.norm(sys.ell.conj().T @ g - z) ** 2)
    minimum = sys.p_p - float(np.linalg.norm(z) ** 2) + sys.kappa
    return MseSplit(total, minimum, excess)


@dataclass
class GainVector:
    """Relay gain vector with its support and power-normalization factor.

    Entries off the support are exactly zero. rho is the scalar applied to
    meet the aggregate relay power budget (1.0 before normalization).
    residual_norms is the OMP residual history; its last entry squared is
    the pre-normalization MSE excess.
    """

    g: np.ndarray
    support: tuple[int, ...]
    rho: float = 1.0
    rank_deficient: bool = False
    residual_norms: tuple[float, ...] = ()

    @property
    def is_zero(self) -> bool:
        return not np.any(self.g)

    @classmethod
    def silent(cls, n: int) -> "GainVector":
        return cls(np.zeros(n, dtype=complex), support=())


def sparse_relay_select(sys: MmseSystem, k_r: int, *, normalized_correlation: bool = True) -> GainVector:
    """K_R-sparse gain vector from OMP on (L^H, L^{-1} h_tilde).

    The squared OMP residual equals the MSE excess of the returned vector.
    """
    n = sys.h.shape[0]
    if not 1 <= k_r <= n:
        raise ValueError(f"k_r must be in [1, {n}], got {k_r}")
    y = solve_lower(sys.ell, sys.h_tilde)
    sol = omp(sys.ell.conj().T, y, k_r, normalized=normalized_correlation)
    return GainVector(
        sol.vector,
        support=tuple(sol.support),
        rank_deficient=sol.rank_deficient,
        residual_norms=tuple(sol.residual_norm_history),
    )


def relay_budget_power(g: np.ndarray, h_pt_sec: np.ndarray, p_p: float, kappa: float) -> float:
    """g^H (P_p H H^H + kappa I) g: aggregate relay transmit power for gains g."""
    return p_p * float(np.abs(np.vdot(g, h_pt_sec)) ** 2) + kappa * float(
        np.linalg.norm(g) ** 2
    )


def normalize_gains(
    gain, ch: ChannelRealization, p_p: float, p_s: float, kappa: float
) -> GainVector:
    """Scale gains so the aggregate relay power equals the budget p_s exactly."""
    if isinstance(gain, GainVector):
        g, support = gain.g, gain.support
        rank_deficient, residual_norms = gain.rank_deficient, gain.residual_norms
    else:
        g = np.asarray(gain, dtype=complex)
        support = tuple(int(i) for i in np.flatnonzero(g))
        rank_deficient, residual_norms = False, ()
    if not np.any(g):
        raise DegenerateChannelError("cannot normalize an all-zero gain vector")
    spent = relay_budget_power(g, ch.sec_to_pt, p_p, kappa)
    rho = math.sqrt(p_s / spent)
    return GainVector(g * rho, support, rho, rank_deficient, residual_norms)


def harvest_third_stage(
    gain: GainVector,
    ch: ChannelRealization,
    p_p: float,
    alpha: float,
    slot_seconds: float,
    eta: float,
    kappa: float,
) -> float:
    """Energy (J/Hz) the PT re-harvests from the relays' transmissions.

    Received power is P_p |g^H h_p|^2 + sum |g_n|^2 theta(s_n, p) kappa with
    h_p the relay->PT cascades; by reciprocity the noise term reuses the
    relayed-noise covariance. Integrated over the (1-alpha)/2 stage.
    """
    g = gain.g
    if not np.any(g):
        return 0.0
    h_p = ch.sec_to_pt * ch.sec_to_pt  # h(s_n, p) * h(p, s_n)
    received = p_p * float(np.abs(np.vdot(g, h_p)) ** 2) + kappa * float(
        np.real(np.vdot(g * ch.sec_to_pt_gain, g))
    )
    return received * 0.5 * (1.0 - alpha) * slot_seconds * eta


def direct_snr(ch: ChannelRealization, p_p: float, kappa: float) -> float:
    return p_p * ch.pt_to_pd_gain / kappa


def primary_rate(
    ch: ChannelRealization,
    gain: GainVector,
    sys: MmseSystem | None,
    alpha: float,
    *,
    paper_literal_rate: bool = False,
) -> float:
    """MRC-combined primary rate over the (1-alpha)/2 data stage.

    Branch SNRs add: direct P_p theta(p,pd)/kappa plus the relayed branch
    P_p |g^H h|^2 / (kappa + g^H R_vv g). paper_literal_rate drops the P_p
    factor from the relayed numerator, as printed in the source formula.
    """
    if sys is None:
        raise ValueError("primary_rate requires an MmseSystem; use direct_link_rate without relays")
    if gain.is_zero:
        relay_snr = 0.0
    else:
        g = gain.g
        numerator = float(np.abs(np.vdot(g, sys.h)) ** 2)
        if not paper_literal_rate:
            numerator *= sys.p_p
        relayed_noise = float(np.real(np.vdot(g * sys.r_vv, g)))
        relay_snr = numerator / (sys.kappa + relayed_noise)
    return 0.5 * (1.0 - alpha) * math.log2(1.0 + direct_snr(ch, sys.p_p, sys.kappa) + relay_snr)


def direct_link_rate(ch: ChannelRealization, p_p: float, kappa: float, alpha: float) -> float:
    """Primary rate with silent relays: direct branch over the data stage."""
    return 0.5 * (1.0 - alpha) * math.log2(1.0 + direct_snr(ch, p_p, kappa))


def pt_alone_rate(ch: ChannelRealization, e_p_per_hz: float, slot_seconds: float, kappa: float) -> float:
    """Non-cooperative baseline: the PT spends e_p over the whole slot."""
    power = e_p_per_hz / slot_seconds
    return math.log2(1.0 + power * ch.pt_to_pd_gain / kappa)


@dataclass
class SlotResult:
    """Stage-two/three outcome of a slot.

    e_h2 carries into the next slot's ledger. The MSE fields describe the
    normalized gain vector actually transmitted (NaN when the relay stage
    was skipped); the pre-normalization excess is the squared last entry of
    gain.residual_norms.
    """

    p_p: float
    primary_rate: float
    e_h2: float
    mse_total: float
    mse_min: float
    mse_excess: float
    gain: GainVector
    pt_alone_rate: float
