"""First-stage secondary access and PT-powering policies.

Five policies decide how the released slot fraction alpha is used by the
secondary pairs and how much RF energy the primary transmitter harvests
from their transmissions:

  first   - transmitters take equal time shares, one at a time
  second  - all transmitters send simultaneously (mutual interference)
  third   - single best data link transmits; one best node powers the PT
  fourth  - single best data link; a beamforming set powers the PT
  fifth   - equal time shares; every phase beamforms toward the PT

Rates and harvested energies are the closed-form per-slot expressions; all
argmax ties break toward the lowest node index for reproducibility.
Powering waveforms are known at the receivers, so they never add
interference to a data link.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import ChannelRealization
from .config import SimConfig
from .errors import DegenerateChannelError


class SchemeId(Enum):
    FIRST = "first"
    SECOND = "second"
    THIRD = "third"
    FOURTH = "fourth"
    FIFTH = "fifth"

    @classmethod
    def from_name(cls, name: str) -> "SchemeId":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown scheme name: {name!r}") from None


@dataclass(frozen=True)
class BeamformWeights:
    """Matched-filter powering weights over the node set Omega, unit power."""

    nodes: tuple[int, ...]  # 1-based secondary node labels
    weights: np.ndarray  # beta_j aligned with nodes


@dataclass
class SchemeOutcome:
    """Per-slot result of one access scheme.

    e_h1 is the first-stage energy harvested at the PT in J/Hz;
    secondary_rates has one entry per transmitter (bits/s/Hz, zero when not
    scheduled). Node labels are 1-based. k_beam_clamped flags a powering-set
    request larger than the number of eligible nodes.
    """

    scheme: SchemeId
    e_h1: float
    secondary_rates: np.ndarray
    scheduled_transmitters: tuple[int, ...]
    powering_set: tuple[int, ...]
    k_beam_clamped: bool = False

    @property
    def secondary_sum_rate(self) -> float:
        return float(self.secondary_rates.sum())


def beamform_weights(ch: ChannelRealization, omega) -> BeamformWeights:
    """Weights beta_j = h(s_j, p) / sqrt(sum_j |h(s_j, p)|^2) over omega."""
    nodes = tuple(int(j) for j in omega)
    if not nodes:
        raise ValueError("powering set must be nonempty")
    h = ch.sec_to_pt[[j - 1 for j in nodes]]
    total = np.sum(np.abs(h) ** 2)
    if total == 0.0:
        raise DegenerateChannelError("all powering channels are exactly zero")
    return BeamformWeights(nodes, h / np.sqrt(total))


def _pair_rate_terms(ch: ChannelRealization, cfg: SimConfig) -> np.ndarray:
    """log2(1 + P_s * theta_data / kappa) per transmitter."""
    return np.log2(1.0 + cfg.p_s * ch.pair_gains / cfg.kappa)


def eval_first_psa(ch: ChannelRealization, cfg: SimConfig) -> SchemeOutcome:
    """Round-robin access: each of the N/2 transmitters gets alpha/(N/2)."""
    half = ch.n_secondary // 2
    share = cfg.alpha / half
    e_h1 = cfg.p_s * share * cfg.slot_seconds * cfg.eta * float(ch.sec_to_pt_gain[:half].sum())
    rates = share * _pair_rate_terms(ch, cfg)
    return SchemeOutcome(
        SchemeId.FIRST, e_h1, rates,
        scheduled_transmitters=tuple(range(1, half + 1)),
        powering_set=tuple(range(1, half + 1)),
    )


def eval_second_psa(ch: ChannelRealization, cfg: SimConfig) -> SchemeOutcome:
    """Simultaneous access over the full alpha window, interference-limited.

    The denominator uses each interferer's gain to the victim destination;
    cfg.paper_literal_interference switches to the interferers' own-link
    gains instead (distributionally identical under i.i.d. fading).
    """
    half = ch.n_secondary // 2
    data = ch.pair_gains
    if cfg.paper_literal_interference:
        interference = cfg.p_s * (data.sum() - data)
    else:
        block = ch.cross_gain_block  # row: interferer, column: victim pair
        interference = cfg.p_s * (block.sum(axis=0) - np.diagonal(block))
    e_h1 = cfg.p_s * cfg.alpha * cfg.slot_seconds * cfg.eta * float(ch.sec_to_pt_gain[:half].sum())
    rates = cfg.alpha * np.log2(1.0 + cfg.p_s * data / (cfg.kappa + interference))
    return SchemeOutcome(
        SchemeId.SECOND, e_h1, rates,
        scheduled_transmitters=tuple(range(1, half + 1)),
        powering_set=tuple(range(1, half + 1)),
    )


def _best_data_link(ch: ChannelRealization) -> int:
    """0-based index of the transmitter with the strongest link to its pair."""
    return int(np.argmax(ch.pair_gains))


def eval_third_psa(ch: ChannelRealization, cfg: SimConfig) -> SchemeOutcome:
    """Best data pair transmits; the best remaining node powers the PT.

    Secondary destinations are eligible powering nodes. With N = 2 nothing
    remains outside the scheduled pair, so the pair's receiver doubles as
    the powering node.
    """
    n = ch.n_secondary
    half = n // 2
    k = _best_data_link(ch)
    partner = k + half
    theta_pt = ch.sec_to_pt_gain
    eligible = np.ones(n, dtype=bool)
    eligible[[k, partner]] = False
    if not eligible.any():
        r = partner
    else:
        masked = np.where(eligible, theta_pt, -1.0)
        r = int(np.argmax(masked))
    e_h1 = cfg.p_s * cfg.alpha * cfg.slot_seconds * cfg.eta * float(theta_pt[k] + theta_pt[r])
    rates = np.zeros(half)
    rates[k] = cfg.alpha * np.log2(1.0 + cfg.p_s * ch.pair_gains[k] / cfg.kappa)
    return SchemeOutcome(
        SchemeId.THIRD, e_h1, rates,
        scheduled_transmitters=(k + 1,),
        powering_set=(r + 1,),
    )


def _powering_set(theta_order: np.ndarray, exclude: tuple[int, int], size: int) -> list[int]:
    """First `size` 0-based nodes from a descending gain order, skipping a pair."""
    omega = []
    for j in theta_order:
        if j == exclude[0] or j == exclude[1]:
            continue
        omega.append(int(j))
        if len(omega) == size:
            break
    return omega


def eval_fourth_psa(ch: ChannelRealization, cfg: SimConfig) -> SchemeOutcome:
    """Best data pair transmits; K nodes beamform their powering signals.

    The powering set is the K strongest remaining links to the PT (with the
    matched-filter weights, received beam power equals the sum of those
    gains, so top-K is the energy maximizer). K larger than N - 2 is
    clamped and flagged.
    """
    n = ch.n_secondary
    half = n // 2
    k = _best_data_link(ch)
    partner = k + half
    theta_pt = ch.sec_to_pt_gain
    clamped = cfg.beam_set_size > n - 2
    size = min(cfg.beam_set_size, n - 2)
    order = np.argsort(-theta_pt, kind="stable")
    omega = _powering_set(order, (k, partner), size)
    if omega:
        bf = beamform_weights(ch, [j + 1 for j in omega])
        beam_power = float(np.abs(np.vdot(bf.weights, ch.sec_to_pt[omega])) ** 2)
    else:
        beam_power = 0.0
    e_h1 = cfg.p_s * cfg.alpha * cfg.slot_seconds * cfg.eta * (float(theta_pt[k]) + beam_power)
    rates = np.zeros(half)
    rates[k] = cfg.alpha * np.log2(1.0 + cfg.p_s * ch.pair_gains[k] / cfg.kappa)
    return SchemeOutcome(
        SchemeId.FOURTH, e_h1, rates,
        scheduled_transmitters=(k + 1,),
        powering_set=tuple(j + 1 for j in omega),
        k_beam_clamped=clamped,
    )


def eval_fifth_psa(ch: ChannelRealization, cfg: SimConfig) -> SchemeOutcome:
    """Equal time shares with per-phase beamformed powering.

    Rates coincide with the first scheme. Each phase i excludes the active
    pair from its powering set; with matched-filter weights the beamformed
    term reduces to the sum of the selected gains to the PT.
    """
    n = ch.n_secondary
    half = n // 2
    share = cfg.alpha / half
    theta_pt = ch.sec_to_pt_gain
    clamped = cfg.beam_set_size > n - 2
    size = min(cfg.beam_set_size, n - 2)
    if size == n - 2:
        # every phase powers with all nodes outside its active pair, so the
        # per-phase term theta_i + (total - theta_i - theta_partner) collapses
        total = float(theta_pt.sum())
        harvested = float(np.sum(total - theta_pt[half:]))
        powering_nodes = tuple(range(1, n + 1)) if n > 2 else ()
    else:
        # only the top size + 2 gains can ever be selected
        order = np.argsort(-theta_pt, kind="stable")[: size + 2]
        harvested = 0.0
        union: set[int] = set()
        for i in range(half):
            omega = _powering_set(order, (i, i + half), size)
            harvested += float(theta_pt[i]) + float(theta_pt[omega].sum() if omega else 0.0)
            union.update(omega)
        powering_nodes = tuple(sorted(j + 1 for j in union))
    e_h1 = cfg.p_s * share * cfg.slot_seconds * cfg.eta * harvested
    rates = share * _pair_rate_terms(ch, cfg)
    return SchemeOutcome(
        SchemeId.FIFTH, e_h1, rates,
        scheduled_transmitters=tuple(range(1, half + 1)),
        powering_set=powering_nodes,
        k_beam_clamped=clamped,
    )


_EVALUATORS = {
    SchemeId.FIRST: eval_first_psa,
    SchemeId.SECOND: eval_second_psa,
    SchemeId.THIRD: eval_third_psa,
    SchemeId.FOURTH: eval_fourth_psa,
    SchemeId.FIFTH: eval_fifth_psa,
}


def evaluate_scheme(scheme, ch: ChannelRealization, cfg: SimConfig) -> SchemeOutcome:
    """Dispatch by SchemeId or scheme name ("first".."fifth")."""
    if not isinstance(scheme, SchemeId):
        scheme = SchemeId.from_name(scheme)
    return _EVALUATORS[scheme](ch, cfg)
