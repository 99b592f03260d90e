"""Shared helpers for hand-built channel realizations."""

import numpy as np

from coopswipt.channel import ChannelRealization


def label_index(n_secondary: int, node) -> int:
    if node == "p":
        return n_secondary
    if node == "pd":
        return n_secondary + 1
    return int(node) - 1


def make_channel(n_secondary: int, links: dict | None = None) -> ChannelRealization:
    """Realization with explicit coefficients for the given (a, b) labels, zeros elsewhere."""
    n = n_secondary + 2
    coeff = np.zeros((n, n), dtype=complex)
    for (a, b), value in (links or {}).items():
        ia, ib = label_index(n_secondary, a), label_index(n_secondary, b)
        coeff[ia, ib] = value
        coeff[ib, ia] = value
    return ChannelRealization(coeff, n_secondary)


def random_channel_any_n(n_secondary: int, seed: int, mean_gain: float = 1.0) -> ChannelRealization:
    """Random reciprocal realization without topology constraints (any N >= 1)."""
    rng = np.random.default_rng(seed)
    n = n_secondary + 2
    iu = np.triu_indices(n, k=1)
    values = (rng.standard_normal(iu[0].size) + 1j * rng.standard_normal(iu[0].size)) * np.sqrt(
        mean_gain / 2.0
    )
    coeff = np.zeros((n, n), dtype=complex)
    coeff[iu] = values
    coeff[(iu[1], iu[0])] = values
    return ChannelRealization(coeff, n_secondary)
