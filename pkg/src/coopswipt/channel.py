"""Quasi-static Rayleigh fading over the cooperative network.

One realization holds the complex coefficient of every node pair among the
N secondary nodes, the primary transmitter ("p") and the primary
destination ("pd"). Coefficients are reciprocal (h(a,b) == h(b,a) exactly)
and stay fixed for one slot; successive slots are drawn independently from
the same generator stream so a single seed reproduces a whole run.
"""

from dataclasses import dataclass

import numpy as np

PT_NODE = "p"
PD_NODE = "pd"

_triu_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


@dataclass(frozen=True)
class NetworkTopology:
    """N secondary nodes: transmitters 1..N/2 paired with receivers N/2+1..N."""

    n_secondary: int

    def __post_init__(self):
        n = self.n_secondary
        if not isinstance(n, int) or n < 2 or n % 2 != 0:
            raise ValueError(f"n_secondary must be an even integer >= 2, got {n!r}")

    @property
    def n_pairs(self) -> int:
        return self.n_secondary // 2

    @property
    def n_nodes(self) -> int:
        # secondary nodes plus PT and primary destination
        return self.n_secondary + 2

    def pair_of(self, m: int) -> int:
        """Partner of secondary node m (1-based): m + N/2 mod N, involutive."""
        if not 1 <= m <= self.n_secondary:
            raise ValueError(f"secondary node label out of range: {m}")
        half = self.n_pairs
        return m + half if m <= half else m - half

    def node_index(self, node) -> int:
        """Array index of a node label: 1..N for secondary, 'p', 'pd'."""
        if node == PT_NODE:
            return self.n_secondary
        if node == PD_NODE:
            return self.n_secondary + 1
        if isinstance(node, (int, np.integer)) and 1 <= node <= self.n_secondary:
            return int(node) - 1
        raise ValueError(f"unknown node identifier: {node!r}")


@dataclass(frozen=True)
class FadingParams:
    """Rayleigh block-fading parameters: E[|h|^2] per link and the seed."""

    mean_gain: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not self.mean_gain > 0:
            raise ValueError(f"mean_gain must be positive, got {self.mean_gain}")


class ChannelRealization:
    """One slot's coefficients for all node pairs, with derived gains.

    Immutable after creation; safe to share across threads. Array layout:
    secondary nodes at indices 0..N-1 (label m at m-1), PT at N, PD at N+1.
    """

    __slots__ = ("n_secondary", "topology", "coefficients", "gains")

    def __init__(self, coefficients: np.ndarray, n_secondary: int):
        if n_secondary < 1:
            raise ValueError(f"n_secondary must be >= 1, got {n_secondary}")
        coefficients = np.asarray(coefficients, dtype=complex)
        n_nodes = n_secondary + 2
        if coefficients.shape != (n_nodes, n_nodes):
            raise ValueError(
                f"coefficient matrix must be {n_nodes}x{n_nodes}, got {coefficients.shape}"
            )
        if not np.array_equal(coefficients, coefficients.T):
            raise ValueError("coefficients must be reciprocal: h(a,b) == h(b,a)")
        self.n_secondary = n_secondary
        self.topology = None if n_secondary % 2 else NetworkTopology(n_secondary)
        self.coefficients = coefficients
        self.gains = np.abs(coefficients) ** 2
        self.coefficients.setflags(write=False)
        self.gains.setflags(write=False)

    # -- label-based access -------------------------------------------------

    def _index(self, node) -> int:
        if node == PT_NODE:
            return self.n_secondary
        if node == PD_NODE:
            return self.n_secondary + 1
        if isinstance(node, (int, np.integer)) and 1 <= node <= self.n_secondary:
            return int(node) - 1
        raise ValueError(f"unknown node identifier: {node!r}")

    def coefficient(self, a, b) -> complex:
        ia, ib = self._index(a), self._index(b)
        if ia == ib:
            raise ValueError(f"self-channel {a!r}->{b!r} is undefined")
        return complex(self.coefficients[ia, ib])

    def gain(self, a, b) -> float:
        """Squared magnitude of the (a, b) coefficient."""
        ia, ib = self._index(a), self._index(b)
        if ia == ib:
            raise ValueError(f"self-channel {a!r}->{b!r} is undefined")
        return float(self.gains[ia, ib])

    # -- vector views used by the scheme and relay computations -------------

    @property
    def sec_to_pt(self) -> np.ndarray:
        """h(s_n, p) for n = 1..N (equals h(p, s_n) by reciprocity)."""
        return self.coefficients[: self.n_secondary, self.n_secondary]

    @property
    def sec_to_pt_gain(self) -> np.ndarray:
        return self.gains[: self.n_secondary, self.n_secondary]

    @property
    def sec_to_pd(self) -> np.ndarray:
        """h(s_n, pd) for n = 1..N."""
        return self.coefficients[: self.n_secondary, self.n_secondary + 1]

    @property
    def pt_to_pd_gain(self) -> float:
        return float(self.gains[self.n_secondary, self.n_secondary + 1])

    @property
    def pair_gains(self) -> np.ndarray:
        """Data-link gains theta(s_i, s_{i+N/2}) for i = 1..N/2."""
        half = self.n_secondary // 2
        idx = np.arange(half)
        return self.gains[idx, idx + half]

    @property
    def cross_gain_block(self) -> np.ndarray:
        """theta(s_j, s_{i+N/2}) with interferer row j and victim pair column i."""
        half = self.n_secondary // 2
        return self.gains[:half, half : self.n_secondary]


def draw_realization(
    rng: np.random.Generator, topology: NetworkTopology, params: FadingParams
) -> ChannelRealization:
    """Draw one slot's coefficients, i.i.d. complex Gaussian per node pair.

    Each unordered pair is drawn once (zero mean, variance mean_gain split
    evenly between real and imaginary parts) and mirrored, so reciprocity is
    exact. The generator advances deterministically.
    """
    n_nodes = topology.n_nodes
    idx = _triu_cache.get(n_nodes)
    if idx is None:
        idx = np.triu_indices(n_nodes, k=1)
        _triu_cache[n_nodes] = idx
    z = rng.standard_normal((2, idx[0].size))
    values = (z[0] + 1j * z[1]) * np.sqrt(params.mean_gain / 2.0)
    coeff = np.zeros((n_nodes, n_nodes), dtype=complex)
    coeff[idx] = values
    coeff[(idx[1], idx[0])] = values
    return ChannelRealization(coeff, topology.n_secondary)
