"""Complex dense linear algebra for relay selection.

Hermitian positive-definite Cholesky factorization, solves through the
factor, and an orthogonal-matching-pursuit greedy sparse solver. All
routines are pure functions over dense numpy arrays; problem sizes here are
at most a few hundred, so the factorization is plain and unblocked.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import FactorizationError

# Default tolerances; callers may override per invocation.
HERMITIAN_RTOL = 1e-10
SOLVE_RTOL = 1e-9
OMP_RESIDUAL_RTOL = 1e-12


def _as_square_matrix(r) -> np.ndarray:
    r = np.asarray(r, dtype=complex)
    if r.ndim != 2 or r.shape[0] != r.shape[1] or r.shape[0] == 0:
        raise ValueError(f"expected a square matrix, got shape {r.shape}")
    return r


def cholesky(r, *, check_hermitian: bool = True, hermitian_rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Lower-triangular L with L L^H = r, real positive diagonal.

    Raises FactorizationError naming the failing pivot when r is not
    numerically positive definite.
    """
    r = _as_square_matrix(r)
    if check_hermitian:
        scale = np.linalg.norm(r)
        if np.linalg.norm(r - r.conj().T) > hermitian_rtol * max(scale, 1e-300):
            raise ValueError("matrix is not Hermitian within tolerance")
    n = r.shape[0]
    # build U = L^H row by row (contiguous row updates), return L
    u = np.zeros_like(r)
    for j in range(n):
        col = u[:j, j]
        pivot = r[j, j].real - np.real(np.vdot(col, col))
        if not pivot > 0.0:
            raise FactorizationError(j)
        diag = np.sqrt(pivot)
        u[j, j] = diag
        if j + 1 < n:
            u[j, j + 1 :] = (r[j, j + 1 :] - col.conj() @ u[:j, j + 1 :]) / diag
    return u.conj().T.copy()


def solve_lower(ell: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve L x = b for lower-triangular L."""
    return solve_triangular(ell, b, lower=True, check_finite=False)


def solve_upper_conj(ell: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve L^H x = b given the lower-triangular factor L."""
    return solve_triangular(ell, b, lower=True, trans="C", check_finite=False)


def solve_hermitian(r, b, *, factor: np.ndarray | None = None) -> np.ndarray:
    """Solve r x = b for Hermitian positive-definite r via its Cholesky factor."""
    ell = cholesky(r) if factor is None else factor
    return solve_upper_conj(ell, solve_lower(ell, np.asarray(b, dtype=complex)))


@dataclass
class SparseSolution:
    """Result of an OMP run.

    support holds the selected column indices in selection order; values are
    the least-squares coefficients on that support. residual_norm_history
    starts with the norm of the target and gains one entry per iteration;
    it is non-increasing. rank_deficient marks supports whose least-squares
    system was solved in the minimum-norm sense.
    """

    support: list[int]
    values: np.ndarray
    residual_norm_history: list[float]
    n_columns: int
    rank_deficient: bool = False

    @property
    def vector(self) -> np.ndarray:
        """Dense solution with zeros off the support."""
        x = np.zeros(self.n_columns, dtype=complex)
        if self.support:
            x[self.support] = self.values
        return x

    @property
    def residual_norm(self) -> float:
        return self.residual_norm_history[-1]


def omp(
    a,
    y,
    sparsity: int,
    *,
    normalized: bool = True,
    residual_rtol: float = OMP_RESIDUAL_RTOL,
) -> SparseSolution:
    """Orthogonal matching pursuit with a fixed-sparsity stopping rule.

    Per iteration: pick the column of `a` most correlated with the residual
    (|<column, residual>| / ||column|| by default; raw inner products when
    normalized=False), refit all selected coefficients by least squares, and
    update the residual. Stops after `sparsity` selections or once the
    residual norm falls to residual_rtol * ||y||. Exact score ties go to the
    lowest column index; all-zero columns are never selected.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"measurement matrix must be 2-D, got shape {a.shape}")
    y = np.asarray(y, dtype=complex)
    m, n = a.shape
    if y.shape != (m,):
        raise ValueError(f"target must have shape ({m},), got {y.shape}")
    if not 1 <= sparsity <= n:
        raise ValueError(f"sparsity must be in [1, {n}], got {sparsity}")

    column_norms = np.linalg.norm(a, axis=0)
    selectable = column_norms > 0.0
    y_norm = float(np.linalg.norm(y))
    history = [y_norm]
    support: list[int] = []
    values = np.zeros(0, dtype=complex)
    rank_deficient = False
    residual = y.copy()

    while len(support) < sparsity and history[-1] > residual_rtol * y_norm:
        scores = np.abs(a.conj().T @ residual)
        if normalized:
            scores = np.divide(scores, column_norms, out=scores, where=selectable)
        scores[~selectable] = -1.0
        if support:
            scores[support] = -1.0
        best = int(np.argmax(scores))
        if scores[best] <= 0.0:
            break  # nothing usable left; residual cannot improve
        support.append(best)
        basis = a[:, support]
        values, _, rank, _ = np.linalg.lstsq(basis, y, rcond=None)
        if rank < len(support):
            rank_deficient = True
        residual = y - basis @ values
        history.append(float(np.linalg.norm(residual)))

    return SparseSolution(support, values, history, n, rank_deficient)
