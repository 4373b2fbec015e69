"""Eigen and singular analysis of concentration operators.

Self-adjoint operators on a weighted grid are not Hermitian as bare
matrices.  Everything here works on the similar matrix
``W^{1/2} A W^{-1/2}``, which is Hermitian exactly when A is self-adjoint
for the weighted inner product, and maps vectors back afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid_core import Grid1D, GridFunction, make_gauss_grid
from .operators import (
    OperatorError,
    OperatorMatrix,
    band_limiter,
    compose,
    truncation_op,
    weighted_hermitian_defect,
)

SEED = 0x5EED
DENSE_LIMIT = 1024
DEFAULT_RANK_TOL = 1e-10
PROJECTOR_TOL = 1e-9


class ConvergenceError(RuntimeError):
    """An iterative eigensolver ran out of iterations."""


@dataclass(frozen=True, eq=False)
class Spectrum:
    values: np.ndarray
    vectors: list
    residuals: np.ndarray

    def __len__(self):
        return len(self.values)


def _symmetrized(A: OperatorMatrix) -> np.ndarray:
    sw = np.sqrt(A.domain.weights)
    S = sw[:, None] * A.entries / sw[None, :]
    return (S + S.conj().T) / 2


def _weighted(A: OperatorMatrix) -> np.ndarray:
    """Matrix of A in orthonormal coordinates of both grids."""
    return np.sqrt(A.codomain.weights)[:, None] * A.entries / np.sqrt(A.domain.weights)[None, :]


def _subspace_iteration(S: np.ndarray, k: int, tol: float, max_iter: int = 5000):
    """Top-k eigenpairs of a Hermitian matrix by block power iteration.

    Rayleigh-Ritz on the block after each sweep.  Power iteration converges
    to the dominant-magnitude end, so a large negative eigenvalue crowding
    out the requested ones is reported rather than silently returned.
    """
    n = S.shape[0]
    block = min(n, k + 8)
    rng = np.random.default_rng(SEED)
    Q, _ = np.linalg.qr(rng.standard_normal((n, block)) + 0j)
    for _ in range(max_iter):
        Q, _ = np.linalg.qr(S @ Q)
        H = Q.conj().T @ (S @ Q)
        vals, Y = np.linalg.eigh((H + H.conj().T) / 2)
        order = np.argsort(vals)[::-1]
        vals, Y = vals[order], Y[:, order]
        Q = Q @ Y
        res = np.linalg.norm(S @ Q[:, :k] - Q[:, :k] * vals[:k], axis=0)
        if np.all(res <= tol):
            if vals[k - 1] < -vals[-1] and block < n:
                raise ConvergenceError("negative eigenvalues dominate; use the dense solver")
            return vals[:k], Q[:, :k]
    raise ConvergenceError(f"subspace iteration did not reach tol={tol} in {max_iter} sweeps")


def top_eigenpairs(A: OperatorMatrix, k: int = 1, tol: float = 1e-8, method: str = "auto") -> Spectrum:
    """k largest eigenvalues of a self-adjoint operator, sorted descending.

    ``method`` is ``"dense"``, ``"iterative"`` or ``"auto"`` (dense up to
    1024 points).  Eigenvectors come back as unit-norm grid functions.
    """
    n = A.domain.size
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}]")
    if not A.is_endomorphism or not A.symmetric:
        raise OperatorError("eigen-solve needs an operator flagged self-adjoint")
    defect = weighted_hermitian_defect(A)
    if defect > 1e-8:
        raise OperatorError(f"operator is not self-adjoint (relative defect {defect:.2e})")
    S = _symmetrized(A)
    scale = max(1.0, float(np.linalg.norm(S, 1)))
    if method == "auto":
        method = "dense" if n <= DENSE_LIMIT else "iterative"
    if method == "dense":
        vals, vecs = np.linalg.eigh(S)
        vals, vecs = vals[::-1][:k], vecs[:, ::-1][:, :k]
    elif method == "iterative":
        vals, vecs = _subspace_iteration(S, k, tol * scale)
    else:
        raise ValueError(f"unknown method {method!r}")
    residuals = np.linalg.norm(S @ vecs - vecs * vals, axis=0)
    if np.any(residuals > tol * scale):
        raise ConvergenceError(f"eigenpair residual {residuals.max():.2e} exceeds tolerance")
    sw = np.sqrt(A.domain.weights)
    functions = []
    for j in range(vecs.shape[1]):
        v = vecs[:, j]
        # fix the phase so the largest entry is real positive (reproducible output)
        v = v * np.exp(-1j * np.angle(v[np.argmax(np.abs(v))]))
        functions.append(GridFunction(v / sw, A.domain))
    return Spectrum(np.asarray(vals, dtype=float), functions, residuals)


def singular_values(A: OperatorMatrix) -> np.ndarray:
    """Singular values with respect to the weighted inner products, descending."""
    return np.linalg.svd(_weighted(A), compute_uv=False)


def operator_norm(A: OperatorMatrix) -> float:
    if not np.all(np.isfinite(A.entries)):
        raise OperatorError("operator has non-finite entries")
    return float(np.linalg.norm(_weighted(A), 2))


def range_projector(A: OperatorMatrix, rank_tol: float = DEFAULT_RANK_TOL) -> OperatorMatrix:
    """Orthogonal projector onto the numerical range of A."""
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    U, s, _ = np.linalg.svd(_weighted(A), full_matrices=False)
    if s.size == 0 or s[0] == 0:
        raise OperatorError("zero operator has no range")
    Ur = U[:, s > rank_tol * s[0]]
    Q = Ur @ Ur.conj().T
    sw = np.sqrt(A.codomain.weights)
    P = Q / sw[:, None] * sw[None, :]
    return OperatorMatrix(P, A.codomain, A.codomain, True)


def projector_defect(P: OperatorMatrix) -> float:
    """Largest of the idempotence and self-adjointness defects, Frobenius-relative."""
    if not P.is_endomorphism:
        return np.inf
    M = _weighted(P)
    scale = max(np.linalg.norm(M), 1e-300)
    idem = np.linalg.norm(M @ M - M) / scale
    herm = np.linalg.norm(M - M.conj().T) / scale
    return float(max(idem, herm))


def is_projector(P: OperatorMatrix, tol: float = PROJECTOR_TOL) -> bool:
    return projector_defect(P) <= tol


def subspace_angle(P_B: OperatorMatrix, P_D: OperatorMatrix, tol: float = PROJECTOR_TOL) -> float:
    """Minimum angle between the ranges of two orthogonal projectors."""
    for name, P in (("first", P_B), ("second", P_D)):
        if not is_projector(P, tol):
            raise OperatorError(f"{name} argument is not an orthogonal projector")
    c = operator_norm(compose(P_B, P_D))
    return float(np.arccos(min(1.0, c)))


def extremal_pair(P_B: OperatorMatrix, P_D: OperatorMatrix):
    """Unit vectors ``u`` in range(P_B), ``v`` in range(P_D) attaining the minimum angle.

    Taken from the top singular pair of ``P_B P_D``; the phase of ``v`` is
    chosen so ``<u, v>`` is real and non-negative.
    """
    grid = P_B.domain
    sw = np.sqrt(grid.weights)
    U, s, Vh = np.linalg.svd(_weighted(compose(P_B, P_D)))
    u, v = U[:, 0], Vh[0].conj()
    v = v * np.exp(1j * np.angle(np.vdot(v, u)))
    return GridFunction(u / sw, grid), GridFunction(v / sw, grid), float(s[0])


def concentration_operator(grid: Grid1D, T: float, omega: float) -> OperatorMatrix:
    """Symmetrized time-band-time operator D B D on a time grid."""
    D = truncation_op(grid, (-T / 2, T / 2))
    return compose(D, band_limiter(grid, omega), D)


def prolate_spectrum(T: float, omega: float, n: int, k: int = 1) -> Spectrum:
    """Top-k eigenpairs of D B D, Nystrom on n Gauss nodes over [-T/2, T/2]."""
    if T <= 0 or omega <= 0:
        raise ValueError("T and Omega must be positive")
    grid = make_gauss_grid(-T / 2, T / 2, n)
    return top_eigenpairs(concentration_operator(grid, T, omega), k, tol=1e-10)


def prolate_lambda0(T: float, omega: float, n: int = 200) -> float:
    return float(prolate_spectrum(T, omega, n, 1).values[0])
