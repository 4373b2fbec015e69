"""Dense discretizations of the truncation, band-limiting, Fourier and
Green operators, plus the algebra built on top of them.

An :class:`OperatorMatrix` maps functions on ``domain`` to functions on
``codomain``.  Adjoints are taken with respect to the weighted inner
products of the two grids, so ``adjoint(A)`` is ``W_d^{-1} A^H W_c`` rather
than the bare conjugate transpose.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid_core import (
    Grid,
    Grid1D,
    GridError,
    GridFunction,
    VolumeGrid,
    inner_product,
    norm,
    same_grid,
)

SELF_ADJOINT_RTOL = 1e-10


class OperatorError(ValueError):
    """Raised for incompatible grids or invalid operator parameters."""


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    entries: np.ndarray
    domain: Grid
    codomain: Grid
    symmetric: bool = False

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.shape != (self.codomain.size, self.domain.size):
            raise OperatorError(
                f"matrix shape {entries.shape} does not match "
                f"codomain x domain = {(self.codomain.size, self.domain.size)}"
            )
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def is_endomorphism(self) -> bool:
        return same_grid(self.domain, self.codomain)

    def __call__(self, f: GridFunction) -> GridFunction:
        return apply(self, f)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return compose(self, other)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _require_same_shape(self, other)
        return OperatorMatrix(
            self.entries + other.entries, self.domain, self.codomain,
            self.symmetric and other.symmetric,
        )

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _require_same_shape(self, other)
        return OperatorMatrix(
            self.entries - other.entries, self.domain, self.codomain,
            self.symmetric and other.symmetric,
        )

    def __mul__(self, c) -> "OperatorMatrix":
        # real scalars keep self-adjointness, complex ones generally do not
        keeps = self.symmetric and np.isreal(c)
        return OperatorMatrix(c * self.entries, self.domain, self.codomain, bool(keeps))

    __rmul__ = __mul__

    def __neg__(self) -> "OperatorMatrix":
        return -1.0 * self


@dataclass(frozen=True)
class ExpectationReport:
    tau: complex
    sigma: float


def _require_same_shape(a: OperatorMatrix, b: OperatorMatrix) -> None:
    if not (same_grid(a.domain, b.domain) and same_grid(a.codomain, b.codomain)):
        raise OperatorError("operators act between different grids")


def _require_endomorphism(*ops: OperatorMatrix) -> Grid:
    grid = ops[0].domain
    for op in ops:
        if not (same_grid(op.domain, grid) and same_grid(op.codomain, grid)):
            raise OperatorError("operators must map one shared grid to itself")
    return grid


def weighted_hermitian_defect(A: OperatorMatrix) -> float:
    """Relative size of ``W A - (W A)^H``; zero exactly for self-adjoint A."""
    if not A.is_endomorphism:
        return np.inf
    WA = A.domain.weights[:, None] * A.entries
    scale = np.linalg.norm(WA)
    if scale == 0:
        return 0.0
    return float(np.linalg.norm(WA - WA.conj().T) / scale)


def is_self_adjoint(A: OperatorMatrix, rtol: float = SELF_ADJOINT_RTOL) -> bool:
    return weighted_hermitian_defect(A) <= rtol


def identity_op(grid: Grid) -> OperatorMatrix:
    return OperatorMatrix(np.eye(grid.size), grid, grid, True)


def zero_op(domain: Grid, codomain: Grid | None = None) -> OperatorMatrix:
    codomain = domain if codomain is None else codomain
    return OperatorMatrix(
        np.zeros((codomain.size, domain.size)), domain, codomain, same_grid(domain, codomain)
    )


def diagonal_op(grid: Grid, diag) -> OperatorMatrix:
    """Multiplication by a sampled function; self-adjoint when it is real."""
    diag = np.asarray(diag)
    return OperatorMatrix(np.diag(diag.astype(complex)), grid, grid, bool(np.all(np.isreal(diag))))


def region_mask(grid: Grid, region) -> np.ndarray:
    """Resolve a region spec to a boolean mask on the grid.

    ``region`` may be a boolean mask, an interval ``(lo, hi)`` on a 1-D grid,
    or a label (or list of labels) on a volume grid.
    """
    arr = np.asarray(region) if not isinstance(region, str) else None
    if arr is not None and arr.dtype == bool:
        if arr.shape != (grid.size,):
            raise OperatorError("region mask has the wrong length")
        return arr
    if isinstance(grid, Grid1D):
        if np.ndim(region) != 1 or len(region) != 2:
            raise OperatorError("1-D regions are (lo, hi) intervals")
        return grid.mask(region)
    return grid.mask(region)


def truncation_op(grid: Grid, region) -> OperatorMatrix:
    """Multiplication by the indicator of ``region`` (time-limiter D, chi_V)."""
    m = region_mask(grid, region)
    if not m.any():
        raise OperatorError("truncation region covers no grid points")
    return OperatorMatrix(np.diag(m.astype(complex)), grid, grid, True)


def sinc_kernel(x, omega: float) -> np.ndarray:
    """``sin(omega x) / (pi x)`` with the limit ``omega / pi`` at x = 0."""
    return (omega / np.pi) * np.sinc(omega * np.asarray(x) / np.pi)


def band_limiter(grid: Grid1D, omega: float) -> OperatorMatrix:
    """Nystrom discretization of the ideal low-pass projection onto |w| <= omega."""
    if omega <= 0:
        raise OperatorError("band limit must be positive")
    t = grid.nodes
    K = sinc_kernel(t[:, None] - t[None, :], omega) * grid.weights[None, :]
    return OperatorMatrix(K, grid, grid, True)


def fourier_op(time_grid: Grid1D, freq_grid: Grid1D) -> OperatorMatrix:
    """``f_hat(w) = int f(t) exp(-i w t) dt`` evaluated by the time quadrature."""
    phase = np.exp(-1j * np.outer(freq_grid.nodes, time_grid.nodes))
    return OperatorMatrix(phase * time_grid.weights[None, :], time_grid, freq_grid, False)


def inverse_fourier_op(freq_grid: Grid1D, time_grid: Grid1D) -> OperatorMatrix:
    """``f(t) = (1/2pi) int f_hat(w) exp(i w t) dw`` by the frequency quadrature."""
    phase = np.exp(1j * np.outer(time_grid.nodes, freq_grid.nodes))
    return OperatorMatrix(phase * freq_grid.weights[None, :] / (2 * np.pi), freq_grid, time_grid, False)


def helmholtz_kernel(r, k: float) -> np.ndarray:
    """Outgoing free-space Green function ``exp(i k r) / (4 pi r)``."""
    r = np.asarray(r, dtype=float)
    return np.exp(1j * k * r) / (4 * np.pi * r)


def self_cell_value(weight: float) -> float:
    """Integral of ``1/(4 pi |r|)`` over a ball of volume ``weight`` centred at 0."""
    a = (3 * weight / (4 * np.pi)) ** (1 / 3)
    return weight * 3 / (8 * np.pi * a)


def helmholtz_green_op(source: VolumeGrid, field: VolumeGrid, k: float) -> OperatorMatrix:
    """Radiated scalar field on ``field`` points from sources on ``source`` cells.

    Entries are ``G(r_i, r'_j) w_j``.  A field point sitting on a source
    point of the same cell volume gets the ball-averaged static singularity
    instead; any other coincidence is rejected.
    """
    if k <= 0:
        raise OperatorError("wavenumber must be positive")
    diff = field.points[:, None, :] - source.points[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    scale = max(float(np.ptp(np.concatenate([field.points, source.points]), axis=0).max()), 1.0)
    hit = dist <= 1e-12 * scale
    if hit.any():
        rows, cols = np.nonzero(hit)
        if not np.allclose(field.weights[rows], source.weights[cols], rtol=1e-12):
            raise OperatorError("field point coincides with a source point of a different cell")
    safe = np.where(hit, 1.0, dist)
    G = helmholtz_kernel(safe, k) * source.weights[None, :]
    if hit.any():
        G[hit] = [self_cell_value(w) for w in source.weights[np.nonzero(hit)[1]]]
    return OperatorMatrix(G, source, field, False)


def position_op(grid: Grid1D) -> OperatorMatrix:
    return diagonal_op(grid, grid.nodes)


def derivative_op(grid: Grid1D) -> OperatorMatrix:
    """``-i d/dt`` by central differences, second-order one-sided at the ends.

    Self-adjoint only up to boundary terms; use with edge-decaying functions
    or pass through :func:`self_adjoint_part`.
    """
    if not grid.is_uniform:
        raise OperatorError("derivative operator needs a uniform grid")
    n, h = grid.size, grid.spacing
    if n < 3:
        raise OperatorError("derivative operator needs at least three nodes")
    C = np.zeros((n, n))
    idx = np.arange(1, n - 1)
    C[idx, idx + 1] = 1 / (2 * h)
    C[idx, idx - 1] = -1 / (2 * h)
    C[0, :3] = np.array([-3, 4, -1]) / (2 * h)
    C[-1, -3:] = np.array([1, -4, 3]) / (2 * h)
    return OperatorMatrix(-1j * C, grid, grid, False)


def apply(A: OperatorMatrix, f: GridFunction) -> GridFunction:
    if not same_grid(A.domain, f.grid):
        raise GridError("function does not live on the operator's domain grid")
    return GridFunction(A.entries @ f.values, A.codomain)


def compose(*ops: OperatorMatrix) -> OperatorMatrix:
    """Product ``ops[0] @ ops[1] @ ...`` (rightmost applied first)."""
    out = ops[-1]
    for A in reversed(ops[:-1]):
        if not same_grid(A.domain, out.codomain):
            raise OperatorError("cannot compose: grids do not chain")
        out = OperatorMatrix(A.entries @ out.entries, out.domain, A.codomain, False)
    if len(ops) > 1:
        # A B A with self-adjoint parts is self-adjoint (palindromic products)
        palin = all(op.symmetric for op in ops) and all(
            ops[i] is ops[-1 - i] for i in range(len(ops) // 2)
        )
        if palin:
            out = OperatorMatrix(out.entries, out.domain, out.codomain, True)
    return out


def adjoint(A: OperatorMatrix) -> OperatorMatrix:
    """Adjoint with respect to the weighted inner products of both grids."""
    wd, wc = A.domain.weights, A.codomain.weights
    entries = (A.entries.conj().T * wc[None, :]) / wd[:, None]
    return OperatorMatrix(entries, A.codomain, A.domain, A.symmetric)


def self_adjoint_part(A: OperatorMatrix) -> OperatorMatrix:
    """``(A + A^dagger) / 2``, flagged self-adjoint."""
    _require_endomorphism(A)
    return OperatorMatrix((A.entries + adjoint(A).entries) / 2, A.domain, A.codomain, True)


def commutator(A: OperatorMatrix, B: OperatorMatrix) -> OperatorMatrix:
    grid = _require_endomorphism(A, B)
    return OperatorMatrix(A.entries @ B.entries - B.entries @ A.entries, grid, grid, False)


def anticommutator(A: OperatorMatrix, B: OperatorMatrix) -> OperatorMatrix:
    grid = _require_endomorphism(A, B)
    return OperatorMatrix(A.entries @ B.entries + B.entries @ A.entries, grid, grid, False)


def shifted(A: OperatorMatrix, c: complex) -> OperatorMatrix:
    """``A - c I``."""
    grid = _require_endomorphism(A)
    return OperatorMatrix(A.entries - c * np.eye(grid.size), grid, grid, A.symmetric and np.isreal(c))


def expectation_deviation(A: OperatorMatrix, f: GridFunction) -> ExpectationReport:
    """Normalised expectation ``<Af,f>/<f,f>`` and deviation ``||(A - tau) f||``."""
    _require_endomorphism(A)
    ff = inner_product(f, f).real
    if ff == 0:
        raise GridError("expectation undefined for the zero function")
    Af = apply(A, f)
    tau = inner_product(Af, f) / ff
    sigma = norm(GridFunction(Af.values - tau * f.values, f.grid))
    return ExpectationReport(tau=complex(tau), sigma=sigma)
