"""Executable uncertainty inequalities.

Each check computes both sides of an inequality from its inputs and
returns them alongside the verdict, so a report can always be re-derived
from the raw numbers it carries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid_core import (
    Grid1D,
    GridError,
    GridFunction,
    angle_between,
    inner_product,
    make_uniform_grid,
    norm,
)
from .operators import (
    OperatorError,
    OperatorMatrix,
    anticommutator,
    apply,
    commutator,
    expectation_deviation,
    fourier_op,
    region_mask,
    shifted,
    weighted_hermitian_defect,
)

INEQUALITY_TOL = 1e-9
HEISENBERG_BOUND = np.pi / 2
EDGE_MASS_TOL = 1e-6
NORMALIZE_WINDOW = 0.1

EPSILON_CONVENTION = (
    "eps_T is measured in L1 with the linear form int_VT|f| = (1 - eps_T)||f||_1; "
    "eps_R in L2 with the quadratic form ||chi f_hat||^2 = (1 - eps_R^2)||f_hat||^2. "
    "The generic eps-concentration definition is quadratic in every norm; the linear "
    "L1 form is the one under which the volumetric bound follows link by link."
)


# --- reports -----------------------------------------------------------------


@dataclass(frozen=True)
class SymmetricUPResult:
    lhs: float
    rhs: float
    holds: bool
    commutator_term: float
    anticommutator_term: float
    # the same inequality at a = tau_A(f), b = tau_B(f)
    sigma_a: float
    sigma_b: float
    centred_rhs: float
    commutator_bound: float
    centred_holds: bool


@dataclass(frozen=True)
class HeisenbergReport:
    x_o: float
    omega_o: float
    delta_x: float
    delta_omega: float
    product: float
    bound: float
    holds: bool
    slack: float


@dataclass(frozen=True)
class ConcentrationReport:
    alpha: float
    beta: float
    theta0: float
    lhs: float
    holds: bool
    margin: float


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    margin: float
    excluded_corner: bool


@dataclass(frozen=True)
class TriangleResult:
    lhs: float
    rhs: float
    holds: bool


@dataclass(frozen=True)
class DonohoStarkReport:
    alpha: float
    beta: float
    eps_T: float
    eps_R: float
    vol_T: float
    vol_R: float
    lhs: float
    rhs: float
    holds: bool
    corollary_applies: bool
    corollary_rhs: float
    corollary_holds: bool | None
    chain: list = field(default_factory=list)
    chain_holds: list = field(default_factory=list)
    epsilon_convention: str = EPSILON_CONVENTION


# --- symmetric operators -------------------------------------------------------


def _require_symmetric(*ops: OperatorMatrix) -> None:
    for op in ops:
        if not op.symmetric or weighted_hermitian_defect(op) > 1e-10:
            raise OperatorError("operator is not symmetric for the grid inner product")


def _up_sides(A, B, a, b, f):
    Aa, Bb = shifted(A, a), shifted(B, b)
    lhs = norm(apply(Aa, f)) * norm(apply(Bb, f))
    comm = abs(inner_product(apply(commutator(A, B), f), f))
    anti = abs(inner_product(apply(anticommutator(Aa, Bb), f), f))
    return lhs, 0.5 * np.hypot(comm, anti), comm, anti


def symmetric_up_check(A: OperatorMatrix, B: OperatorMatrix, a: float, b: float,
                       f: GridFunction, tol: float = INEQUALITY_TOL) -> SymmetricUPResult:
    """``||(A-a)f|| ||(B-b)f|| >= 1/2 {|<[A,B]f,f>|^2 + |<[A-a,B-b]_+ f,f>|^2}^(1/2)``.

    Also evaluates the centred case a = tau_A(f), b = tau_B(f), where the
    left side is the product of deviations.
    """
    _require_symmetric(A, B)
    ff = inner_product(f, f).real
    if ff == 0:
        raise GridError("f must be nonzero")
    lhs, rhs, comm, anti = _up_sides(A, B, a, b, f)
    ta = expectation_deviation(A, f).tau.real
    tb = expectation_deviation(B, f).tau.real
    c_lhs, c_rhs, c_comm, _ = _up_sides(A, B, ta, tb, f)
    return SymmetricUPResult(
        lhs=lhs, rhs=rhs, holds=bool(lhs >= rhs - tol * ff),
        commutator_term=comm, anticommutator_term=anti,
        sigma_a=expectation_deviation(A, f).sigma, sigma_b=expectation_deviation(B, f).sigma,
        centred_rhs=c_rhs, commutator_bound=0.5 * c_comm,
        centred_holds=bool(c_lhs >= c_rhs - tol * ff),
    )


# --- Heisenberg ------------------------------------------------------------------


def gaussian_minimizer(r: float, x_o: float, omega_o: float, grid: Grid1D) -> GridFunction:
    """``(r/pi)^(1/4) exp(i omega_o x) exp(-r (x - x_o)^2 / 2)`` sampled on the grid."""
    if r <= 0:
        raise ValueError("r must be positive")
    x = grid.nodes
    vals = (r / np.pi) ** 0.25 * np.exp(1j * omega_o * x) * np.exp(-r * (x - x_o) ** 2 / 2)
    return GridFunction(vals, grid)


def default_heisenberg_grids(n: int = 2048, half_width: float = 12.0):
    t = make_uniform_grid(-half_width, half_width, n, "time")
    w = make_uniform_grid(-half_width, half_width, n, "frequency")
    return t, w


def heisenberg_moments(f: GridFunction, freq_grid: Grid1D, normalize: bool = True,
                       fourier: OperatorMatrix | None = None,
                       tol: float = 1e-6) -> HeisenbergReport:
    """Position and frequency spreads of a unit-norm function.

    The spreads are second moments.  The frequency mean is the centroid of
    ``|f_hat|^2``; the frequency spread is left unnormalised, so with
    ``f_hat(w) = int f exp(-i w t) dt`` it carries the factor 2 pi and the
    bound on the product is pi/2.
    """
    grid = f.grid
    mag = np.abs(f.values)
    peak = mag.max()
    if peak == 0:
        raise GridError("f must be nonzero")
    if max(mag[0], mag[-1]) > EDGE_MASS_TOL * peak:
        raise GridError("f has mass at the grid boundary; widen the time grid")
    nrm = norm(f)
    if abs(nrm - 1) > 1e-6:
        if not normalize or abs(nrm - 1) > NORMALIZE_WINDOW:
            raise GridError(f"f must have unit norm (got {nrm:.6g})")
        f = GridFunction(f.values / nrm, grid)
    F = fourier if fourier is not None else fourier_op(grid, freq_grid)
    fhat = apply(F, f)
    t, w = grid.nodes, freq_grid.nodes
    dens_t = grid.weights * np.abs(f.values) ** 2
    dens_w = freq_grid.weights * np.abs(fhat.values) ** 2
    x_o = float(np.sum(t * dens_t))
    omega_o = float(np.sum(w * dens_w) / np.sum(dens_w))
    delta_x = float(np.sum((t - x_o) ** 2 * dens_t))
    delta_omega = float(np.sum((w - omega_o) ** 2 * dens_w))
    product = delta_x * delta_omega
    return HeisenbergReport(
        x_o=x_o, omega_o=omega_o, delta_x=delta_x, delta_omega=delta_omega,
        product=product, bound=HEISENBERG_BOUND,
        holds=bool(product >= HEISENBERG_BOUND * (1 - tol)),
        slack=product - HEISENBERG_BOUND,
    )


# --- energy concentration ------------------------------------------------------------


def energy_fraction(f: GridFunction, P: OperatorMatrix) -> float:
    """``||P f||^2 / ||f||^2`` for an orthogonal projector P."""
    nf = norm(f)
    if nf == 0:
        raise GridError("f must be nonzero")
    return norm(apply(P, f)) ** 2 / nf**2


def landau_pollak_feasible(alpha: float, beta: float, lambda0: float,
                           tol: float = 1e-12) -> FeasibilityResult:
    """Whether a unit function can have time fraction alpha^2 and band fraction beta^2."""
    for name, v in (("alpha", alpha), ("beta", beta), ("lambda0", lambda0)):
        if not 0 <= v <= 1:
            raise ValueError(f"{name}={v} outside [0, 1]")
    margin = float(np.arccos(alpha) + np.arccos(beta) - np.arccos(np.sqrt(lambda0)))
    corner = (alpha, beta) in ((0, 1), (1, 0))
    return FeasibilityResult(bool(margin >= -tol and not corner), margin, corner)


def boundary_curve(alphas, lambda0: float) -> np.ndarray:
    """Largest feasible beta for each alpha: cos(max(0, acos sqrt(lambda0) - acos alpha))."""
    alphas = np.asarray(alphas, dtype=float)
    return np.cos(np.maximum(0.0, np.arccos(np.sqrt(lambda0)) - np.arccos(alphas)))


def subspace_up_check(f: GridFunction, P_B: OperatorMatrix, P_D: OperatorMatrix,
                      theta0: float, tol: float = INEQUALITY_TOL) -> ConcentrationReport:
    """``acos(alpha) + acos(beta) >= theta0`` with alpha from P_D, beta from P_B."""
    alpha = float(np.sqrt(min(1.0, energy_fraction(f, P_D))))
    beta = float(np.sqrt(min(1.0, energy_fraction(f, P_B))))
    lhs = float(np.arccos(alpha) + np.arccos(beta))
    return ConcentrationReport(alpha, beta, float(theta0), lhs, bool(lhs >= theta0 - tol), lhs - theta0)


def angle_triangle_check(f: GridFunction, g: GridFunction, h: GridFunction,
                         tol: float = 1e-12) -> TriangleResult:
    """``theta(f, g) <= theta(f, h) + theta(g, h)``."""
    lhs = angle_between(f, g)
    rhs = angle_between(f, h) + angle_between(g, h)
    return TriangleResult(lhs, rhs, bool(lhs <= rhs + tol))


def triangle_sweep(F: np.ndarray, G: np.ndarray, H: np.ndarray, weights=None, tol: float = 1e-12):
    """Vectorised triangle check over rows of three (m, n) arrays.

    Returns (lhs, rhs, violations).
    """
    w = np.ones(F.shape[1]) if weights is None else np.asarray(weights)

    def ang(X, Y):
        ip = np.sum(w * X * np.conj(Y), axis=1).real
        nx = np.sqrt(np.sum(w * np.abs(X) ** 2, axis=1))
        ny = np.sqrt(np.sum(w * np.abs(Y) ** 2, axis=1))
        return np.arccos(np.clip(ip / (nx * ny), -1.0, 1.0))

    lhs = ang(F, G)
    rhs = ang(F, H) + ang(G, H)
    return lhs, rhs, int(np.sum(lhs > rhs + tol))


# --- volumetric Donoho-Stark ------------------------------------------------------------


def epsilon_concentration(f: GridFunction, region, norm_kind: str = "L2") -> float:
    """Concentration defect of f in a region (0 = fully inside, 1 = fully outside)."""
    m = region_mask(f.grid, region)
    inside = GridFunction(np.where(m, f.values, 0), f.grid)
    total = norm(f, norm_kind)
    if total == 0:
        raise GridError("f must be nonzero")
    if norm_kind == "L2":
        return float(np.sqrt(max(0.0, 1 - norm(inside) ** 2 / total**2)))
    if norm_kind == "L1":
        return float(max(0.0, 1 - norm(inside, "L1") / total))
    raise ValueError("epsilon concentration uses L1 or L2")


def _region_measure(grid, region) -> float:
    return float(grid.weights[region_mask(grid, region)].sum())


def donoho_stark_check(f: GridFunction, Gamma: OperatorMatrix, region_T, region_R,
                       tol: float = INEQUALITY_TOL) -> DonohoStarkReport:
    """``|V_T||V_R| alpha^2 beta^2 >= (1 - eps_T)^2 (1 - eps_R^2)`` for ``f_hat = Gamma f``.

    alpha and beta are the tightest constants for this f:
    ``alpha = ||f||_2 / ||f_hat||_2`` and ``beta = ||f_hat||_inf / ||f||_1``.
    The report also carries every intermediate bound on ``||f||_2^2``.
    """
    fhat = apply(Gamma, f)
    n1, n2 = norm(f, "L1"), norm(f)
    h2, hinf = norm(fhat), norm(fhat, "Linf")
    if not all(np.isfinite(v) and v > 0 for v in (n1, n2, h2, hinf)):
        raise GridError("degenerate norms: f and f_hat must be nonzero and finite")
    alpha, beta = n2 / h2, hinf / n1
    eps_T = epsilon_concentration(f, region_T, "L1")
    eps_R = epsilon_concentration(fhat, region_R, "L2")
    vol_T = _region_measure(f.grid, region_T)
    vol_R = _region_measure(fhat.grid, region_R)
    lhs = vol_T * vol_R * alpha**2 * beta**2
    rhs = (1 - eps_T) ** 2 * (1 - eps_R**2)

    inside_T = float(np.sum(f.grid.weights * np.abs(f.values) * region_mask(f.grid, region_T)))
    with np.errstate(divide="ignore"):
        kR = alpha**2 * vol_R / (1 - eps_R**2)
        kT = 1 / (1 - eps_T) ** 2
    chain = [
        n2**2,
        alpha**2 * h2**2,
        kR * hinf**2,
        kR * beta**2 * n1**2,
        kR * beta**2 * kT * inside_T**2,
        kR * beta**2 * kT * vol_T * n2**2,
    ]
    chain_holds = [bool(chain[i] <= chain[i + 1] * (1 + tol)) for i in range(len(chain) - 1)]

    corollary = eps_T == 0.0
    cor_rhs = 1 - eps_R**2
    return DonohoStarkReport(
        alpha=alpha, beta=beta, eps_T=eps_T, eps_R=eps_R, vol_T=vol_T, vol_R=vol_R,
        lhs=lhs, rhs=rhs, holds=bool(lhs >= rhs * (1 - tol)),
        corollary_applies=corollary, corollary_rhs=cor_rhs,
        corollary_holds=bool(lhs >= cor_rhs * (1 - tol)) if corollary else None,
        chain=[float(c) for c in chain], chain_holds=chain_holds,
    )
