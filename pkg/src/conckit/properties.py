"""Seeded property sweeps over the uncertainty checks.

Each sweep returns a plain dict (JSON-ready) with its sample counts, the
number of violations and the extreme values observed.  The acceptance
suite and ``conc-kit check`` both run these.
"""

from __future__ import annotations

import numpy as np

from .grid_core import (
    GridFunction,
    make_box_volume,
    make_composite_gauss_grid,
    make_counting_grid,
    make_gauss_grid,
    norm,
    union_volume,
)
from .operators import (
    OperatorMatrix,
    band_limiter,
    compose,
    derivative_op,
    fourier_op,
    helmholtz_green_op,
    inverse_fourier_op,
    position_op,
    self_adjoint_part,
    truncation_op,
)
from .oracles import min_angle_brute_force
from .spectral import (
    extremal_pair,
    operator_norm,
    prolate_spectrum,
    range_projector,
    singular_values,
    subspace_angle,
    top_eigenpairs,
)
from .uncertainty import (
    HEISENBERG_BOUND,
    default_heisenberg_grids,
    donoho_stark_check,
    energy_fraction,
    gaussian_minimizer,
    heisenberg_moments,
    landau_pollak_feasible,
    subspace_up_check,
    symmetric_up_check,
    triangle_sweep,
)


def _random_hermitian(rng, n):
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (M + M.conj().T) / 2


def _random_unit(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def _hermite_functions(x, order):
    """Orthonormal Hermite functions h_0..h_order at x (stable recurrence)."""
    H = np.empty((order + 1, x.size))
    H[0] = np.pi ** -0.25 * np.exp(-x**2 / 2)
    if order >= 1:
        H[1] = np.sqrt(2.0) * x * H[0]
    for k in range(2, order + 1):
        H[k] = np.sqrt(2.0 / k) * x * H[k - 1] - np.sqrt((k - 1) / k) * H[k - 2]
    return H


# --- Heisenberg -----------------------------------------------------------------


def heisenberg_sweep(seed: int, n_random: int = 500, rs=(0.25, 1.0, 4.0), grid_n: int = 2048) -> dict:
    """Minimiser family at several widths plus random smooth unit-norm functions."""
    t, w = default_heisenberg_grids(grid_n)
    F = fourier_op(t, w)
    minimizers = []
    for r in rs:
        rep = heisenberg_moments(gaussian_minimizer(r, 0.0, 0.0, t), w, fourier=F)
        minimizers.append({"r": r, "delta_x": rep.delta_x, "delta_omega": rep.delta_omega,
                           "product": rep.product, "rel_error": rep.product / HEISENBERG_BOUND - 1})

    rng = np.random.default_rng(seed)
    products = np.empty(n_random)
    order = 6
    for i in range(n_random):
        r = rng.uniform(0.5, 2.0)
        x0, w0 = rng.uniform(-2, 2), rng.uniform(-2, 2)
        coef = rng.standard_normal(order + 1) + 1j * rng.standard_normal(order + 1)
        coef *= np.exp(-0.5 * np.arange(order + 1))
        s = np.sqrt(r) * (t.nodes - x0)
        vals = r**0.25 * (coef @ _hermite_functions(s, order)) * np.exp(1j * w0 * t.nodes)
        f = GridFunction(vals, t)
        f = f * (1 / norm(f))
        products[i] = heisenberg_moments(f, w, fourier=F).product
    violations = int(np.sum(products < HEISENBERG_BOUND * (1 - 1e-6)))
    return {
        "bound": HEISENBERG_BOUND,
        "minimizers": minimizers,
        "max_minimizer_rel_error": max(abs(m["rel_error"]) for m in minimizers),
        "random_count": n_random,
        "random_min_product": float(products.min()),
        "random_violations": violations,
    }


def position_momentum_equality(grid_n: int = 2048) -> dict:
    """Position vs -i d/dt on the unit Gaussian: both sides of the symmetric-operator bound."""
    t, _ = default_heisenberg_grids(grid_n)
    X = position_op(t)
    P = self_adjoint_part(derivative_op(t))
    res = symmetric_up_check(X, P, 0.0, 0.0, gaussian_minimizer(1.0, 0.0, 0.0, t))
    return {"lhs": res.lhs, "rhs": res.rhs, "holds": res.holds,
            "rel_gap": (res.lhs - res.rhs) / res.rhs}


# --- symmetric operators -------------------------------------------------------


def symmetric_operator_sweep(seed: int, n_pairs: int = 200, dim: int = 32, tol: float = 1e-10) -> dict:
    rng = np.random.default_rng(seed)
    g = make_counting_grid(dim)
    violations, worst = 0, np.inf
    centred_violations = 0
    for _ in range(n_pairs):
        A = OperatorMatrix(_random_hermitian(rng, dim), g, g, True)
        B = OperatorMatrix(_random_hermitian(rng, dim), g, g, True)
        a, b = rng.standard_normal(2) * 3
        f = GridFunction(_random_unit(rng, dim), g)
        res = symmetric_up_check(A, B, a, b, f, tol=tol)
        violations += not res.holds
        centred_violations += not res.centred_holds
        worst = min(worst, res.lhs - res.rhs)
    return {"pairs": n_pairs, "dim": dim, "violations": violations,
            "centred_violations": centred_violations, "min_lhs_minus_rhs": float(worst)}


def equality_operator_pair(rng, dim: int, c: complex):
    """Random A, unit f, and a Hermitian B with (B - tau_B) f = c (A - tau_A) f."""
    g = make_counting_grid(dim)
    A = _random_hermitian(rng, dim)
    f = _random_unit(rng, dim)
    u = A @ f - np.vdot(f, A @ f).real * f
    v = rng.standard_normal() * f + c * u
    Pperp = np.eye(dim) - np.outer(f, f.conj())
    R = Pperp @ _random_hermitian(rng, dim) @ Pperp
    B = np.outer(v, f.conj()) + np.outer(f, v.conj()) - np.vdot(f, v).real * np.outer(f, f.conj()) + R
    return (OperatorMatrix(A, g, g, True), OperatorMatrix(B, g, g, True), GridFunction(f, g))


def symmetric_equality_cases(seed: int, trials: int = 50, dim: int = 12) -> dict:
    """Equality when the centred residuals are proportional (complex multiple for the
    full bound, imaginary multiple for the commutator-only bound)."""
    rng = np.random.default_rng(seed)
    full_gap, comm_gap = 0.0, 0.0
    for _ in range(trials):
        c = complex(rng.standard_normal(), rng.standard_normal())
        A, B, f = equality_operator_pair(rng, dim, c)
        res = symmetric_up_check(A, B, 0.0, 0.0, f)
        full_gap = max(full_gap, abs(res.sigma_a * res.sigma_b - res.centred_rhs))
        A, B, f = equality_operator_pair(rng, dim, 1j * rng.standard_normal())
        res = symmetric_up_check(A, B, 0.0, 0.0, f)
        comm_gap = max(comm_gap, abs(res.sigma_a * res.sigma_b - res.commutator_bound))
    return {"trials": trials, "max_gap_full": full_gap, "max_gap_commutator": comm_gap}


# --- prolate / Landau-Pollak -------------------------------------------------------


def prolate_cases(cs=(0.1, 0.5, 1.0, 2.0, 4.0), T: float = 2.0, n=(200, 400)) -> list:
    """lambda_0 and the count of eigenvalues above 1/2 for each c = Omega T / 2."""
    rows = []
    for c in cs:
        omega = 2 * c / T
        lo = prolate_spectrum(T, omega, n[0], k=min(n[0], 40))
        hi = prolate_spectrum(T, omega, n[1], k=1)
        rows.append({
            "c": c, "T": T, "Omega": omega, "lambda0": float(lo.values[0]),
            "nystrom_diff": float(abs(lo.values[0] - hi.values[0])),
            "count_above_half": int(np.sum(lo.values > 0.5)),
            "two_WT": omega * T / np.pi,
        })
    return rows


def landau_pollak_witness(T: float, omega: float, n: int = 200) -> dict:
    """Band-limited prolate measured on independent grids.

    psi_0 is the top eigenvector of B D B posed in the frequency domain,
    where D acts as the sinc kernel of half-width T/2.  Its time fraction is
    measured by transforming back onto a Gauss grid over [-T/2, T/2].
    """
    lam_time = float(prolate_spectrum(T, omega, n).values[0])
    fgrid = make_composite_gauss_grid([-2 * omega, -omega, omega, 2 * omega], n, "frequency")
    B = truncation_op(fgrid, (-omega, omega))
    D = band_limiter(fgrid, T / 2)
    spec = top_eigenpairs(compose(B, D, B), 1, tol=1e-10)
    psi_hat = spec.vectors[0]
    beta = float(np.sqrt(energy_fraction(psi_hat, B)))
    tgrid = make_gauss_grid(-T / 2, T / 2, n)
    psi_in_window = inverse_fourier_op(fgrid, tgrid)(psi_hat)
    alpha = float(norm(psi_in_window) / (norm(psi_hat) / np.sqrt(2 * np.pi)))
    feas = landau_pollak_feasible(min(alpha, 1.0), min(beta, 1.0), lam_time)
    return {
        "T": T, "Omega": omega, "lambda0_time_side": lam_time,
        "lambda0_band_side": float(spec.values[0]),
        "alpha": alpha, "beta": beta, "sqrt_lambda0": float(np.sqrt(lam_time)),
        "margin": feas.margin, "feasible": feas.feasible,
        "psi0_freq_nodes": fgrid.nodes.tolist(),
        "psi0_hat": np.abs(psi_hat.values).tolist(),
    }


def corner_lattice(lambda0: float) -> dict:
    """Feasibility over alpha, beta in {0, 0.1, ..., 1}."""
    grid = np.round(np.linspace(0, 1, 11), 10)
    rejected_corners, infeasible = [], 0
    for a in grid:
        for b in grid:
            res = landau_pollak_feasible(float(a), float(b), lambda0)
            if res.excluded_corner:
                rejected_corners.append([float(a), float(b)])
            infeasible += not res.feasible
    return {"corners_rejected": rejected_corners, "infeasible_points": infeasible,
            "corner_01": landau_pollak_feasible(0.0, 1.0, lambda0).feasible,
            "corner_10": landau_pollak_feasible(1.0, 0.0, lambda0).feasible}


# --- subspaces ---------------------------------------------------------------


def _random_subspace_pair(rng, n, p, q):
    X = rng.standard_normal((n, p)) + 1j * rng.standard_normal((n, p))
    Y = rng.standard_normal((n, q)) + 1j * rng.standard_normal((n, q))
    g = make_counting_grid(n)

    def proj(M):
        return range_projector(OperatorMatrix(np.pad(M, ((0, 0), (0, n - M.shape[1]))), g, g))

    return X, Y, proj(X), proj(Y)


def angle_oracle_sweep(seed: int, n_pairs: int = 50, max_dim: int = 30, restarts: int = 5000) -> dict:
    rng = np.random.default_rng(seed)
    worst, rows = 0.0, []
    for i in range(n_pairs):
        n = int(rng.integers(4, max_dim + 1))
        p = int(rng.integers(1, n // 2 + 1))
        q = int(rng.integers(1, n - p + 1))
        X, Y, PB, PD = _random_subspace_pair(rng, n, p, q)
        closed = subspace_angle(PB, PD)
        brute = min_angle_brute_force(X, Y, restarts=restarts, seed=seed + i)
        worst = max(worst, abs(closed - brute))
        rows.append({"n": n, "dim_B": p, "dim_D": q, "theta0": closed, "brute_force": brute})
    return {"pairs": n_pairs, "max_abs_diff": worst, "cases": rows}


def subspace_up_sweep(seed: int, n_pairs: int = 5, n_f: int = 1000, n: int = 40, tol: float = 1e-9) -> dict:
    rng = np.random.default_rng(seed)
    g = make_counting_grid(n)
    violations, min_margin, witness_gap = 0, np.inf, 0.0
    for _ in range(n_pairs):
        p, q = int(rng.integers(2, 15)), int(rng.integers(2, 15))
        _, _, PB, PD = _random_subspace_pair(rng, n, p, q)
        theta0 = subspace_angle(PB, PD)
        for _ in range(n_f):
            f = GridFunction(rng.standard_normal(n) + 1j * rng.standard_normal(n), g)
            rep = subspace_up_check(f, PB, PD, theta0, tol=tol)
            violations += not rep.holds
            min_margin = min(min_margin, rep.margin)
        u, v, _ = extremal_pair(PB, PD)
        rep = subspace_up_check(u + v, PB, PD, theta0, tol=tol)
        witness_gap = max(witness_gap, abs(rep.margin))
    return {"pairs": n_pairs, "functions_per_pair": n_f, "violations": violations,
            "min_margin": float(min_margin), "witness_max_gap": witness_gap}


def triangle_property(seed: int, count: int = 100_000, dim: int = 16) -> dict:
    rng = np.random.default_rng(seed)

    def batch():
        return rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))

    lhs, rhs, violations = triangle_sweep(batch(), batch(), batch())
    return {"count": count, "dim": dim, "violations": violations,
            "max_excess": float(np.max(lhs - rhs))}


# --- Donoho-Stark -----------------------------------------------------------------


def donoho_stark_suite(seed: int, omegas=(0.5, 1.0, 2.0, 4.0), n_random: int = 100,
                       band_half_width: float = 400.0) -> dict:
    """Unit box on [-1/2, 1/2] against bands [-Omega, Omega], then random pulses."""
    tgrid = make_gauss_grid(-0.5, 0.5, 300)
    box = GridFunction(np.ones(tgrid.size), tgrid)
    edges = np.linspace(-band_half_width, band_half_width, 81)
    rows = []
    for om in omegas:
        fgrid = make_composite_gauss_grid(np.unique(np.concatenate([edges, [-om, om]])), 16, "frequency")
        rep = donoho_stark_check(box, fourier_op(tgrid, fgrid), (-0.5, 0.5), (-om, om))
        rows.append({"Omega": om, "lhs": rep.lhs, "rhs": rep.rhs, "holds": rep.holds,
                     "alpha": rep.alpha, "beta": rep.beta, "eps_T": rep.eps_T, "eps_R": rep.eps_R,
                     "vol_T": rep.vol_T, "vol_R": rep.vol_R,
                     "corollary_holds": rep.corollary_holds,
                     "chain": rep.chain, "chain_holds": rep.chain_holds})

    rng = np.random.default_rng(seed)
    t = make_gauss_grid(-8, 8, 400)
    fgrid = make_composite_gauss_grid(np.linspace(-40, 40, 41), 16, "frequency")
    F = fourier_op(t, fgrid)
    violations, chain_violations = 0, 0
    for _ in range(n_random):
        width = rng.uniform(0.3, 1.5)
        vals = np.exp(-((t.nodes - rng.uniform(-1, 1)) / width) ** 2) * np.exp(1j * rng.uniform(-3, 3) * t.nodes)
        f = GridFunction(vals, t)
        half_T, half_R = rng.uniform(0.2, 3.0), rng.uniform(0.5, 10.0)
        rep = donoho_stark_check(f, F, (-half_T, half_T), (-half_R, half_R))
        violations += not rep.holds
        chain_violations += not all(rep.chain_holds)
    return {"box": rows, "random_count": n_random, "random_violations": violations,
            "random_chain_violations": chain_violations,
            "all_box_hold": all(r["holds"] and all(r["chain_holds"]) for r in rows)}


# --- spatial ---------------------------------------------------------------------


def nested_masks(ambient, center, extents, n_per_axis, steps: int):
    """Masks of ``steps`` nested sub-boxes of a receive box, sharing its grid."""
    center, extents = np.asarray(center, float), np.asarray(extents, float)
    counts = np.broadcast_to(np.asarray(n_per_axis), (3,))
    masks = []
    for s in range(1, steps + 1):
        frac = s / steps
        half = extents * np.maximum(np.round(counts * frac), 1) / counts / 2
        inside = np.all(np.abs(ambient.points - center) <= half + 1e-9 * extents, axis=1)
        masks.append(inside & (ambient.region_labels == "V_R"))
    return masks


def spatial_analysis(k: float, box_T: dict, box_R: dict, sweep_steps: int = 4) -> dict:
    VT = make_box_volume(box_T["center"], box_T["extents"], box_T["n_per_axis"], "V_T")
    VR = make_box_volume(box_R["center"], box_R["extents"], box_R["n_per_axis"], "V_R")
    ambient = union_volume(VT, VR)
    G = helmholtz_green_op(VT, ambient, k)
    sv = singular_values(G)
    PB = range_projector(G)
    sweep = []
    for mask in nested_masks(ambient, box_R["center"], box_R["extents"], box_R["n_per_axis"], sweep_steps):
        PD = truncation_op(ambient, mask)
        sweep.append({"points": int(mask.sum()), "volume": float(ambient.weights[mask].sum()),
                      "theta0": subspace_angle(PB, PD)})
    theta_full = sweep[-1]["theta0"]
    gaps = -np.diff(sv)
    return {
        "k": k,
        "wavelength": 2 * np.pi / k,
        "vol_T": VT.measure(), "vol_R": VR.measure(),
        "singular_values": sv.tolist(),
        "strictly_decreasing": bool(np.all(gaps > 0)),
        "min_gap": float(gaps.min()) if gaps.size else 0.0,
        "rank": int(np.sum(sv > 1e-10 * sv[0])),
        "theta0": theta_full,
        "coupling_norm": operator_norm(compose(truncation_op(ambient, "V_R"), G)),
        "volume_sweep": sweep,
        "sweep_monotone": bool(all(b["theta0"] <= a["theta0"] + 1e-10 for a, b in zip(sweep, sweep[1:]))),
    }
