"""Brute-force reference computations used to cross-check closed forms."""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize


def _cosines(X, Y, A, B, w):
    """cos theta(X a, Y b) for batches of coefficient rows ``A`` and ``B``."""
    F = A @ X.T
    G = B @ Y.T
    ip = np.sum(w * F * G.conj(), axis=1).real
    nf = np.sqrt(np.sum(w * np.abs(F) ** 2, axis=1))
    ng = np.sqrt(np.sum(w * np.abs(G) ** 2, axis=1))
    return ip / (nf * ng)


def min_angle_brute_force(X: np.ndarray, Y: np.ndarray, weights=None, restarts: int = 5000,
                          refine: int = 8, seed: int = 0) -> float:
    """Infimum of the angle between members of span(X) and span(Y).

    Samples ``restarts`` random coefficient pairs, then polishes the best
    ``refine`` of them with BFGS on the angle cosine itself.  Nothing here
    uses projectors or singular values.
    """
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    n, p = X.shape
    q = Y.shape[1]
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    rng = np.random.default_rng(seed)

    def cplx(k, size):
        return rng.standard_normal((size, k)) + 1j * rng.standard_normal((size, k))

    A, B = cplx(p, restarts), cplx(q, restarts)
    c = _cosines(X, Y, A, B, w)
    best = np.argsort(c)[::-1][:refine]

    def objective(z):
        a = z[:p] + 1j * z[p:2 * p]
        b = z[2 * p:2 * p + q] + 1j * z[2 * p + q:]
        f, g = X @ a, Y @ b
        ip = np.sum(w * f * g.conj()).real
        nf2, ng2 = np.sum(w * np.abs(f) ** 2), np.sum(w * np.abs(g) ** 2)
        nf, ng = np.sqrt(nf2), np.sqrt(ng2)
        cos = ip / (nf * ng)
        # real gradients with respect to (Re f, Im f) packed as complex vectors
        hf = w * (g / (nf * ng) - cos * f / nf2)
        hg = w * (f / (nf * ng) - cos * g / ng2)
        ga, gb = X.conj().T @ hf, Y.conj().T @ hg
        grad = np.concatenate([ga.real, ga.imag, gb.real, gb.imag])
        return -cos, -grad

    top = -1.0
    for i in best:
        z0 = np.concatenate([A[i].real, A[i].imag, B[i].real, B[i].imag])
        res = minimize(objective, z0, jac=True, method="BFGS", options={"gtol": 1e-13, "maxiter": 2000})
        top = max(top, -res.fun)
    return float(np.arccos(np.clip(top, -1.0, 1.0)))
