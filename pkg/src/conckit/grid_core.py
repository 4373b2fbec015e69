"""Quadrature grids, the weighted inner product, norms and angles.

Every discrete function lives on a grid whose weights turn sums into
integrals, so ``inner_product`` approximates the L2 inner product
``<f, g> = int f conj(g)``.  All downstream adjoints, norms and projectors
are defined against these weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

AXIS_KINDS = ("time", "frequency", "index")


class GridError(ValueError):
    """Raised for malformed grids or functions living on mismatched grids."""


@dataclass(frozen=True, eq=False)
class Grid1D:
    """Nodes and quadrature weights on an interval of the real line."""

    nodes: np.ndarray
    weights: np.ndarray
    axis_kind: str = "time"

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise GridError("nodes and weights must be 1-D arrays of equal length")
        if nodes.size < 1:
            raise GridError("grid needs at least one node")
        if nodes.size > 1 and np.any(np.diff(nodes) <= 0):
            raise GridError("nodes must be strictly increasing")
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise GridError("weights must be strictly positive and finite")
        if self.axis_kind not in AXIS_KINDS:
            raise GridError(f"unknown axis kind {self.axis_kind!r}")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def is_uniform(self) -> bool:
        if self.size < 2:
            return False
        steps = np.diff(self.nodes)
        return bool(np.allclose(steps, steps[0], rtol=1e-10, atol=0.0))

    @property
    def spacing(self) -> float:
        if not self.is_uniform:
            raise GridError("grid is not uniform")
        return float(self.nodes[1] - self.nodes[0])

    def mask(self, region) -> np.ndarray:
        """Boolean mask of nodes inside a closed interval ``(lo, hi)``."""
        lo, hi = region
        return (self.nodes >= lo) & (self.nodes <= hi)

    def measure(self, region=None) -> float:
        if region is None:
            return float(self.weights.sum())
        return float(self.weights[self.mask(region)].sum())


@dataclass(frozen=True, eq=False)
class VolumeGrid:
    """Quadrature points in R^3 tagged with the region each belongs to."""

    points: np.ndarray
    weights: np.ndarray
    region_labels: np.ndarray = field(default=None)

    def __post_init__(self):
        points = np.array(self.points, dtype=float).reshape(-1, 3)
        weights = np.array(self.weights, dtype=float).ravel()
        if points.shape[0] != weights.size:
            raise GridError("one weight per point required")
        if weights.size < 1:
            raise GridError("volume grid needs at least one point")
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise GridError("weights must be strictly positive and finite")
        labels = self.region_labels
        if labels is None:
            labels = np.full(weights.size, "V", dtype=object)
        labels = np.array(labels, dtype=object).ravel()
        if labels.size != weights.size:
            raise GridError("one region label per point required")
        for arr in (points, weights, labels):
            arr.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "region_labels", labels)

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def labels(self) -> list[str]:
        return list(dict.fromkeys(self.region_labels.tolist()))

    def mask(self, region) -> np.ndarray:
        """Boolean mask for a label, or for any of several labels."""
        if isinstance(region, str):
            region = (region,)
        return np.isin(self.region_labels, list(region))

    def measure(self, region=None) -> float:
        if region is None:
            return float(self.weights.sum())
        return float(self.weights[self.mask(region)].sum())

    def subgrid(self, region) -> "VolumeGrid":
        m = self.mask(region)
        return VolumeGrid(self.points[m], self.weights[m], self.region_labels[m])


Grid = Union[Grid1D, VolumeGrid]


def same_grid(a: Grid, b: Grid) -> bool:
    """True when two grids carry identical nodes and weights."""
    if a is b:
        return True
    if type(a) is not type(b) or a.size != b.size:
        return False
    if not np.array_equal(a.weights, b.weights):
        return False
    if isinstance(a, Grid1D):
        return np.array_equal(a.nodes, b.nodes)
    return np.array_equal(a.points, b.points) and np.array_equal(
        a.region_labels, b.region_labels
    )


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples of a function on a grid."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        values = np.array(self.values, dtype=complex).ravel()
        if values.size != self.grid.size:
            raise GridError(
                f"{values.size} values given for a grid of {self.grid.size} points"
            )
        if not np.all(np.isfinite(values)):
            raise GridError("function values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        _require_same(self, other)
        return GridFunction(self.values + other.values, self.grid)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        _require_same(self, other)
        return GridFunction(self.values - other.values, self.grid)

    def __mul__(self, c) -> "GridFunction":
        return GridFunction(c * self.values, self.grid)

    __rmul__ = __mul__

    def __neg__(self) -> "GridFunction":
        return GridFunction(-self.values, self.grid)


def sample(func, grid: Grid) -> GridFunction:
    """Evaluate a callable at the grid nodes (or points)."""
    x = grid.nodes if isinstance(grid, Grid1D) else grid.points
    return GridFunction(func(x), grid)


def _require_same(f: GridFunction, g: GridFunction) -> None:
    if not same_grid(f.grid, g.grid):
        raise GridError("functions live on different grids")


def make_uniform_grid(a: float, b: float, n: int, axis_kind: str = "time") -> Grid1D:
    """Equispaced nodes on [a, b] with composite trapezoid weights."""
    if n < 2:
        raise GridError("uniform grid needs n >= 2")
    if not a < b:
        raise GridError("need a < b")
    nodes = np.linspace(a, b, n)
    h = (b - a) / (n - 1)
    weights = np.full(n, h)
    weights[[0, -1]] = h / 2
    return Grid1D(nodes, weights, axis_kind)


def make_gauss_grid(a: float, b: float, n: int, axis_kind: str = "time") -> Grid1D:
    """Gauss-Legendre nodes and weights mapped to [a, b]."""
    if n < 1:
        raise GridError("Gauss grid needs n >= 1")
    if not a < b:
        raise GridError("need a < b")
    x, w = np.polynomial.legendre.leggauss(n)
    half = (b - a) / 2
    return Grid1D(half * x + (a + b) / 2, half * w, axis_kind)


def make_composite_gauss_grid(breakpoints, n_per_panel: int, axis_kind: str = "time") -> Grid1D:
    """Gauss-Legendre panels between consecutive breakpoints.

    Useful when an integrand has kinks at known points (e.g. the edges of a
    truncation window), so each smooth piece gets its own panel.
    """
    breakpoints = np.asarray(breakpoints, dtype=float)
    if breakpoints.size < 2 or np.any(np.diff(breakpoints) <= 0):
        raise GridError("breakpoints must be strictly increasing, at least two")
    panels = [make_gauss_grid(lo, hi, n_per_panel) for lo, hi in zip(breakpoints[:-1], breakpoints[1:])]
    return Grid1D(
        np.concatenate([p.nodes for p in panels]),
        np.concatenate([p.weights for p in panels]),
        axis_kind,
    )


def make_counting_grid(n: int) -> Grid1D:
    """n points with unit weights: plain C^n with the Euclidean inner product."""
    if n < 1:
        raise GridError("counting grid needs n >= 1")
    return Grid1D(np.arange(n, dtype=float), np.ones(n), "index")


def make_box_volume(center, extents, n_per_axis, label: str = "V") -> VolumeGrid:
    """Tensor-product midpoint grid on an axis-aligned box."""
    center = np.asarray(center, dtype=float).reshape(3)
    extents = np.broadcast_to(np.asarray(extents, dtype=float), (3,))
    counts = np.broadcast_to(np.asarray(n_per_axis, dtype=int), (3,))
    if np.any(extents <= 0):
        raise GridError("box extents must be positive")
    if np.any(counts < 1):
        raise GridError("need at least one cell per axis")
    axes = []
    for c, e, m in zip(center, extents, counts):
        h = e / m
        axes.append(c - e / 2 + h * (np.arange(m) + 0.5))
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([g.ravel() for g in mesh], axis=1)
    cell = float(np.prod(extents / counts))
    return VolumeGrid(points, np.full(points.shape[0], cell), np.full(points.shape[0], label, dtype=object))


def union_volume(*grids: VolumeGrid) -> VolumeGrid:
    """Concatenate labelled volume grids into one ambient grid."""
    points = np.concatenate([g.points for g in grids])
    if len(np.unique(np.round(points, 12), axis=0)) != points.shape[0]:
        raise GridError("regions share grid points")
    return VolumeGrid(
        points,
        np.concatenate([g.weights for g in grids]),
        np.concatenate([g.region_labels for g in grids]),
    )


def inner_product(f: GridFunction, g: GridFunction) -> complex:
    """Weighted sum ``sum_i w_i f_i conj(g_i)``."""
    _require_same(f, g)
    return complex(np.sum(f.grid.weights * f.values * np.conj(g.values)))


def norm(f: GridFunction, kind: str = "L2") -> float:
    mag = np.abs(f.values)
    if kind == "L1":
        return float(np.sum(f.grid.weights * mag))
    if kind == "L2":
        return float(np.sqrt(np.sum(f.grid.weights * mag**2)))
    if kind == "Linf":
        return float(mag.max())
    raise ValueError(f"unknown norm kind {kind!r}")


def angle_between(f: GridFunction, g: GridFunction) -> float:
    """Angle from the real part of the inner product, in [0, pi]."""
    nf, ng = norm(f), norm(g)
    if nf == 0 or ng == 0:
        raise GridError("angle undefined for a zero function")
    cos = inner_product(f, g).real / (nf * ng)
    return float(np.arccos(np.clip(cos, -1.0, 1.0)))
