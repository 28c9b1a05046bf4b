"""Discretized shape space, per-instance symmetry groups, and FPS templates.

The (eps1, eps2) plane is cut into a grid of nodes treated as object
categories. Each category owns an unscaled template cloud obtained by
farthest-point-sampling a dense surface sample of the unit-scale shape.
Symmetries are derived per instance: every superquadric is even in each
coordinate, square cross-sections add a quarter turn about z, and circular
cross-sections add a continuous z axis.
"""

from dataclasses import dataclass

import numpy as np

from .core import EPS_MIN, Superquadric, farthest_point_sample, sample_surface
from .rotations import (
    quat_angle_between,
    quat_canonical,
    quat_from_axis_angle,
    quat_mul,
    quat_to_matrix,
)

_ANGLE_TOL = 1e-9
# acos amplifies 1-ulp quaternion dot noise to ~3e-8 rad; distinct group
# elements are never closer than the continuous step, so dedup can be looser.
_DEDUP_TOL = 1e-7

DEFAULT_CONTINUOUS_STEPS = 36


@dataclass(frozen=True)
class ShapeCategory:
    """One node of the shape grid."""

    id: int
    eps1: float
    eps2: float


@dataclass(frozen=True, eq=False)
class ShapeGrid:
    """Strictly ascending (eps1, eps2) node values in [0, 1].

    Category ids run row-major with eps1 as the major axis:
    id = i1 * len(eps2_values) + i2.
    """

    eps1_values: tuple
    eps2_values: tuple

    def __post_init__(self):
        for name in ("eps1_values", "eps2_values"):
            vals = tuple(float(v) for v in getattr(self, name))
            if len(vals) < 2:
                raise ValueError(f"{name} needs at least 2 values")
            if any(not 0.0 <= v <= 1.0 for v in vals):
                raise ValueError(f"{name} must lie within [0, 1]")
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise ValueError(f"{name} must be strictly ascending")
            object.__setattr__(self, name, vals)

    @property
    def n_categories(self):
        return len(self.eps1_values) * len(self.eps2_values)

    def category(self, category_id):
        n2 = len(self.eps2_values)
        if not 0 <= category_id < self.n_categories:
            raise ValueError(f"category id {category_id} out of range")
        i1, i2 = divmod(int(category_id), n2)
        return ShapeCategory(int(category_id), self.eps1_values[i1], self.eps2_values[i2])

    def categories(self):
        return [self.category(i) for i in range(self.n_categories)]


def default_grid():
    """The standard 5x5 grid over [0, 1]^2 (25 categories)."""
    vals = (0.0, 0.25, 0.5, 0.75, 1.0)
    return ShapeGrid(vals, vals)


def categorize(eps1, eps2, grid):
    """Id of the grid node nearest to (eps1, eps2); ties go to the lower id.

    eps2 must already be canonical (<= 1); raw duals are rejected.
    """
    eps1, eps2 = float(eps1), float(eps2)
    if not (0.0 <= eps1 <= 2.0 and 0.0 <= eps2 <= 2.0):
        raise ValueError("exponents must lie in [0, 2]")
    if eps2 > 1.0:
        raise ValueError("eps2 > 1 is not canonical; canonicalize before categorizing")
    e1 = np.asarray(grid.eps1_values)
    e2 = np.asarray(grid.eps2_values)
    d2 = (e1[:, None] - eps1) ** 2 + (e2[None, :] - eps2) ** 2
    return int(np.argmin(d2.ravel()))


def template_points(category, n=512, dense_n=8192, seed=0):
    """Unscaled template cloud for a category: dense sample + FPS downsample.

    Samples the unit-scale superquadric with the category's exponents (floored
    at EPS_MIN), then keeps the n farthest-point indices starting at index 0.
    Deterministic per (category, n, dense_n, seed).
    """
    n = int(n)
    dense_n = int(dense_n)
    if n < 1:
        raise ValueError("template size must be >= 1")
    if n > dense_n:
        raise ValueError(f"template size {n} exceeds dense sample size {dense_n}")
    unit = Superquadric(
        eps1=max(category.eps1, EPS_MIN),
        eps2=max(category.eps2, EPS_MIN),
        scale=np.ones(3),
    )
    dense = sample_surface(unit, dense_n, seed)
    idx = farthest_point_sample(dense, n, start=0)
    return dense[idx]


@dataclass(frozen=True, eq=False)
class SymmetryGroup:
    """Rotations mapping a shape onto itself.

    Attributes:
        discrete: (m, 4) unit quaternions, identity first, closed under
            composition.
        continuous_axes: tuple of (unit axis, discretization count) pairs for
            revolution symmetries.
    """

    discrete: np.ndarray
    continuous_axes: tuple = ()


def _close_under_composition(generators):
    elements = [quat_canonical(np.array([1.0, 0.0, 0.0, 0.0]))]
    frontier = list(elements)
    gens = [quat_canonical(g) for g in generators]
    while frontier:
        nxt = []
        for q in frontier:
            for g in gens:
                cand = quat_canonical(quat_mul(q, g))
                if all(quat_angle_between(cand, e) > _ANGLE_TOL for e in elements):
                    elements.append(cand)
                    nxt.append(cand)
        frontier = nxt
        if len(elements) > 64:
            raise RuntimeError("symmetry closure did not stabilize")
    return np.array(elements)


def symmetry_group(sq, rel_tol=1e-3, continuous_steps=DEFAULT_CONTINUOUS_STEPS):
    """Derive the symmetry group of a canonical superquadric instance.

    Every superquadric is symmetric under 180-degree flips about each local
    axis. Equal radial scales add a quarter turn about z (order-8 group), and
    a circular cross-section (eps2 near 1) upgrades z to a continuous axis
    discretized at `continuous_steps` for metric evaluation.
    """
    if sq.eps2 > 1.0:
        raise ValueError("symmetry requires a canonical shape (eps2 <= 1)")
    ax, ay, _ = sq.scale
    round_xy = abs(ax - ay) / max(ax, ay) <= rel_tol
    generators = [
        quat_from_axis_angle((1.0, 0.0, 0.0), np.pi),
        quat_from_axis_angle((0.0, 1.0, 0.0), np.pi),
        quat_from_axis_angle((0.0, 0.0, 1.0), np.pi),
    ]
    axes = ()
    if round_xy:
        generators.append(quat_from_axis_angle((0.0, 0.0, 1.0), np.pi / 2.0))
        if abs(sq.eps2 - 1.0) <= rel_tol:
            axes = ((np.array([0.0, 0.0, 1.0]), int(continuous_steps)),)
    return SymmetryGroup(discrete=_close_under_composition(generators), continuous_axes=axes)


def identity_group():
    """Group containing only the identity rotation."""
    return SymmetryGroup(discrete=np.array([[1.0, 0.0, 0.0, 0.0]]))


def expand_symmetries(group):
    """Finite list of 3x3 rotation matrices covering the group.

    Continuous axes are expanded to their discretization count and composed
    with every discrete element; duplicates are removed.
    """
    quats = [np.asarray(q, dtype=float) for q in group.discrete]
    expanded = list(quats)
    for axis, steps in group.continuous_axes:
        if steps < 1:
            raise ValueError("continuous discretization count must be >= 1")
        for k in range(1, int(steps)):
            spin = quat_from_axis_angle(axis, 2.0 * np.pi * k / int(steps))
            for q in quats:
                expanded.append(quat_mul(spin, q))
    unique = []
    for q in expanded:
        qc = quat_canonical(q)
        if all(quat_angle_between(qc, u) > _DEDUP_TOL for u in unique):
            unique.append(qc)
    return [quat_to_matrix(q) for q in unique]
