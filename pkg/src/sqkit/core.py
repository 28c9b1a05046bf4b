"""Superquadric representation and core point-cloud geometry.

A superquadric is the implicit surface

    F(x, y, z) = ((|x|/ax)^(2/e2) + (|y|/ay)^(2/e2))^(e2/e1) + (|z|/az)^(2/e1) = 1

in its local frame, posed in the world by a rotation and a translation.
Point clouds are plain (n, 3) float arrays in meters.
"""

from dataclasses import dataclass, field

import numpy as np

from .rotations import quat_to_matrix

# Numerical floor for the shape exponents; F is undefined at 0, so box-like
# shapes are evaluated at 0.01.
EPS_MIN = 0.01
EPS_MAX = 2.0

_QUAT_NORM_TOL = 1e-9


def as_points(points, allow_empty=False):
    """Validate and return a point cloud as an (n, 3) float array.

    Accepts any array-like of 3-vectors. Rejects non-finite coordinates and,
    unless `allow_empty`, empty clouds.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1 and pts.size == 3:
        pts = pts.reshape(1, 3)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError(f"expected an (n, 3) point array, got shape {pts.shape}")
    if pts.shape[0] == 0 and not allow_empty:
        raise ValueError("point cloud is empty")
    if not np.all(np.isfinite(pts)):
        raise ValueError("point cloud contains non-finite coordinates")
    return pts


@dataclass(frozen=True, eq=False)
class Superquadric:
    """Superquadric parameters: shape exponents, axis scales, and pose.

    Attributes:
        eps1: shape exponent along the z axis, in [EPS_MIN, 2].
        eps2: cross-section shape exponent, in [EPS_MIN, 2]. Values in (1, 2]
            are legal raw fits; canonicalization folds them back into [EPS_MIN, 1].
        scale: (ax, ay, az) semi-axis lengths in meters, all > 0.
        rotation: unit quaternion (w, x, y, z) mapping local to world frame.
        translation: world-frame center in meters.
    """

    eps1: float
    eps2: float
    scale: np.ndarray
    rotation: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0, 0.0]))
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "eps1", float(self.eps1))
        object.__setattr__(self, "eps2", float(self.eps2))
        scale = np.array(self.scale, dtype=float)
        rot = np.array(self.rotation, dtype=float)
        trans = np.array(self.translation, dtype=float)
        if scale.shape != (3,) or not np.all(np.isfinite(scale)) or np.any(scale <= 0):
            raise ValueError("scale must be three finite positive lengths")
        if rot.shape != (4,) or not np.all(np.isfinite(rot)):
            raise ValueError("rotation must be a finite quaternion (w, x, y, z)")
        if abs(np.linalg.norm(rot) - 1.0) > _QUAT_NORM_TOL:
            raise ValueError("rotation quaternion must have unit norm")
        if trans.shape != (3,) or not np.all(np.isfinite(trans)):
            raise ValueError("translation must be a finite 3-vector")
        for name, e in (("eps1", self.eps1), ("eps2", self.eps2)):
            if not np.isfinite(e) or not (EPS_MIN <= e <= EPS_MAX):
                raise ValueError(f"{name} must lie in [{EPS_MIN}, {EPS_MAX}], got {e}")
        for arr in (scale, rot, trans):
            arr.setflags(write=False)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "translation", trans)

    @property
    def rotation_matrix(self):
        return quat_to_matrix(self.rotation)

    def world_to_local(self, points):
        """Map world points into the superquadric's local frame."""
        pts = as_points(points)
        return _apply_linear(self.rotation_matrix.T, pts - self.translation)

    def local_to_world(self, points):
        """Map local-frame points into the world frame."""
        pts = as_points(points)
        return _apply_linear(self.rotation_matrix, pts) + self.translation


def _apply_linear(M, pts):
    # Explicit ufunc formulation (not matmul) keeps the arithmetic order
    # identical to a scalar reference implementation.
    return (pts[:, 0:1] * M[:, 0] + pts[:, 1:2] * M[:, 1] + pts[:, 2:3] * M[:, 2])


def _signed_pow(base, exponent):
    return np.sign(base) * np.abs(base) ** exponent


def inside_outside(sq, points):
    """Evaluate the implicit function F at local-frame points.

    F is 1 on the surface, < 1 inside, > 1 outside, and is even in each
    coordinate. Accepts a single 3-vector or an (n, 3) array; returns a float
    or an (n,) array to match.
    """
    single = np.asarray(points).ndim == 1
    pts = as_points(points)
    if not (np.isfinite(sq.eps1) and np.isfinite(sq.eps2)):
        raise ValueError("exponents must be finite")
    ax, ay, az = sq.scale
    with np.errstate(over="ignore"):
        fx = (np.abs(pts[:, 0]) / ax) ** (2.0 / sq.eps2)
        fy = (np.abs(pts[:, 1]) / ay) ** (2.0 / sq.eps2)
        fz = (np.abs(pts[:, 2]) / az) ** (2.0 / sq.eps1)
        f = (fx + fy) ** (sq.eps2 / sq.eps1) + fz
    return float(f[0]) if single else f


def _log_inside_outside(eps1, eps2, scale, pts):
    """log F, evaluated stably for points far from the surface.

    Returns -inf only at the exact origin.
    """
    ax, ay, az = scale
    with np.errstate(divide="ignore"):
        lx = (2.0 / eps2) * np.log(np.abs(pts[:, 0]) / ax)
        ly = (2.0 / eps2) * np.log(np.abs(pts[:, 1]) / ay)
        lz = (2.0 / eps1) * np.log(np.abs(pts[:, 2]) / az)
    lplane = (eps2 / eps1) * np.logaddexp(lx, ly)
    return np.logaddexp(lplane, lz)


def radial_distance(sq, points):
    """Radial Euclidean distance from world points to the surface, in meters.

    Scales each point onto the surface along the ray from the center and
    returns |p| * |1 - F(p)^(-eps1/2)|. Exact for spheres; an upper bound on
    the true Euclidean distance in general. A point exactly at the center is
    reported at min(scale).
    """
    pts = sq.world_to_local(as_points(points))
    r = np.linalg.norm(pts, axis=1)
    logf = _log_inside_outside(sq.eps1, sq.eps2, sq.scale, pts)
    with np.errstate(invalid="ignore", over="ignore"):
        dist = r * np.abs(1.0 - np.exp(-0.5 * sq.eps1 * logf))
    dist = np.where(r == 0.0, float(np.min(sq.scale)), dist)
    return dist


def sample_surface(sq, n, seed=0):
    """Sample n world-frame surface points, deterministic per (sq, n, seed).

    Uses a stratified grid over the two surface angles with per-cell jitter
    drawn from `seed`; jitter stays strictly inside each cell so the poles
    are never hit exactly and no duplicate points arise.
    """
    n = int(n)
    if n < 1:
        raise ValueError("sample count must be >= 1")
    rng = np.random.default_rng(seed)
    n_om = int(np.ceil(np.sqrt(2.0 * n)))
    n_eta = int(np.ceil(n / n_om))
    total = n_eta * n_om

    jitter = rng.uniform(0.05, 0.95, size=(2, n_eta, n_om))
    i = np.arange(n_eta)[:, None]
    j = np.arange(n_om)[None, :]
    eta = -0.5 * np.pi + (i + jitter[0]) * (np.pi / n_eta)
    omega = -np.pi + (j + jitter[1]) * (2.0 * np.pi / n_om)

    ce = _signed_pow(np.cos(eta), sq.eps1)
    se = _signed_pow(np.sin(eta), sq.eps1)
    co = _signed_pow(np.cos(omega), sq.eps2)
    so = _signed_pow(np.sin(omega), sq.eps2)
    ax, ay, az = sq.scale
    local = np.stack([
        (ax * ce * co).ravel(),
        (ay * ce * so).ravel(),
        (az * se * np.ones_like(omega)).ravel(),
    ], axis=1)

    if total > n:
        keep = (np.arange(n) * total) // n
        local = local[keep]
    return sq.local_to_world(local)


def farthest_point_sample(points, k, start=0):
    """Greedy farthest point sampling; returns k distinct indices.

    The first index is `start`; each subsequent index maximizes the minimum
    squared distance to the already-selected set, ties broken by lowest index.
    """
    pts = as_points(points)
    n = pts.shape[0]
    k = int(k)
    start = int(start)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if not 0 <= start < n:
        raise ValueError(f"start index {start} out of range for {n} points")
    chosen = np.empty(k, dtype=np.intp)
    chosen[0] = start
    diff = pts - pts[start]
    d2 = (diff[:, 0] * diff[:, 0] + diff[:, 1] * diff[:, 1]) + diff[:, 2] * diff[:, 2]
    for m in range(1, k):
        nxt = int(np.argmax(d2))
        chosen[m] = nxt
        diff = pts - pts[nxt]
        cand = (diff[:, 0] * diff[:, 0] + diff[:, 1] * diff[:, 1]) + diff[:, 2] * diff[:, 2]
        d2 = np.minimum(d2, cand)
    return chosen


def transform_points(M, t, points):
    """Apply p -> M p + t to every point, preserving order."""
    M = np.asarray(M, dtype=float)
    t = np.asarray(t, dtype=float)
    if M.shape != (3, 3) or not np.all(np.isfinite(M)):
        raise ValueError("M must be a finite 3x3 matrix")
    if t.shape != (3,) or not np.all(np.isfinite(t)):
        raise ValueError("t must be a finite 3-vector")
    if np.linalg.det(M) == 0.0:
        raise ValueError("transform matrix is singular")
    pts = as_points(points, allow_empty=True)
    return _apply_linear(M, pts) + t


def surface_hausdorff(sq_a, sq_b, n=2048, seed=0):
    """Symmetric surface deviation between two superquadrics, in meters.

    Samples n points on each surface and takes the largest radial distance
    from either sample to the other surface. Zero (to float precision) iff
    the two parameter sets describe the same world-frame surface.
    """
    pa = sample_surface(sq_a, n, seed)
    pb = sample_surface(sq_b, n, seed)
    return max(float(np.max(radial_distance(sq_b, pa))),
               float(np.max(radial_distance(sq_a, pb))))
