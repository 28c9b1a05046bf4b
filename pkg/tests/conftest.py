"""Shared helpers: random shape factories and independent oracles.

The oracles here are deliberately written as plain loops so the library's
vectorized implementations are checked against structurally different code.
"""

import math

import numpy as np

from sqkit import Superquadric
from sqkit.rotations import quat_from_axis_angle, quat_mul, random_quaternion

QUARTER_TURN_Z = quat_from_axis_angle((0.0, 0.0, 1.0), np.pi / 2.0)


def random_superquadric(rng, eps1=(0.1, 1.0), eps2=(0.1, 1.0), scale=(0.02, 0.2),
                        posed=True):
    """Seeded random shape; pose defaults to a random rotation/translation."""
    e1 = rng.uniform(*eps1)
    e2 = rng.uniform(*eps2)
    s = rng.uniform(*scale, size=3)
    if posed:
        q = random_quaternion(rng)
        t = rng.uniform(-0.3, 0.3, size=3)
    else:
        q = np.array([1.0, 0.0, 0.0, 0.0])
        t = np.zeros(3)
    return Superquadric(eps1=e1, eps2=e2, scale=s, rotation=q, translation=t)


def relabel_candidates(sq):
    """Equivalent records under the x/y relabel gauge.

    (eps, (ax, ay, az), R) and (eps, (ay, ax, az), R * Rz(90deg)) describe the
    same surface exactly, so recovered parameters are compared modulo both.
    """
    swapped = Superquadric(
        eps1=sq.eps1, eps2=sq.eps2,
        scale=np.array([sq.scale[1], sq.scale[0], sq.scale[2]]),
        rotation=quat_mul(sq.rotation, QUARTER_TURN_Z),
        translation=sq.translation,
    )
    return [sq, swapped]


def fps_oracle(points, k, start):
    """Greedy farthest point sampling as plain Python loops."""
    pts = [tuple(p) for p in np.asarray(points, dtype=float)]
    n = len(pts)
    chosen = [start]
    mindist = [0.0] * n
    for i in range(n):
        dx = pts[i][0] - pts[start][0]
        dy = pts[i][1] - pts[start][1]
        dz = pts[i][2] - pts[start][2]
        mindist[i] = (dx * dx + dy * dy) + dz * dz
    for _ in range(1, k):
        best_i = 0
        best_d = mindist[0]
        for i in range(1, n):
            if mindist[i] > best_d:
                best_d = mindist[i]
                best_i = i
        chosen.append(best_i)
        for i in range(n):
            dx = pts[i][0] - pts[best_i][0]
            dy = pts[i][1] - pts[best_i][1]
            dz = pts[i][2] - pts[best_i][2]
            d = (dx * dx + dy * dy) + dz * dz
            if d < mindist[i]:
                mindist[i] = d
    return chosen


def polar_oracle(M):
    """Polar factors via eigendecomposition of M^T M."""
    M = np.asarray(M, dtype=float)
    w, V = np.linalg.eigh(M.T @ M)
    P = V @ np.diag(np.sqrt(w)) @ V.T
    R = M @ np.linalg.inv(P)
    return R, P


def mssd_oracle(est, gt, template, rotations):
    """Exhaustive double-loop MSSD over explicit symmetry rotations."""
    template = np.asarray(template, dtype=float)
    best = math.inf
    for S in rotations:
        worst = -math.inf
        for p in template:
            x, y, z = p
            sx = (x * S[0][0] + y * S[0][1]) + z * S[0][2]
            sy = (x * S[1][0] + y * S[1][1]) + z * S[1][2]
            sz = (x * S[2][0] + y * S[2][1]) + z * S[2][2]
            ex = _affine_coord(est, x, y, z)
            gx = _affine_coord(gt, sx, sy, sz)
            dx = ex[0] - gx[0]
            dy = ex[1] - gx[1]
            dz = ex[2] - gx[2]
            d = math.sqrt((dx * dx + dy * dy) + dz * dz)
            if d > worst:
                worst = d
        if worst < best:
            best = worst
    return best


def _affine_coord(pose, x, y, z):
    M = pose.matrix
    t = pose.translation
    return tuple((x * M[j][0] + y * M[j][1]) + z * M[j][2] + t[j] for j in range(3))
