"""Shared test utilities: independent brute-force oracles and samplers."""

import numpy as np

from ccrm.sets import (
    AffineSubspace,
    Ball,
    BallInAffine,
    DykstraIntersection,
    Ellipsoid,
    Halfspace,
    Hyperplane,
    PowerEpigraph,
    PsdCone,
    SecondOrderCone,
    SpectralBoxTrace,
)
from ccrm.linalg import sym_to_vec


def random_orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.normal(size=(n, n)))
    return Q * np.sign(np.diag(R))


def oracle_zoo(rng):
    """A representative oracle of every kind, with a sampler for query points."""
    plane = AffineSubspace([[0.0, 0.0, 1.0]], [0.25])
    zoo = [
        (Halfspace(rng.normal(size=3), 0.4), 3),
        (Hyperplane([1.0, -2.0, 0.5], 1.0), 3),
        (AffineSubspace([[1.0, 1.0, 0.0, 0.0], [0.0, 1.0, -1.0, 2.0]], [1.0, 0.5]), 4),
        (Ball([0.5, -0.5, 1.0], 1.5), 3),
        (Ellipsoid([[1.0, 0.2], [0.2, 0.5]], center=[0.3, -0.2]), 2),
        (SecondOrderCone(4), 4),
        (PowerEpigraph(2.0, 0.5), 2),
        (PowerEpigraph(1.5, 0.0), 2),
        (PsdCone(3), 6),
        (SpectralBoxTrace(3, 0.6), 6),
        (BallInAffine([0.1, 0.2, 0.7], 1.0, plane), 3),
        (
            DykstraIntersection(
                [Ball([0.0, 0.0], 1.0), Halfspace([1.0, 0.0], -0.2)], tol=1e-13
            ),
            2,
        ),
    ]
    return zoo


def sample_lens_point(rng, centers, radius):
    """Rejection-sample a point in the intersection of two discs (in-plane)."""
    c1, c2 = centers
    lo = np.array([c2[0] - radius, -radius])
    hi = np.array([c1[0] + radius, radius])
    for _ in range(10000):
        p = lo + (hi - lo) * rng.random(2)
        if np.linalg.norm(p - c1[:2]) <= radius and np.linalg.norm(p - c2[:2]) <= radius:
            return np.array([p[0], p[1], 0.0])
    raise RuntimeError("lens sampling failed")


def sample_epigraph_lens(rng, alpha, beta):
    """A point of {y >= |x|^alpha - beta} intersected with {y <= 0}, beta > 0."""
    for _ in range(10000):
        x = (2.0 * rng.random() - 1.0) * beta ** (1.0 / alpha)
        lo = abs(x) ** alpha - beta
        y = lo + (0.0 - lo) * rng.random()
        if lo <= y <= 0.0:
            return np.array([x, y])
    raise RuntimeError("epigraph lens sampling failed")


def projection_by_scan(points, z):
    """Nearest point of a sampled boundary/set cloud; independent oracle."""
    i = np.argmin(np.linalg.norm(points - z, axis=1))
    return points[i]


def spectral_box_enumeration(v, a):
    """Projection of v onto {w <= a, sum w = 1} by active-set enumeration."""
    n = v.shape[0]
    best = None
    for mask in range(2**n):
        clipped = [i for i in range(n) if mask >> i & 1]
        free = [i for i in range(n) if not (mask >> i & 1)]
        cand = np.empty(n)
        for i in clipped:
            cand[i] = a
        if free:
            shift = (1.0 - a * len(clipped) - v[free].sum()) / len(free)
            for i in free:
                cand[i] = v[i] + shift
        elif abs(a * n - 1.0) > 1e-12:
            continue
        if cand.max() > a + 1e-12:
            continue
        d = np.linalg.norm(cand - v)
        if best is None or d < best[0]:
            best = (d, cand)
    return best[1]


def cap_projection_kkt(center, radius, cut, offset, z):
    """Projection onto ball(center, radius) cap {x_0 <= offset}, by case analysis."""
    z = np.asarray(z, dtype=float)
    p_ball = Ball(center, radius).project(z)
    if p_ball[0] <= offset + 1e-14:
        return p_ball
    p_half = z.copy()
    p_half[0] = min(p_half[0], offset)
    if np.linalg.norm(p_half - center) <= radius + 1e-14:
        return p_half
    # corner: fix the first coordinate, renormalize the rest onto the rim
    p = z.copy()
    p[0] = offset
    rest = p[1:] - center[1:]
    rim = np.sqrt(radius**2 - (offset - center[0]) ** 2)
    p[1:] = center[1:] + rest * (rim / np.linalg.norm(rest))
    return p


def random_symmetric(rng, n, scale=1.0):
    W = rng.normal(size=(n, n)) * scale
    return 0.5 * (W + W.T)


def random_psd_vec(rng, n):
    W = rng.normal(size=(n, n))
    return sym_to_vec(W @ W.T / n)
