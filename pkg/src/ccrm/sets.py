"""Closed convex sets with exact projections and optional boundary calculus.

Every oracle exposes ``project`` (exact, or within a stated tolerance for
the iterative kinds), ``reflect``, membership helpers, and optionally a
smooth boundary descriptor (g, grad g, Hess g) restricted to the set's
affine hull. The descriptor feeds the curvature and tangent-bound
diagnostics; oracles without one simply refuse those operations.

All oracles are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, RegularityError, UnsupportedOperation
from .linalg import (
    RANK_RTOL,
    least_squares_min_norm,
    orthonormal_nullspace,
    sym_dim,
    sym_to_vec,
    symmetric_eigh,
    vec_to_sym,
)

MEMBERSHIP_TOL = 1e-10

# Dykstra defaults; the inner tolerance is kept two orders tighter than
# any outer solver tolerance that consumes these projections.
DYKSTRA_TOL = 1e-12
DYKSTRA_MAX_ITER = 100_000


def _as_point(z, dim=None):
    z = np.asarray(z, dtype=float)
    if z.ndim != 1:
        raise ValueError(f"expected a 1-d point, got shape {z.shape}")
    if dim is not None and z.shape[0] != dim:
        raise ValueError(f"dimension mismatch: point has {z.shape[0]}, set has {dim}")
    if not np.all(np.isfinite(z)):
        raise ValueError("point has non-finite entries")
    return z


class SetOracle:
    """Base class: a closed convex set with an exact projection."""

    smooth = False

    def __init__(self, dim):
        self.dim = int(dim)

    def project(self, z) -> np.ndarray:
        raise NotImplementedError

    def reflect(self, z) -> np.ndarray:
        z = _as_point(z, self.dim)
        return 2.0 * self.project(z) - z

    def distance(self, z) -> float:
        z = _as_point(z, self.dim)
        return float(np.linalg.norm(z - self.project(z)))

    def contains(self, z, tol=MEMBERSHIP_TOL) -> bool:
        return self.distance(z) <= tol

    @property
    def affine_hull(self):
        return None

    # Smooth-boundary descriptor, in ambient coordinates. Subclasses with
    # smooth relative boundaries implement _g/_grad/_hess and set smooth=True.
    def _g(self, z) -> float:
        raise UnsupportedOperation(f"{type(self).__name__} has no smooth boundary descriptor")

    def _grad(self, z) -> np.ndarray:
        raise UnsupportedOperation(f"{type(self).__name__} has no smooth boundary descriptor")

    def _hess(self, z) -> np.ndarray:
        raise UnsupportedOperation(f"{type(self).__name__} has no smooth boundary descriptor")


class AffineSubspace(SetOracle):
    """Affine subspace {z : A z = b} with an orthonormal direction basis.

    ``basis`` spans null(A); ``anchor`` is the minimal-norm solution of
    A z = b. A zero-row A describes the whole space.
    """

    def __init__(self, A, b, rtol=RANK_RTOL, basis=None):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        if A.shape[0] != b.shape[0]:
            raise ValueError(f"A has {A.shape[0]} rows but b has {b.shape[0]} entries")
        super().__init__(A.shape[1])
        self.A = A
        self.b = b
        if A.shape[0] == 0:
            self.anchor = np.zeros(self.dim)
        else:
            self.anchor = least_squares_min_norm(A, b, rtol=rtol)
            residual = np.linalg.norm(A @ self.anchor - b)
            if residual > 1e-9 * (1.0 + np.linalg.norm(b)):
                raise ValueError(f"system A z = b is inconsistent (residual {residual:.3e})")
        if basis is None:
            basis = orthonormal_nullspace(A, rtol=rtol)
        else:
            # A caller-chosen frame pins local coordinates (the SVD basis is
            # deterministic but not canonical); it must still span null(A).
            basis = np.atleast_2d(np.asarray(basis, dtype=float))
            expected = orthonormal_nullspace(A, rtol=rtol).shape[1]
            if basis.shape != (self.dim, expected):
                raise ValueError(f"basis must be {self.dim} x {expected}, got {basis.shape}")
            if np.linalg.norm(basis.T @ basis - np.eye(expected)) > 1e-10:
                raise ValueError("basis columns are not orthonormal")
            if A.shape[0] and np.linalg.norm(A @ basis) > 1e-10 * (1.0 + np.linalg.norm(A)):
                raise ValueError("basis columns do not span null(A)")
        self.basis = basis

    @property
    def subspace_dim(self) -> int:
        return self.basis.shape[1]

    @property
    def affine_hull(self):
        return self

    def project(self, z) -> np.ndarray:
        z = _as_point(z, self.dim)
        return self.anchor + self.basis @ (self.basis.T @ (z - self.anchor))

    def to_local(self, z) -> np.ndarray:
        """Isometric coordinates of a hull point: B^T (z - anchor)."""
        z = _as_point(z, self.dim)
        return self.basis.T @ (z - self.anchor)

    def from_local(self, v) -> np.ndarray:
        v = _as_point(v, self.subspace_dim)
        return self.anchor + self.basis @ v


class Hyperplane(AffineSubspace):
    """{z : <normal, z> = offset}."""

    def __init__(self, normal, offset):
        normal = _as_point(normal)
        if np.linalg.norm(normal) == 0.0:
            raise ValueError("hyperplane normal must be nonzero")
        super().__init__(normal[None, :], [float(offset)])
        self.normal = normal
        self.offset = float(offset)


class Halfspace(SetOracle):
    """{z : <normal, z> <= offset}."""

    smooth = True

    def __init__(self, normal, offset):
        normal = _as_point(normal)
        nn = np.linalg.norm(normal)
        if nn == 0.0:
            raise ValueError("halfspace normal must be nonzero")
        super().__init__(normal.shape[0])
        self.normal = normal
        self.offset = float(offset)
        self._nn2 = float(nn * nn)

    def project(self, z) -> np.ndarray:
        z = _as_point(z, self.dim)
        excess = float(self.normal @ z) - self.offset
        if excess <= 0.0:
            return z.copy()
        return z - (excess / self._nn2) * self.normal

    def _g(self, z):
        return float(self.normal @ _as_point(z, self.dim)) - self.offset

    def _grad(self, z):
        return self.normal.copy()

    def _hess(self, z):
        return np.zeros((self.dim, self.dim))


class Ball(SetOracle):
    """{z : ||z - center|| <= radius}, described by g = ||z-c||^2 - r^2."""

    smooth = True

    def __init__(self, center, radius):
        center = _as_point(center)
        if radius <= 0.0:
            raise ValueError("radius must be positive")
        super().__init__(center.shape[0])
        self.center = center
        self.radius = float(radius)

    def project(self, z) -> np.ndarray:
        z = _as_point(z, self.dim)
        d = z - self.center
        nd = np.linalg.norm(d)
        if nd <= self.radius:
            return z.copy()
        return self.center + d * (self.radius / nd)

    def _g(self, z):
        d = _as_point(z, self.dim) - self.center
        return float(d @ d) - self.radius**2

    def _grad(self, z):
        return 2.0 * (_as_point(z, self.dim) - self.center)

    def _hess(self, z):
        return 2.0 * np.eye(self.dim)


class Ellipsoid(SetOracle):
    """{z : (z - c)^T Q (z - c) <= 1} for symmetric positive definite Q.

    Projection solves the scalar dual equation sum_i d_i w_i^2 / (1 + lam
    d_i)^2 = 1 (eigenbasis of Q) by Newton with a bisection safeguard;
    no closed form exists. ``tol`` bounds the duality residual |f(lam)|.
    """

    smooth = True

    def __init__(self, Q, center=None, tol=1e-12):
        Q = np.asarray(Q, dtype=float)
        eig = symmetric_eigh(Q)
        if eig.eigenvalues[0] <= 0.0:
            raise ValueError("shape matrix must be positive definite")
        n = Q.shape[0]
        super().__init__(n)
        self.Q = 0.5 * (Q + Q.T)
        self.center = np.zeros(n) if center is None else _as_point(center, n)
        self.tol = float(tol)
        self._d = eig.eigenvalues
        self._U = eig.eigenvectors

    def project(self, z) -> np.ndarray:
        z = _as_point(z, self.dim)
        w = self._U.T @ (z - self.center)
        dw2 = self._d * w * w
        if float(np.sum(dw2)) <= 1.0:
            return z.copy()
        lam, lo, hi = 0.0, 0.0, None
        for _ in range(200):
            den = 1.0 + lam * self._d
            f = float(np.sum(dw2 / den**2)) - 1.0
            if abs(f) <= self.tol:
                break
            if f > 0.0:
                lo = lam
            else:
                hi = lam
            fp = -2.0 * float(np.sum(self._d * dw2 / den**3))
            step = lam - f / fp
            if hi is None:
                lam = step if step > lo else 2.0 * lo + 1.0
            else:
                lam = step if lo < step < hi else 0.5 * (lo + hi)
        else:
            raise ConvergenceError("ellipsoid dual Newton did not converge", residual=abs(f))
        return self.center + self._U @ (w / (1.0 + lam * self._d))

    def _g(self, z):
        d = _as_point(z, self.dim) - self.center
        return float(d @ (self.Q @ d)) - 1.0

    def _grad(self, z):
        return 2.0 * self.Q @ (_as_point(z, self.dim) - self.center)

    def _hess(self, z):
        return 2.0 * self.Q.copy()


class SecondOrderCone(SetOracle):
    """{(t, u) : ||u|| <= t}; the first coordinate is the cone height.

    The boundary descriptor g = ||u|| - t is smooth away from the apex;
    boundary calculus refuses at the apex, where the boundary is not a
    manifold.
    """

    smooth = True

    def __init__(self, dim):
        if dim < 2:
            raise ValueError("second-order cone needs dimension >= 2")
        super().__init__(dim)

    def project(self, z) -> np.ndarray:
        z = _as_point(z, self.dim)
        t, u = z[0], z[1:]
        nu = float(np.linalg.norm(u))
        if nu <= t:
            return z.copy()
        if nu <= -t:
            return np.zeros(self.dim)
        s = 0.5 * (t + nu)
        out = np.empty(self.dim)
        out[0] = s
        out[1:] = u * (s / nu)
        return out

    def _check_chart(self, z):
        z = _as_point(z, self.dim)
        nu = float(np.linalg.norm(z[1:]))
        if nu <= 1e-12 * (1.0 + abs(z[0])):
            raise RegularityError("second-order cone boundary is not a manifold at the apex")
        return z, nu

    def _g(self, z):
        z = _as_point(z, self.dim)
        return float(np.linalg.norm(z[1:])) - z[0]

    def _grad(self, z):
        z, nu = self._check_chart(z)
        g = np.empty(self.dim)
        g[0] = -1.0
        g[1:] = z[1:] / nu
        return g

    def _hess(self, z):
        z, nu = self._check_chart(z)
        uhat = z[1:] / nu
        H = np.zeros((self.dim, self.dim))
        H[1:, 1:] = (np.eye(self.dim - 1) - np.outer(uhat, uhat)) / nu
        return H


def _power_normal_root(alpha, x0, y0, max_iter=200):
    """Root of (u - x0) + alpha u^(alpha-1) (u^alpha - y0) = 0 on u >= 0.

    This is the normal equation for projecting (x0, y0) with x0 > 0 onto
    the epigraph {y >= x^alpha}; the root is bracketed in
    [max(y0, 0)^(1/alpha), x0], where the equation is monotone. Newton is
    started at min(x0, 1) and safeguarded by bisection; the root is
    resolved to machine precision (well inside the 1e-14 contract).
    """
    lo = y0 ** (1.0 / alpha) if y0 > 0.0 else 0.0
    hi = x0

    def f_df(u):
        ua1 = u ** (alpha - 1.0)
        ua = ua1 * u
        f = (u - x0) + alpha * ua1 * (ua - y0)
        df = 1.0
        if u > 0.0:
            df += alpha * (alpha - 1.0) * u ** (alpha - 2.0) * (ua - y0)
        df += alpha * alpha * ua1 * ua1
        return f, df

    u = min(max(min(x0, 1.0), lo), hi)
    for _ in range(max_iter):
        f, df = f_df(u)
        if f > 0.0:
            hi = u
        else:
            lo = u
        nxt = u - f / df if df > 0.0 else 0.5 * (lo + hi)
        if not lo <= nxt <= hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - u) <= 2.0 * np.finfo(float).eps * (1.0 + abs(u)):
            return nxt
        u = nxt
    raise ConvergenceError("power-epigraph normal equation did not converge", residual=abs(f))


class PowerEpigraph(SetOracle):
    """{(x, y) : y >= |x|^alpha - beta} in the plane, alpha > 1, beta >= 0.

    For beta > 0 the projection reuses the beta = 0 solver on shifted
    coordinates. The boundary is C^1 everywhere; its second derivative
    alpha (alpha-1) |x|^(alpha-2) blows up at x = 0 when alpha < 2, so the
    Hessian refuses there.
    """

    smooth = True

    def __init__(self, alpha, beta=0.0):
        if alpha <= 1.0:
            raise ValueError("exponent must exceed 1")
        if beta < 0.0:
            raise ValueError("shift must be nonnegative")
        super().__init__(2)
        self.alpha = float(alpha)
        self.beta = float(beta)

    def project(self, z) -> np.ndarray:
        z = _as_point(z, 2)
        x0, y0 = float(z[0]), float(z[1]) + self.beta
        ax = abs(x0)
        if y0 >= ax**self.alpha:
            return z.copy()
        if ax == 0.0:
            return np.array([0.0, -self.beta])
        u = _power_normal_root(self.alpha, ax, y0)
        return np.array([np.copysign(u, x0), u**self.alpha - self.beta])

    def _g(self, z):
        z = _as_point(z, 2)
        return abs(z[0]) ** self.alpha - self.beta - z[1]

    def _grad(self, z):
        z = _as_point(z, 2)
        ax = abs(z[0])
        gx = self.alpha * ax ** (self.alpha - 1.0)
        return np.array([np.copysign(gx, z[0]), -1.0])

    def _hess(self, z):
        z = _as_point(z, 2)
        ax = abs(z[0])
        if ax == 0.0:
            if self.alpha < 2.0:
                raise RegularityError("boundary is C^1 but not C^2 at the vertex")
            gxx = 2.0 if self.alpha == 2.0 else 0.0
        else:
            gxx = self.alpha * (self.alpha - 1.0) * ax ** (self.alpha - 2.0)
        return np.array([[gxx, 0.0], [0.0, 0.0]])


class PsdCone(SetOracle):
    """Positive semidefinite n-by-n matrices on flattened coordinates.

    Points are symmetric matrices flattened isometrically (off-diagonals
    scaled by sqrt(2)), so the ambient dimension is n(n+1)/2 and the
    Euclidean norm equals the Frobenius norm. Projection clips negative
    eigenvalues at zero. The descriptor g = -lambda_min is C^2 wherever
    the smallest eigenvalue is simple.
    """

    smooth = True

    def __init__(self, n, gap_tol=1e-8):
        if n < 1:
            raise ValueError("matrix order must be at least 1")
        super().__init__(sym_dim(n))
        self.n = int(n)
        self.gap_tol = float(gap_tol)

    def project(self, z) -> np.ndarray:
        z = _as_point(z, self.dim)
        eig = symmetric_eigh(vec_to_sym(z))
        w = np.maximum(eig.eigenvalues, 0.0)
        V = eig.eigenvectors
        return sym_to_vec((V * w) @ V.T)

    def _eig_simple_min(self, z):
        eig = symmetric_eigh(vec_to_sym(_as_point(z, self.dim)))
        w, V = eig.eigenvalues, eig.eigenvectors
        if self.n > 1 and w[1] - w[0] <= self.gap_tol * (1.0 + abs(w[0])):
            raise RegularityError("smallest eigenvalue is not simple; boundary is not C^2 here")
        return w, V

    def _g(self, z):
        eig = symmetric_eigh(vec_to_sym(_as_point(z, self.dim)))
        return -float(eig.eigenvalues[0])

    def _grad(self, z):
        w, V = self._eig_simple_min(z)
        q = V[:, 0]
        return -sym_to_vec(np.outer(q, q))

    def _hess(self, z):
        w, V = self._eig_simple_min(z)
        q = V[:, 0]
        basis = np.eye(self.dim)
        # M[i, l] = q^T smat(e_i) q_l for the non-minimal eigenvectors q_l.
        M = np.stack([q @ vec_to_sym(basis[i]) @ V[:, 1:] for i in range(self.dim)])
        return 2.0 * (M / (w[1:] - w[0])) @ M.T


class SpectralBoxTrace(SetOracle):
    """{Sigma : lambda_max(Sigma) <= bound, tr(Sigma) = 1} on flattened coordinates.

    Projection eigendecomposes, projects the eigenvalue vector onto the
    box-and-hyperplane set {v : v_i <= bound, sum v_i = 1} by a monotone
    scalar dual search, and reassembles with the same eigenvectors.
    """

    smooth = True

    def __init__(self, n, bound, gap_tol=1e-8):
        if n < 1:
            raise ValueError("matrix order must be at least 1")
        if bound * n < 1.0:
            raise ValueError("empty set: need bound * n >= 1")
        super().__init__(sym_dim(n))
        self.n = int(n)
        self.bound = float(bound)
        self.gap_tol = float(gap_tol)
        self._hull = AffineSubspace(sym_to_vec(np.eye(self.n))[None, :], [1.0])

    @property
    def affine_hull(self):
        return self._hull

    def _project_eigs(self, v):
        a = self.bound
        f = lambda mu: float(np.sum(np.minimum(v - mu, a))) - 1.0
        lo = float(np.min(v)) - a - 1.0
        hi = float(np.max(v))
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if f(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        return np.minimum(v - 0.5 * (lo + hi), a)

    def project(self, z) -> np.ndarray:
        z = _as_point(z, self.dim)
        eig = symmetric_eigh(vec_to_sym(z))
        w = self._project_eigs(eig.eigenvalues)
        V = eig.eigenvectors
        return sym_to_vec((V * w) @ V.T)

    def _eig_simple_max(self, z):
        eig = symmetric_eigh(vec_to_sym(_as_point(z, self.dim)))
        w, V = eig.eigenvalues, eig.eigenvectors
        if self.n > 1 and w[-1] - w[-2] <= self.gap_tol * (1.0 + abs(w[-1])):
            raise RegularityError("leading eigenvalue is not simple; boundary is not C^2 here")
        return w, V

    def _g(self, z):
        eig = symmetric_eigh(vec_to_sym(_as_point(z, self.dim)))
        return float(eig.eigenvalues[-1]) - self.bound

    def _grad(self, z):
        w, V = self._eig_simple_max(z)
        q = V[:, -1]
        return sym_to_vec(np.outer(q, q))

    def _hess(self, z):
        w, V = self._eig_simple_max(z)
        q = V[:, -1]
        basis = np.eye(self.dim)
        M = np.stack([q @ vec_to_sym(basis[i]) @ V[:, :-1] for i in range(self.dim)])
        return 2.0 * (M / (w[-1] - w[:-1])) @ M.T


class BallInAffine(SetOracle):
    """A norm ball intersected with an affine subspace, in closed form.

    The intersection is a ball within the subspace, centered at the
    projected center with the chordal radius; projection goes to the
    subspace first, then clamps radially inside it. On flattened
    symmetric-matrix coordinates this realizes Frobenius-norm balls
    within linear matrix constraints.
    """

    smooth = True

    def __init__(self, center, radius, subspace: AffineSubspace):
        center = _as_point(center, subspace.dim)
        if radius <= 0.0:
            raise ValueError("radius must be positive")
        super().__init__(subspace.dim)
        self.center = center
        self.radius = float(radius)
        self.subspace = subspace
        q = subspace.project(center)
        chord2 = radius**2 - float(np.sum((center - q) ** 2))
        if chord2 <= 0.0:
            raise ValueError("empty set: the ball does not reach the subspace")
        self.in_plane_center = q
        self.in_plane_radius = float(np.sqrt(chord2))

    @property
    def affine_hull(self):
        return self.subspace

    def project(self, z) -> np.ndarray:
        p = self.subspace.project(z)
        d = p - self.in_plane_center
        nd = float(np.linalg.norm(d))
        if nd <= self.in_plane_radius:
            return p
        return self.in_plane_center + d * (self.in_plane_radius / nd)

    def _g(self, z):
        d = _as_point(z, self.dim) - self.in_plane_center
        return float(d @ d) - self.in_plane_radius**2

    def _grad(self, z):
        return 2.0 * (_as_point(z, self.dim) - self.in_plane_center)

    def _hess(self, z):
        return 2.0 * np.eye(self.dim)


class EmbeddedOracle(SetOracle):
    """A lower-dimensional oracle placed inside an affine subspace.

    ``inner`` lives in the subspace's local orthonormal coordinates; the
    embedded set is {anchor + B v : v in inner}. Projection splits
    orthogonally: restrict to the subspace, project inside, embed back.
    """

    def __init__(self, inner: SetOracle, subspace: AffineSubspace):
        if inner.dim != subspace.subspace_dim:
            raise ValueError(
                f"inner oracle dimension {inner.dim} does not match "
                f"subspace dimension {subspace.subspace_dim}"
            )
        super().__init__(subspace.dim)
        self.inner = inner
        self.subspace = subspace
        self.smooth = inner.smooth

    @property
    def affine_hull(self):
        return self.subspace

    def project(self, z) -> np.ndarray:
        v = self.subspace.to_local(_as_point(z, self.dim))
        return self.subspace.from_local(self.inner.project(v))

    def _g(self, z):
        return self.inner._g(self.subspace.to_local(_as_point(z, self.dim)))

    def _grad(self, z):
        B = self.subspace.basis
        return B @ self.inner._grad(self.subspace.to_local(_as_point(z, self.dim)))

    def _hess(self, z):
        B = self.subspace.basis
        return B @ self.inner._hess(self.subspace.to_local(_as_point(z, self.dim))) @ B.T


class IsometricImage(SetOracle):
    """The image of a hull-confined oracle under the hull's isometry to R^d.

    Inverse of :class:`EmbeddedOracle`: for a set contained in the
    subspace, projection commutes with the isometry, so the image oracle
    projects by round-tripping through ambient coordinates.
    """

    def __init__(self, inner: SetOracle, subspace: AffineSubspace):
        if inner.dim != subspace.dim:
            raise ValueError("oracle and subspace live in different ambient dimensions")
        super().__init__(subspace.subspace_dim)
        self.inner = inner
        self.subspace = subspace
        self.smooth = inner.smooth

    def project(self, v) -> np.ndarray:
        z = self.subspace.from_local(_as_point(v, self.dim))
        return self.subspace.to_local(self.inner.project(z))

    def _g(self, v):
        return self.inner._g(self.subspace.from_local(_as_point(v, self.dim)))

    def _grad(self, v):
        B = self.subspace.basis
        return B.T @ self.inner._grad(self.subspace.from_local(_as_point(v, self.dim)))

    def _hess(self, v):
        B = self.subspace.basis
        return B.T @ self.inner._hess(self.subspace.from_local(_as_point(v, self.dim))) @ B


def dykstra_project(oracles, z, tol=DYKSTRA_TOL, max_iter=DYKSTRA_MAX_ITER) -> np.ndarray:
    """Projection onto an intersection by Dykstra's cyclic scheme.

    Stops when the iterate moves less than ``tol`` between successive
    cycles. The intersection must be nonempty; that is the caller's
    responsibility.

    Raises:
        ConvergenceError: cycle budget exhausted; carries the last
            cycle-to-cycle change as the residual.
    """
    if not oracles:
        raise ValueError("need at least one oracle")
    x = _as_point(z, oracles[0].dim).copy()
    if len(oracles) == 1:
        return oracles[0].project(x)
    corrections = [np.zeros_like(x) for _ in oracles]
    prev = None
    change = np.inf
    for _ in range(max_iter):
        for i, oracle in enumerate(oracles):
            shifted = x + corrections[i]
            x = oracle.project(shifted)
            corrections[i] = shifted - x
        if prev is not None:
            change = float(np.linalg.norm(x - prev))
            if change <= tol:
                return x
        prev = x.copy()
    raise ConvergenceError(
        f"Dykstra did not converge within {max_iter} cycles", residual=change
    )


class DykstraIntersection(SetOracle):
    """Intersection of oracles without a closed-form joint projection."""

    def __init__(self, members, tol=DYKSTRA_TOL, max_iter=DYKSTRA_MAX_ITER, hull=None):
        members = list(members)
        if not members:
            raise ValueError("need at least one member oracle")
        dims = {m.dim for m in members}
        if len(dims) != 1:
            raise ValueError(f"member dimensions differ: {sorted(dims)}")
        super().__init__(members[0].dim)
        self.members = members
        self.tol = float(tol)
        self.max_iter = int(max_iter)
        self._hull = hull

    @property
    def affine_hull(self):
        return self._hull

    def project(self, z) -> np.ndarray:
        return dykstra_project(self.members, z, tol=self.tol, max_iter=self.max_iter)


def boundary_eval(oracle: SetOracle, z):
    """Boundary descriptor (g, grad, hess) restricted to the affine hull.

    When the oracle carries an affine hull, the gradient and Hessian are
    expressed in the hull's orthonormal basis coordinates; otherwise they
    are ambient.

    Raises:
        UnsupportedOperation: the oracle has no smooth descriptor.
        RegularityError: z is outside the descriptor's chart domain.
    """
    if not oracle.smooth:
        raise UnsupportedOperation(f"{type(oracle).__name__} has no smooth boundary descriptor")
    g = oracle._g(z)
    grad = oracle._grad(z)
    hess = oracle._hess(z)
    hull = oracle.affine_hull
    if hull is None:
        return g, grad, hess
    B = hull.basis
    return g, B.T @ grad, B.T @ hess @ B
