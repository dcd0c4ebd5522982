"""Minimal dense linear algebra used throughout the package.

The eigensolver is a cyclic Jacobi iteration: at desk scale (n up to a
few dozen) it is simple, accurate, and has no dependencies beyond numpy
array arithmetic. Null spaces and minimal-norm least squares are backed
by numpy's SVD-based routines behind the same tolerance conventions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError

# Singular values / pivots below RANK_RTOL times the largest one count as zero.
RANK_RTOL = 1e-10
# Jacobi sweep convergence: off-diagonal Frobenius norm relative to ||S||_F.
JACOBI_RTOL = 1e-14


@dataclass(frozen=True)
class SymEig:
    """Eigendecomposition S = V diag(w) V^T with eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_matrix(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def symmetric_eigh(S, rtol=JACOBI_RTOL, max_sweeps=60) -> SymEig:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Args:
        S: square symmetric matrix (symmetric to 1e-12 relative).
        rtol: stop once the off-diagonal Frobenius norm falls below
            ``rtol * ||S||_F``.
        max_sweeps: safety cap on full sweeps.

    Returns:
        SymEig with ascending eigenvalues and orthonormal eigenvector columns.
    """
    S = _as_matrix(S)
    n, m = S.shape
    if n != m:
        raise ValueError(f"matrix must be square, got {S.shape}")
    norm = np.linalg.norm(S)
    if np.linalg.norm(S - S.T) > 1e-12 * (1.0 + norm):
        raise ValueError("matrix is not symmetric to 1e-12 relative")

    A = 0.5 * (S + S.T)
    V = np.eye(n)
    if n == 1:
        return SymEig(np.array([A[0, 0]]), V)

    tol = rtol * max(norm, np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 0.1 * tol / n:
                    continue
                theta = 0.5 * (A[q, q] - A[p, p]) / apq
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # Rotate rows/columns p and q of A, and columns p and q of V.
                ap, aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                ap, aq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * ap - s * aq
                A[q, :] = s * ap + c * aq
                A[p, q] = 0.0
                A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        raise ConvergenceError(
            f"Jacobi iteration did not converge in {max_sweeps} sweeps",
            residual=float(np.linalg.norm(A - np.diag(np.diag(A)))),
        )

    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return SymEig(w[order], V[:, order])


def matrix_rank(A, rtol=RANK_RTOL) -> int:
    """Numerical rank with the package-wide relative tolerance."""
    A = _as_matrix(A)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def orthonormal_nullspace(A, rtol=RANK_RTOL) -> np.ndarray:
    """Orthonormal basis of null(A), as columns of an (n, n - rank) array.

    For an empty constraint set (zero rows) the basis is the identity.
    Rank deficiency is not an error: the basis is returned for the
    detected rank and the caller decides what to do with the width.
    """
    A = _as_matrix(A)
    m, n = A.shape
    if m == 0 or A.size == 0:
        return np.eye(n)
    _, s, Vt = np.linalg.svd(A, full_matrices=True)
    rank = int(np.sum(s > rtol * s[0])) if s.size and s[0] > 0 else 0
    return Vt[rank:].T.copy()


def least_squares_min_norm(A, b, rtol=RANK_RTOL) -> np.ndarray:
    """Minimal-norm x with ||A x - b|| minimal."""
    A = _as_matrix(A)
    b = np.asarray(b, dtype=float)
    if b.ndim != 1 or b.shape[0] != A.shape[0]:
        raise ValueError(f"shape mismatch: A is {A.shape}, b is {b.shape}")
    x, *_ = np.linalg.lstsq(A, b, rcond=rtol)
    return x


def sym_to_vec(S) -> np.ndarray:
    """Isometric flattening of a symmetric matrix.

    Off-diagonal entries are scaled by sqrt(2) so the Euclidean norm of
    the vector equals the Frobenius norm of the matrix. Layout is the
    upper triangle in row-major order.
    """
    S = _as_matrix(S)
    n, m = S.shape
    if n != m:
        raise ValueError("matrix must be square")
    iu = np.triu_indices(n)
    v = S[iu].copy()
    v[iu[0] != iu[1]] *= np.sqrt(2.0)
    return v


def vec_to_sym(v) -> np.ndarray:
    """Inverse of :func:`sym_to_vec`."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError("expected a 1-d array")
    m = v.shape[0]
    n = int((np.sqrt(8.0 * m + 1.0) - 1.0) / 2.0 + 0.5)
    if n * (n + 1) // 2 != m:
        raise ValueError(f"length {m} is not a triangular number")
    S = np.zeros((n, n))
    iu = np.triu_indices(n)
    vals = v.copy()
    vals[iu[0] != iu[1]] /= np.sqrt(2.0)
    S[iu] = vals
    S = S + S.T - np.diag(np.diag(S))
    return S


def sym_dim(n: int) -> int:
    """Length of the flattened representation of an n-by-n symmetric matrix."""
    return n * (n + 1) // 2
