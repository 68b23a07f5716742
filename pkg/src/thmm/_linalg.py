"""Dense helpers for small complex Hermitian systems.

Positive definiteness is always decided by an attempted Cholesky
factorization with a relative pivot threshold, never by eigenvalue
iterations, so the decision is deterministic.  Eigenvalues are computed
only to report witnesses for failed classifications.
"""

import math

import numpy as np
import scipy.linalg

from .errors import SingularPivot

PIVOT_RTOL = 1e-12


def frob(a):
    return float(np.linalg.norm(a))


def rel_residual(x, y):
    """Frobenius distance between x and y scaled by the larger norm (floor 1)."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    return float(np.linalg.norm(x - y) / max(1.0, np.linalg.norm(x), np.linalg.norm(y)))


def hermitize(a):
    return 0.5 * (a + a.conj().T)


def cholesky_pd(a, pivot_rtol=PIVOT_RTOL):
    """Lower Cholesky factor of a Hermitian matrix, or None.

    Returns None as soon as a pivot falls at or below
    pivot_rtol * ||a||_F, the package-wide positive definiteness test.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    threshold = pivot_rtol * frob(a)
    L = np.zeros_like(a)
    for k in range(n):
        d = a[k, k].real - np.vdot(L[k, :k], L[k, :k]).real
        if d <= threshold:
            return None
        L[k, k] = math.sqrt(d)
        if k + 1 < n:
            col = a[k + 1:, k] - L[k + 1:, :k] @ L[k, :k].conj()
            L[k + 1:, k] = col / L[k, k]
    return L


def solve_pd(a, rhs, family="matrix", index=0, pivot_rtol=PIVOT_RTOL):
    """Solve a @ x = rhs for Hermitian positive definite a, via Cholesky."""
    L = cholesky_pd(a, pivot_rtol)
    if L is None:
        raise SingularPivot(family, index)
    y = scipy.linalg.solve_triangular(L, rhs, lower=True)
    return scipy.linalg.solve_triangular(L.conj().T, y, lower=False)


def inv_pd(a, family="matrix", index=0):
    return solve_pd(a, np.eye(a.shape[0], dtype=complex), family, index)


def is_pd(a):
    return cholesky_pd(hermitize(np.asarray(a, dtype=complex))) is not None


def min_eigenvalue(a):
    """Smallest eigenvalue of the Hermitian part; used only for witnesses."""
    return float(np.linalg.eigvalsh(hermitize(np.asarray(a, dtype=complex)))[0])


def right_divide(num, den):
    """num @ inv(den) without forming the inverse."""
    return np.linalg.solve(den.T, num.T).T
