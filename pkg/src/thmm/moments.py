"""Moment sequences, block Hankel families, and Schur complement chains.

A finite sequence of Hermitian q x q matrices s_0..s_m on an interval
[a, b] generates four block Hankel families

    H1[j] = {s_{l+k}},                    available for 2j     <= m,
    H2[j] = {shat_{l+k}},                 available for 2j + 2 <= m,
    K1[j] = {b s_{l+k} - s_{l+k+1}},      available for 2j + 1 <= m,
    K2[j] = {-a s_{l+k} + s_{l+k+1}},     same range as K1,

where shat_j = -ab s_j + (a+b) s_{j+1} - s_{j+2}.  The sequence is
Hausdorff positive definite when (H1[n], H2[n-1]) for m = 2n, or
(K1[n], K2[n]) for m = 2n + 1, are positive definite; everything
downstream of :func:`classify` requires that property.

Corner Schur complements of the four families drive the recursive
constructions in the rest of the package.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from ._linalg import (
    PIVOT_RTOL,
    cholesky_pd,
    frob,
    hermitize,
    min_eigenvalue,
    solve_pd,
)
from .errors import (
    EmptyMeasure,
    InsufficientMoments,
    InvalidMomentSequence,
    PointOutsideInterval,
)

DEFAULT_HERMITIAN_RTOL = 1e-12


def _square_matrix(x, q=None, what="matrix"):
    m = np.array(x, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidMomentSequence(f"{what} must be square, got shape {m.shape}")
    if q is not None and m.shape[0] != q:
        raise InvalidMomentSequence(f"{what} must be {q}x{q}, got shape {m.shape}")
    return m


@dataclasses.dataclass(frozen=True, eq=False)
class MomentSequence:
    """Hermitian q x q moments s_0..s_m attached to an interval [a, b].

    Inputs must be Hermitian within ``tol_herm`` relative to their size;
    they are stored symmetrized, so downstream code can rely on exact
    Hermiticity.  Instances are immutable and safe to share.
    """

    a: float
    b: float
    s: tuple
    tol_herm: float = DEFAULT_HERMITIAN_RTOL
    q: int = dataclasses.field(init=False)

    def __post_init__(self):
        a = float(self.a)
        b = float(self.b)
        if not a < b:
            raise InvalidMomentSequence(f"need a < b, got a={a}, b={b}")
        mats = list(self.s)
        if not mats:
            raise InvalidMomentSequence("need at least one moment (m >= 0)")
        first = _square_matrix(mats[0], what="s_0")
        q = first.shape[0]
        stored = []
        for j, raw in enumerate(mats):
            mat = _square_matrix(raw, q, what=f"s_{j}")
            defect = np.linalg.norm(mat - mat.conj().T)
            if defect > self.tol_herm * (1.0 + np.linalg.norm(mat)):
                raise InvalidMomentSequence(
                    f"s_{j} is not Hermitian within tolerance (defect {defect:.3e})"
                )
            sym = hermitize(mat)
            sym.flags.writeable = False
            stored.append(sym)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "s", tuple(stored))
        object.__setattr__(self, "q", q)

    @property
    def m(self):
        """Highest moment index."""
        return len(self.s) - 1


def shifted_moments(seq):
    """shat_j = -ab s_j + (a+b) s_{j+1} - s_{j+2}, for j = 0..m-2."""
    a, b, s = seq.a, seq.b, seq.s
    return tuple(
        -a * b * s[j] + (a + b) * s[j + 1] - s[j + 2] for j in range(len(s) - 2)
    )


def hankel_from_entries(entries, j):
    """Block Hankel {e_{l+k}}_{l,k=0..j} assembled from a flat entry list."""
    q = entries[0].shape[0]
    out = np.empty(((j + 1) * q, (j + 1) * q), dtype=complex)
    for l in range(j + 1):
        for k in range(j + 1):
            out[l * q:(l + 1) * q, k * q:(k + 1) * q] = entries[l + k]
    return out


@dataclasses.dataclass(frozen=True, eq=False)
class HankelSet:
    """The four block Hankel families of a moment sequence."""

    seq: MomentSequence
    H1: tuple
    H2: tuple
    K1: tuple
    K2: tuple
    shat: tuple

    def _member(self, family, j):
        if j < 0 or j >= len(family[1]):
            raise InsufficientMoments(
                f"{family[0]}[{j}] needs moments beyond the supplied m={self.seq.m}"
            )
        return family[1][j]

    def h1(self, j):
        return self._member(("H1", self.H1), j)

    def h2(self, j):
        return self._member(("H2", self.H2), j)

    def k1(self, j):
        return self._member(("K1", self.K1), j)

    def k2(self, j):
        return self._member(("K2", self.K2), j)


def build_hankels(seq):
    """All block Hankel family members buildable from the available moments."""
    s = seq.s
    m = seq.m
    a, b = seq.a, seq.b
    shat = shifted_moments(seq)
    k1_entries = tuple(b * s[j] - s[j + 1] for j in range(m))
    k2_entries = tuple(-a * s[j] + s[j + 1] for j in range(m))
    H1 = tuple(hankel_from_entries(s, j) for j in range(m // 2 + 1))
    H2 = tuple(hankel_from_entries(shat, j) for j in range((m - 2) // 2 + 1)) if m >= 2 else ()
    K1 = tuple(hankel_from_entries(k1_entries, j) for j in range((m - 1) // 2 + 1)) if m >= 1 else ()
    K2 = tuple(hankel_from_entries(k2_entries, j) for j in range((m - 1) // 2 + 1)) if m >= 1 else ()
    return HankelSet(seq=seq, H1=H1, H2=H2, K1=K1, K2=K2, shat=shat)


class StructuralVectors:
    """Stacked moment vectors and shift machinery of one moment sequence.

    Provides the block column/row data from which the orthogonal matrix
    polynomials and the transfer quadratic forms are assembled: the block
    shift T_j, its resolvent R_j(z) = (I - z T_j)^{-1} in closed Toeplitz
    form, the first block-column unit v_j, and the various stacked moment
    columns.
    """

    def __init__(self, seq):
        self.seq = seq
        self._shat = shifted_moments(seq)

    def _need(self, idx, what):
        if idx > self.seq.m or idx < 0:
            raise InsufficientMoments(
                f"{what} needs s_{idx} but m={self.seq.m}"
            )

    def v(self, j):
        q = self.seq.q
        out = np.zeros(((j + 1) * q, q), dtype=complex)
        out[:q, :] = np.eye(q)
        return out

    def shift(self, j):
        """Block lower shift T_j of size (j+1)q."""
        q = self.seq.q
        n = (j + 1) * q
        out = np.zeros((n, n), dtype=complex)
        if j >= 1:
            out[q:, :-q] = np.eye(j * q)
        return out

    def R(self, j, z):
        """(I - z T_j)^{-1}: lower block Toeplitz with z^{l-k} I at block (l, k)."""
        q = self.seq.q
        n = (j + 1) * q
        out = np.zeros((n, n), dtype=complex)
        z = complex(z)
        power = 1.0 + 0.0j
        eye = np.eye(q)
        for d in range(j + 1):
            block = power * eye
            for l in range(d, j + 1):
                k = l - d
                out[l * q:(l + 1) * q, k * q:(k + 1) * q] = block
            power *= z
        return out

    def y(self, j, k):
        """Stacked moments (s_j; ...; s_k)."""
        self._need(k, f"y[{j},{k}]")
        return np.concatenate(self.seq.s[j:k + 1], axis=0)

    def shat(self, j):
        if j >= len(self._shat) or j < 0:
            raise InsufficientMoments(f"shat_{j} needs s_{j + 2} but m={self.seq.m}")
        return self._shat[j]

    def yhat(self, j, k):
        """Stacked shifted moments (shat_j; ...; shat_k)."""
        if k >= len(self._shat):
            raise InsufficientMoments(f"yhat[{j},{k}] needs s_{k + 2} but m={self.seq.m}")
        return np.concatenate(self._shat[j:k + 1], axis=0)

    def u1(self, j):
        """(0; -y_{[0,j-1]}), the second-kind column of the H1 family."""
        q = self.seq.q
        if j == 0:
            return np.zeros((q, q), dtype=complex)
        return np.concatenate([np.zeros((q, q), dtype=complex), -self.y(0, j - 1)], axis=0)

    def u2(self, j):
        """(-(a+b)s_0 + s_1; -shat_0; ...; -shat_{j-1})."""
        a, b = self.seq.a, self.seq.b
        self._need(1, "u2")
        head = -(a + b) * self.seq.s[0] + self.seq.s[1]
        if j == 0:
            return head
        return np.concatenate([head, -self.yhat(0, j - 1)], axis=0)

    def ut1(self, j):
        """y_{[0,j]} - b (0; y_{[0,j-1]})."""
        if j == 0:
            return self.seq.s[0].copy()
        q = self.seq.q
        pad = np.concatenate([np.zeros((q, q), dtype=complex), self.y(0, j - 1)], axis=0)
        return self.y(0, j) - self.seq.b * pad

    def ut2(self, j):
        """-y_{[0,j]} + a (0; y_{[0,j-1]})."""
        if j == 0:
            return -self.seq.s[0]
        q = self.seq.q
        pad = np.concatenate([np.zeros((q, q), dtype=complex), self.y(0, j - 1)], axis=0)
        return -self.y(0, j) + self.seq.a * pad

    def Y1(self, j):
        return self.y(j, 2 * j - 1)

    def Y2(self, j):
        return self.yhat(j, 2 * j - 1)

    def Yt1(self, j):
        return self.seq.b * self.y(j, 2 * j - 1) - self.y(j + 1, 2 * j)

    def Yt2(self, j):
        return -self.seq.a * self.y(j, 2 * j - 1) + self.y(j + 1, 2 * j)


@dataclasses.dataclass(frozen=True, eq=False)
class SchurChain:
    """Corner Schur complements of the four Hankel families.

    For positive definite parents every member is a positive definite
    q x q matrix and the determinants telescope:
    det K1[j] = prod_{i <= j} det khat1[i], and likewise per family.
    """

    seq: MomentSequence
    hhat1: tuple
    hhat2: tuple
    khat1: tuple
    khat2: tuple


def schur_chain(hankels):
    """Recursive corner Schur complements of all four Hankel families."""
    seq = hankels.seq
    vecs = StructuralVectors(seq)
    s = seq.s
    a, b = seq.a, seq.b
    shat = hankels.shat

    def corner_chain(count, base, corner, cross, parents, name):
        out = []
        for j in range(count):
            if j == 0:
                out.append(base)
                continue
            y = cross(j)
            x = solve_pd(parents[j - 1], y, name, j - 1)
            out.append(hermitize(corner(j) - y.conj().T @ x))
        return tuple(out)

    hhat1 = corner_chain(
        len(hankels.H1), s[0], lambda j: s[2 * j], vecs.Y1, hankels.H1, "H1"
    )
    hhat2 = corner_chain(
        len(hankels.H2), shat[0] if hankels.H2 else None,
        lambda j: shat[2 * j], vecs.Y2, hankels.H2, "H2",
    ) if hankels.H2 else ()
    khat1 = corner_chain(
        len(hankels.K1), b * s[0] - s[1] if hankels.K1 else None,
        lambda j: b * s[2 * j] - s[2 * j + 1], vecs.Yt1, hankels.K1, "K1",
    ) if hankels.K1 else ()
    khat2 = corner_chain(
        len(hankels.K2), -a * s[0] + s[1] if hankels.K2 else None,
        lambda j: -a * s[2 * j] + s[2 * j + 1], vecs.Yt2, hankels.K2, "K2",
    ) if hankels.K2 else ()
    return SchurChain(seq=seq, hhat1=hhat1, hhat2=hhat2, khat1=khat1, khat2=khat2)


@dataclasses.dataclass(frozen=True)
class Witness:
    family: str
    index: int
    min_eigenvalue: float


@dataclasses.dataclass(frozen=True)
class Classification:
    kind: str  # "PositiveDefinite" | "Degenerate" | "Indefinite"
    witness: Witness | None = None

    @property
    def is_positive_definite(self):
        return self.kind == "PositiveDefinite"


def classify(seq):
    """Hausdorff positive definiteness of the sequence.

    Decided by attempted Cholesky factorization of the defining Hankel
    pair.  On failure the offending matrix and its smallest eigenvalue
    are reported; an eigenvalue below the negative pivot threshold means
    Indefinite, otherwise Degenerate.
    """
    hank = build_hankels(seq)
    m = seq.m
    if m % 2 == 0:
        n = m // 2
        checks = [("H1", n, hank.h1(n))]
        if n >= 1:
            checks.append(("H2", n - 1, hank.h2(n - 1)))
    else:
        n = (m - 1) // 2
        checks = [("K1", n, hank.k1(n)), ("K2", n, hank.k2(n))]
    for family, j, mat in checks:
        if cholesky_pd(mat) is None:
            lam = min_eigenvalue(mat)
            scale = PIVOT_RTOL * (1.0 + frob(mat))
            kind = "Indefinite" if lam < -scale else "Degenerate"
            return Classification(kind, Witness(family, j, lam))
    return Classification("PositiveDefinite")


@dataclasses.dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Finitely supported nonnegative Hermitian matrix measure on [a, b]."""

    a: float
    b: float
    points: tuple
    weights: tuple

    def __post_init__(self):
        pts = tuple(float(x) for x in self.points)
        if not pts:
            raise EmptyMeasure("a discrete measure needs at least one atom")
        wts = [
            _square_matrix(w, what=f"weight_{i}") for i, w in enumerate(self.weights)
        ]
        if len(wts) != len(pts):
            raise InvalidMomentSequence("points and weights must have equal lengths")
        q = wts[0].shape[0]
        stored = []
        for i, w in enumerate(wts):
            w = _square_matrix(w, q, what=f"weight_{i}")
            if np.linalg.norm(w - w.conj().T) > DEFAULT_HERMITIAN_RTOL * (1.0 + np.linalg.norm(w)):
                raise InvalidMomentSequence(f"weight_{i} is not Hermitian")
            w = hermitize(w)
            if min_eigenvalue(w) < -PIVOT_RTOL * (1.0 + frob(w)):
                raise InvalidMomentSequence(f"weight_{i} is not positive semidefinite")
            w.flags.writeable = False
            stored.append(w)
        a = float(self.a)
        b = float(self.b)
        for x in pts:
            if x < a or x > b:
                raise PointOutsideInterval(f"atom at {x} lies outside [{a}, {b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", tuple(stored))

    @property
    def q(self):
        return self.weights[0].shape[0]

    def moments(self, count):
        """Power moments s_j = sum_k x_k^j w_k for j = 0..count."""
        return moments_from_discrete_measure(self.points, self.weights, count, self.a, self.b)


def moments_from_discrete_measure(points, weights, count, a, b):
    """MomentSequence with s_j = sum_k x_k^j w_k, j = 0..count.

    With at least n+1 atoms carrying positive definite weight the result
    classifies PositiveDefinite up to order m = 2n + 1.
    """
    measure = points if isinstance(points, DiscreteMeasure) else DiscreteMeasure(
        a=float(a), b=float(b), points=tuple(points), weights=tuple(weights)
    )
    if count < 0:
        raise InvalidMomentSequence("moment count must be >= 0")
    s = []
    powers = np.ones(len(measure.points), dtype=float)
    xs = np.asarray(measure.points, dtype=float)
    for _ in range(count + 1):
        acc = sum(p * w for p, w in zip(powers, measure.weights))
        s.append(acc)
        powers = powers * xs
    return MomentSequence(a=measure.a, b=measure.b, s=tuple(s))
