"""Orthogonal matrix polynomial families and their second-kind companions.

Eight families are attached to one moment sequence.  Writing
row_j = (-Y^* Parent^{-1}, I_q) for the Schur row of the indicated
parent Hankel matrix, and R_j(z) for the shift resolvent:

    P1[j](z) = row_j(Y1, H1[j-1])   R_j(z) v_j          monic, degree j
    Q1[j](z) = -row_j(Y1, H1[j-1])  R_j(z) u1_j         degree j - 1
    P2[j](z) = row_j(Y2, H2[j-1])   R_j(z) v_j          monic, degree j
    Q2[j](z) = -row_j(Y2, H2[j-1])  R_j(z) (u2_j + z v_j s_0)
    G1[j](z) = row_j(Yt1, K1[j-1])  R_j(z) v_j          monic, degree j
    T1[j](z) = row_j(Yt1, K1[j-1])  R_j(z) ut1_j
    G2[j](z) = row_j(Yt2, K2[j-1])  R_j(z) v_j          monic, degree j
    T2[j](z) = row_j(Yt2, K2[j-1])  R_j(z) ut2_j

The j = 0 members degenerate to P1 = P2 = G1 = G2 = I, Q1 = 0,
Q2(z) = -(u2_0 + z s_0), T1 = s_0, T2 = -s_0.  Coefficients are
extracted symbolically in z by block convolution against R_j.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from ._linalg import rel_residual, solve_pd
from .errors import OrderUnavailable, SingularNormalization
from .moments import (
    MomentSequence,
    StructuralVectors,
    build_hankels,
    schur_chain,
)
from .reporting import IdentityCheck, IdentityReport

FAMILY_TAGS = ("P1", "P2", "Q1", "Q2", "G1", "G2", "T1", "T2")


@dataclasses.dataclass(frozen=True, eq=False)
class MatrixPoly:
    """Matrix polynomial sum_k coeffs[k] z^k with a family tag."""

    coeffs: tuple
    family: str
    index: int

    @property
    def q(self):
        return self.coeffs[0].shape[0]

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, z):
        return eval_poly(self, z)


def eval_poly(p, z):
    """Horner evaluation sum_k A_k z^k."""
    z = complex(z)
    acc = np.array(p.coeffs[-1], dtype=complex)
    for c in reversed(p.coeffs[:-1]):
        acc = acc * z + c
    return acc


def adjoint_eval(p, z):
    """sum_k A_k^* z^k, which equals eval_poly(p, conj(z)) conjugate-transposed."""
    z = complex(z)
    acc = np.array(p.coeffs[-1].conj().T, dtype=complex)
    for c in reversed(p.coeffs[:-1]):
        acc = acc * z + c.conj().T
    return acc


def _schur_row(Y, parent, family, j, q):
    """Blocks of (-Y^* parent^{-1}, I_q); the bare (I_q,) when j = 0."""
    eye = np.eye(q, dtype=complex)
    if j == 0:
        return [eye]
    x = solve_pd(parent, Y, family, j - 1)
    blocks = [-x[k * q:(k + 1) * q, :].conj().T for k in range(j)]
    blocks.append(eye)
    return blocks


def _split_blocks(col, j, q):
    return [col[k * q:(k + 1) * q, :] for k in range(j + 1)]


def _convolve(row, col, shift=None, sign=1.0):
    """Coefficients of row . R_j(z) . (col + z shift_column).

    R_j(z) carries z^{l-k} I at block (l, k), so the z^p coefficient is
    sum_k row[k+p] col[k]; an optional rank-one-in-z shift through the
    first block column adds row[p] shift at power p + 1.
    """
    j = len(row) - 1
    q = row[0].shape[0]
    deg = j + (1 if shift is not None else 0)
    coeffs = [np.zeros((q, q), dtype=complex) for _ in range(deg + 1)]
    for p in range(j + 1):
        acc = np.zeros((q, q), dtype=complex)
        for k in range(j - p + 1):
            acc = acc + row[k + p] @ col[k]
        coeffs[p] += acc
    if shift is not None:
        for p in range(j + 1):
            coeffs[p + 1] += row[p] @ shift
    coeffs = [sign * c for c in coeffs]
    while len(coeffs) > 1 and not coeffs[-1].any():
        coeffs.pop()
    return tuple(coeffs)


@dataclasses.dataclass(frozen=True, eq=False)
class PolynomialFamily:
    """All eight families built from one moment sequence.

    Retains the source Hankel set, Schur chain, and structural vectors so
    downstream constructions reuse them without rebuilding.
    """

    seq: MomentSequence
    hankels: object
    schur: object
    vectors: StructuralVectors
    p1: tuple
    p2: tuple
    q1: tuple
    q2: tuple
    g1: tuple
    g2: tuple
    t1: tuple
    t2: tuple

    def _get(self, store, family, j):
        if j < 0 or j >= len(store):
            raise OrderUnavailable(family, j)
        return store[j]

    def P1(self, j):
        return self._get(self.p1, "P1", j)

    def P2(self, j):
        return self._get(self.p2, "P2", j)

    def Q1(self, j):
        return self._get(self.q1, "Q1", j)

    def Q2(self, j):
        return self._get(self.q2, "Q2", j)

    def G1(self, j):
        return self._get(self.g1, "G1", j)

    def G2(self, j):
        return self._get(self.g2, "G2", j)

    def T1(self, j):
        return self._get(self.t1, "T1", j)

    def T2(self, j):
        return self._get(self.t2, "T2", j)


def ensure_family(source):
    """Accept a MomentSequence or a prebuilt PolynomialFamily."""
    if isinstance(source, PolynomialFamily):
        return source
    if isinstance(source, MomentSequence):
        return build_family(source)
    raise TypeError(f"expected MomentSequence or PolynomialFamily, got {type(source)!r}")


def build_family(seq):
    """Construct all eight polynomial families the moments support.

    Family ranges: P1/Q1 up to j = (m+1)//2, P2/Q2 up to j = (m-1)//2,
    G1/T1/G2/T2 up to j = m//2.  Positive definiteness of the pivot
    Hankel blocks is required and enforced by the factorizations.
    """
    hank = build_hankels(seq)
    sch = schur_chain(hank)
    vecs = StructuralVectors(seq)
    q = seq.q
    m = seq.m

    def vcol(j):
        return _split_blocks(vecs.v(j), j, q)

    p1, q1 = [], []
    for j in range((m + 1) // 2 + 1):
        row = _schur_row(vecs.Y1(j) if j else None, hank.H1[j - 1] if j else None, "H1", j, q)
        p1.append(MatrixPoly(_convolve(row, vcol(j)), "P1", j))
        u1 = _split_blocks(vecs.u1(j), j, q)
        q1.append(MatrixPoly(_convolve(row, u1, sign=-1.0), "Q1", j))

    p2, q2 = [], []
    if m >= 1:
        for j in range((m - 1) // 2 + 1):
            row = _schur_row(vecs.Y2(j) if j else None, hank.H2[j - 1] if j else None, "H2", j, q)
            p2.append(MatrixPoly(_convolve(row, vcol(j)), "P2", j))
            u2 = _split_blocks(vecs.u2(j), j, q)
            q2.append(MatrixPoly(_convolve(row, u2, shift=seq.s[0], sign=-1.0), "Q2", j))

    g1, t1, g2, t2 = [], [], [], []
    for j in range(m // 2 + 1):
        row1 = _schur_row(vecs.Yt1(j) if j else None, hank.K1[j - 1] if j else None, "K1", j, q)
        g1.append(MatrixPoly(_convolve(row1, vcol(j)), "G1", j))
        t1.append(MatrixPoly(_convolve(row1, _split_blocks(vecs.ut1(j), j, q)), "T1", j))
        row2 = _schur_row(vecs.Yt2(j) if j else None, hank.K2[j - 1] if j else None, "K2", j, q)
        g2.append(MatrixPoly(_convolve(row2, vcol(j)), "G2", j))
        t2.append(MatrixPoly(_convolve(row2, _split_blocks(vecs.ut2(j), j, q)), "T2", j))

    return PolynomialFamily(
        seq=seq, hankels=hank, schur=sch, vectors=vecs,
        p1=tuple(p1), p2=tuple(p2), q1=tuple(q1), q2=tuple(q2),
        g1=tuple(g1), g2=tuple(g2), t1=tuple(t1), t2=tuple(t2),
    )


def _default_sample_points(count=10, seed=314159):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-3.0, 3.0, size=(count, 2))
    return [complex(re, im) for re, im in pts]


def verify_family_identities(fam, measure=None, zs=None):
    """Residual report for the polynomial-level identities.

    Covers the four Schur-complement product identities at z = a, the
    orthogonality sums against a reproducing discrete measure (when one
    is supplied), the two resolvent-quotient identities at sampled z,
    and the two endpoint linear relations.  All residuals are relative
    Frobenius norms.
    """
    seq = fam.seq
    a, b = seq.a, seq.b
    sch = fam.schur
    vecs = fam.vectors
    hank = fam.hankels
    entries = []

    def add(name, where, lhs, rhs):
        entries.append(IdentityCheck(name, where, rel_residual(lhs, rhs)))

    for j in range(min(len(fam.p1), len(fam.t2), len(sch.hhat1))):
        add("hhat1_product", f"j={j}",
            sch.hhat1[j], -eval_poly(fam.p1[j], a) @ adjoint_eval(fam.t2[j], a))
    for j in range(min(len(sch.hhat2), len(fam.q2), max(len(fam.g1) - 1, 0))):
        add("hhat2_product", f"j={j}",
            sch.hhat2[j], -eval_poly(fam.q2[j], a) @ adjoint_eval(fam.g1[j + 1], a))
    for j in range(min(len(sch.khat1), len(fam.g1), len(fam.q2))):
        add("khat1_product", f"j={j}",
            sch.khat1[j], eval_poly(fam.g1[j], a) @ adjoint_eval(fam.q2[j], a))
    for j in range(min(len(sch.khat2), len(fam.t2), max(len(fam.p1) - 1, 0))):
        add("khat2_product", f"j={j}",
            sch.khat2[j], eval_poly(fam.t2[j], a) @ adjoint_eval(fam.p1[j + 1], a))

    if measure is not None:
        n = seq.m // 2
        vals = [[eval_poly(fam.p1[j], x) for x in measure.points] for j in range(n + 1)]
        for j in range(n + 1):
            for k in range(n + 1):
                gram = sum(
                    vals[j][i] @ w @ vals[k][i].conj().T
                    for i, w in enumerate(measure.weights)
                )
                target = sch.hhat1[j] if j == k else np.zeros((seq.q, seq.q))
                add("orthogonality", f"j={j},k={k}", gram, target)

    if zs is None:
        zs = _default_sample_points()
    for j in range(min(len(fam.g2), len(fam.t2), len(hank.H1))):
        try:
            t2a_inv = np.linalg.inv(adjoint_eval(fam.t2[j], a))
        except np.linalg.LinAlgError as exc:
            raise SingularNormalization(f"T2[{j}] value at a is singular") from exc
        rv_a = vecs.R(j, a) @ vecs.v(j)
        solved = solve_pd(hank.H1[j], rv_a, "H1", j)
        for z in zs:
            lhs = adjoint_eval(fam.g2[j], z) @ t2a_inv
            rhs = -(vecs.R(j, np.conj(z)) @ vecs.v(j)).conj().T @ solved
            add("ratio_g2_t2", f"j={j},z={z:.3g}", lhs, rhs)
    for j in range(min(max(len(fam.q1) - 1, 0), max(len(fam.p1) - 1, 0), len(hank.K2))):
        try:
            p1a_inv = np.linalg.inv(adjoint_eval(fam.p1[j + 1], a))
        except np.linalg.LinAlgError as exc:
            raise SingularNormalization(f"P1[{j + 1}] value at a is singular") from exc
        ut = vecs.ut2(j)
        solved = solve_pd(hank.K2[j], vecs.R(j, a) @ ut, "K2", j)
        for z in zs:
            lhs = adjoint_eval(fam.q1[j + 1], z) @ p1a_inv
            rhs = -(vecs.R(j, np.conj(z)) @ ut).conj().T @ solved
            add("ratio_q1_p1", f"j={j},z={z:.3g}", lhs, rhs)

    for j in range(min(max(len(fam.q1) - 1, 0), len(fam.q2), len(fam.g1), len(fam.t1),
                       max(len(fam.p1) - 1, 0))):
        lhs = (b - a) * eval_poly(fam.q1[j + 1], a) - eval_poly(fam.q2[j], a)
        corr = eval_poly(fam.p1[j + 1], a) @ np.linalg.solve(
            eval_poly(fam.g1[j], a), eval_poly(fam.t1[j], a)
        )
        add("endpoint_q1_q2", f"j={j}", lhs + corr, np.zeros_like(lhs))
    jmax_g = min(len(fam.g1) - 1, len(fam.g2) - 1, len(fam.t2) - 1,
                 len(fam.q2), len(fam.p2))
    for j in range(1, jmax_g + 1):
        lhs = eval_poly(fam.g1[j], a) - eval_poly(fam.g2[j], a)
        corr = (b - a) * eval_poly(fam.t2[j], a) @ np.linalg.solve(
            eval_poly(fam.q2[j - 1], a), eval_poly(fam.p2[j - 1], a)
        )
        add("endpoint_g1_g2", f"j={j}", lhs - corr, np.zeros_like(lhs))

    return IdentityReport(tuple(entries))
