"""Dyukarev-Stieltjes matrix parameter chains.

Second-type parameters (rhat_j, that_j, lhat_j, mhat_j) depend on both
interval endpoints; first-type parameters (M_j, L_j) depend on the left
endpoint only.  Every second-type parameter is computed by two
independent routes that must agree:

  quadratic forms      that_j = v^* R^*(a) K1[j]^{-1} R(a) v,
                       QF_j   = (u2 + a v s0)^* R^*(a) H2[j]^{-1} R(a) (u2 + a v s0),
                       mhat_j = that_j - that_{j-1},   lhat_j = QF_j - QF_{j-1},
                       rhat_j = s0 + QF_{j-1},         rhat_0 = s0, lhat_{-1} = s0;

  polynomial values    mhat_j = G1[j](a)^* khat1[j]^{-1} G1[j](a),
                       lhat_j = Q2[j](a)^* hhat2[j]^{-1} Q2[j](a),
                       rhat_j = G1[j](a)^{-1} T1[j](a),
                       that_j = Q2[j](a)^{-1} P2[j](a).

The chains telescope (rhat_{j+1} - rhat_j = lhat_j and
that_j - that_{j-1} = mhat_j) and all members with index >= 0 are
positive definite for Hausdorff positive definite input.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from ._linalg import (
    cholesky_pd,
    frob,
    hermitize,
    inv_pd,
    rel_residual,
    solve_pd,
)
from .errors import (
    InconsistentLengths,
    InvalidMomentSequence,
    NonPositiveParameter,
    RouteMismatch,
    WrongMatrixSize,
)
from .moments import (
    MomentSequence,
    StructuralVectors,
    build_hankels,
    hankel_from_entries,
)
from .polynomials import build_family, ensure_family, eval_poly
from .reporting import IdentityCheck, IdentityReport

ROUTE_RTOL = 1e-10


@dataclasses.dataclass(frozen=True, eq=False)
class DsmSecond:
    """Second-type parameter chains; ``lhat`` starts at index -1 (= s_0)."""

    q: int
    a: float
    b: float
    rhat: tuple
    that: tuple
    mhat: tuple
    lhat: tuple

    def r(self, j):
        return self.rhat[j]

    def t(self, j):
        return self.that[j]

    def m(self, j):
        return self.mhat[j]

    def l(self, j):
        """lhat_j for j >= -1."""
        return self.lhat[j + 1]

    @property
    def lhat_from_zero(self):
        return self.lhat[1:]

    @property
    def s0(self):
        return self.lhat[0]


@dataclasses.dataclass(frozen=True, eq=False)
class DsmFirst:
    """First-type parameter chains M_j, L_j (left endpoint only)."""

    q: int
    a: float
    M: tuple
    L: tuple


def _pairing(vecs, j, z_left, x_left, mat, family, x_right, z_right):
    """(R_j(conj(z_left)) x_left)^* mat^{-1} (R_j(z_right) x_right)."""
    left = vecs.R(j, np.conj(z_left)) @ x_left
    right = solve_pd(mat, vecs.R(j, z_right) @ x_right, family, j)
    return left.conj().T @ right


def compute_second(seq, fam=None, rtol=ROUTE_RTOL):
    """Second-type parameters by both routes; fails on route disagreement."""
    fam = build_family(seq) if fam is None else fam
    vecs = fam.vectors
    hank = fam.hankels
    sch = fam.schur
    a = seq.a
    m = seq.m
    s0 = seq.s[0]
    n_t = (m - 1) // 2 if m >= 1 else -1
    n_l = (m - 2) // 2 if m >= 2 else -1

    that_qf = []
    for j in range(n_t + 1):
        v = vecs.v(j)
        that_qf.append(hermitize(_pairing(vecs, j, a, v, hank.K1[j], "K1", v, a)))
    mhat_qf = (
        [that_qf[0]] + [that_qf[j] - that_qf[j - 1] for j in range(1, n_t + 1)]
        if that_qf else []
    )

    qf = []
    for j in range(n_l + 1):
        col = vecs.u2(j) + a * (vecs.v(j) @ s0)
        qf.append(hermitize(_pairing(vecs, j, a, col, hank.H2[j], "H2", col, a)))
    lhat_qf = [qf[0]] + [qf[j] - qf[j - 1] for j in range(1, n_l + 1)] if qf else []
    rhat_qf = [np.array(s0)] + [s0 + qf[j] for j in range(n_l + 1)]

    # polynomial route
    mhat_poly = []
    for j in range(n_t + 1):
        val = eval_poly(fam.g1[j], a)
        mhat_poly.append(val.conj().T @ solve_pd(sch.khat1[j], val, "khat1", j))
    lhat_poly = []
    for j in range(n_l + 1):
        val = eval_poly(fam.q2[j], a)
        lhat_poly.append(val.conj().T @ solve_pd(sch.hhat2[j], val, "hhat2", j))
    rhat_poly = [
        np.linalg.solve(eval_poly(fam.g1[j], a), eval_poly(fam.t1[j], a))
        for j in range(min(n_l + 2, len(fam.g1), len(fam.t1)))
    ]
    that_poly = [
        np.linalg.solve(eval_poly(fam.q2[j], a), eval_poly(fam.p2[j], a))
        for j in range(min(n_t + 1, len(fam.q2), len(fam.p2)))
    ]

    def check(name, qf_vals, poly_vals):
        for j, (x, y) in enumerate(zip(qf_vals, poly_vals)):
            res = rel_residual(x, y)
            if res > rtol:
                raise RouteMismatch(name, f"j={j}", res)

    check("mhat", mhat_qf, mhat_poly)
    check("lhat", lhat_qf, lhat_poly)
    check("rhat", rhat_qf, rhat_poly)
    check("that", that_qf, that_poly)

    return DsmSecond(
        q=seq.q, a=seq.a, b=seq.b,
        rhat=tuple(hermitize(x) for x in rhat_qf),
        that=tuple(that_qf),
        mhat=tuple(mhat_qf),
        lhat=(np.array(s0),) + tuple(lhat_qf),
    )


def compute_first(source):
    """First-type parameters M_j (H1 forms) and L_j (K2 forms)."""
    if isinstance(source, MomentSequence):
        seq = source
        hank = build_hankels(seq)
        vecs = StructuralVectors(seq)
    else:
        fam = ensure_family(source)
        seq = fam.seq
        hank = fam.hankels
        vecs = fam.vectors
    a = seq.a
    m = seq.m

    qh = []
    for j in range(m // 2 + 1):
        v = vecs.v(j)
        qh.append(hermitize(_pairing(vecs, j, a, v, hank.H1[j], "H1", v, a)))
    M = [qh[0]] + [qh[j] - qh[j - 1] for j in range(1, len(qh))]

    qk = []
    for j in range((m - 1) // 2 + 1 if m >= 1 else 0):
        u = vecs.ut2(j)
        qk.append(hermitize(_pairing(vecs, j, a, u, hank.K2[j], "K2", u, a)))
    L = [qk[0]] + [qk[j] - qk[j - 1] for j in range(1, len(qk))] if qk else []

    return DsmFirst(q=seq.q, a=a, M=tuple(M), L=tuple(L))


def product_identities(fam, dsm, first=None):
    """Residual report for the parameter/polynomial/Schur product identities.

    Two printed variants of the P2 partial-sum identity circulate; both are
    checked and the notes record which one the numerics support.
    """
    fam = ensure_family(fam)
    seq = fam.seq
    a = seq.a
    q = seq.q
    sch = fam.schur
    eye = np.eye(q, dtype=complex)
    mh = dsm.mhat
    lh = dsm.lhat_from_zero
    s0 = dsm.s0
    if first is None:
        first = compute_first(fam)

    inv_m = [inv_pd(x, "mhat", j) for j, x in enumerate(mh)]
    inv_l = [inv_pd(x, "lhat", j) for j, x in enumerate(lh)]

    # W[j] = prod_{k<j} mhat_k^{-1} lhat_k^{-1}; X[j] = W[j] mhat_j^{-1}
    W = [eye]
    for k in range(min(len(inv_m), len(inv_l))):
        W.append(W[-1] @ inv_m[k] @ inv_l[k])
    X = [W[j] @ inv_m[j] for j in range(min(len(W), len(inv_m)))]

    entries = []
    notes = []

    def add(name, where, lhs, rhs):
        entries.append(IdentityCheck(name, where, rel_residual(lhs, rhs)))

    for j in range(min(len(fam.q2), len(X))):
        add("q2_alternating_product", f"j={j}",
            eval_poly(fam.q2[j], a), (-1.0) ** j * X[j])
    for j in range(1, min(len(fam.g1), len(W))):
        add("g1_alternating_product", f"j={j}",
            eval_poly(fam.g1[j], a), (-1.0) ** j * W[j])
    for j in range(1, min(len(fam.t1), len(W))):
        acc = s0 + sum(lh[:j]) if j >= 1 else s0
        add("t1_alternating_product", f"j={j}",
            eval_poly(fam.t1[j], a), (-1.0) ** j * W[j] @ acc)

    res_cur, res_prev = [], []
    for j in range(1, min(len(fam.p2), len(fam.q2), len(mh))):
        p2a = eval_poly(fam.p2[j], a)
        q2a = eval_poly(fam.q2[j], a)
        sum_cur = sum(mh[:j + 1])
        sum_prev = sum(mh[:j])
        r1 = rel_residual(p2a, q2a @ sum_cur)
        r2 = rel_residual(p2a, q2a @ sum_prev)
        entries.append(IdentityCheck("p2_sum_through_current", f"j={j}", r1))
        entries.append(IdentityCheck("p2_sum_through_previous", f"j={j}", r2))
        res_cur.append(r1)
        res_prev.append(r2)
    if res_cur:
        supported = (
            "p2_sum_through_current" if max(res_cur) <= max(res_prev)
            else "p2_sum_through_previous"
        )
        notes.append(
            f"P2 partial-sum identity: numerics support {supported} "
            f"(max residuals {max(res_cur):.3e} vs {max(res_prev):.3e})"
        )

    for j in range(min(len(fam.q2), len(fam.g1), len(inv_m))):
        add("q2_from_g1", f"j={j}",
            eval_poly(fam.q2[j], a), eval_poly(fam.g1[j], a) @ inv_m[j])
    for j in range(1, min(len(fam.g1), len(fam.q2) + 1, len(inv_l) + 1)):
        add("g1_from_q2", f"j={j}",
            eval_poly(fam.g1[j], a), -eval_poly(fam.q2[j - 1], a) @ inv_l[j - 1])
    for j in range(1, min(len(fam.t1), len(fam.g1))):
        acc = s0 + sum(lh[:j])
        add("t1_from_g1", f"j={j}",
            eval_poly(fam.t1[j], a), eval_poly(fam.g1[j], a) @ acc)

    # Schur complements rebuilt from the parameters
    for j in range(min(len(sch.khat1), len(X))):
        add("khat1_from_params", f"j={j}", sch.khat1[j], W[j] @ inv_m[j] @ W[j].conj().T)
    for j in range(min(len(sch.hhat2), len(X), len(inv_l))):
        add("hhat2_from_params", f"j={j}", sch.hhat2[j], X[j] @ inv_l[j] @ X[j].conj().T)

    # and the inverse direction: parameters rebuilt from Schur complements
    ws = [eye]
    for k in range(min(len(sch.hhat2), len(sch.khat1))):
        ws.append(sch.hhat2[k] @ np.linalg.inv(sch.khat1[k]) @ ws[k])
    for j in range(min(len(mh), len(sch.khat1), len(ws))):
        rebuilt = ws[j].conj().T @ solve_pd(sch.khat1[j], ws[j], "khat1", j)
        add("mhat_from_schur", f"j={j}", mh[j], rebuilt)
    for j in range(min(len(lh), len(sch.hhat2), len(sch.khat1), len(ws))):
        core = sch.khat1[j] @ solve_pd(sch.hhat2[j], sch.khat1[j], "hhat2", j)
        wj_inv = np.linalg.inv(ws[j])
        add("lhat_from_schur", f"j={j}", lh[j], wj_inv @ core @ wj_inv.conj().T)

    # alternating Schur products for the polynomial endpoint values
    def desc_product(pairs):
        acc = eye
        for left, right in pairs:
            acc = acc @ left @ np.linalg.inv(right)
        return acc

    for j in range(1, min(len(fam.p1), len(sch.khat2) + 1, len(sch.hhat1) + 1)):
        prod = desc_product([(sch.khat2[k], sch.hhat1[k]) for k in range(j - 1, -1, -1)])
        add("p1_from_schur", f"j={j}", eval_poly(fam.p1[j], a), (-1.0) ** j * prod)
    for j in range(1, min(len(fam.g1), len(sch.hhat2) + 1, len(sch.khat1) + 1)):
        prod = desc_product([(sch.hhat2[k], sch.khat1[k]) for k in range(j - 1, -1, -1)])
        add("g1_from_schur", f"j={j}", eval_poly(fam.g1[j], a), (-1.0) ** j * prod)
    for j in range(min(len(fam.q2), len(sch.khat1), len(sch.hhat2) + 1)):
        # Q2[j](a) = (-1)^j khat1_j hhat2_{j-1}^{-1} khat1_{j-1} ... hhat2_0^{-1} khat1_0
        prod = sch.khat1[j].copy()
        for k in range(j - 1, -1, -1):
            prod = prod @ np.linalg.inv(sch.hhat2[k]) @ sch.khat1[k]
        add("q2_from_schur", f"j={j}", eval_poly(fam.q2[j], a), (-1.0) ** j * prod)
    for j in range(min(len(fam.t2), len(sch.hhat1), len(sch.khat2) + 1)):
        prod = sch.hhat1[j].copy()
        for k in range(j - 1, -1, -1):
            prod = prod @ np.linalg.inv(sch.khat2[k]) @ sch.hhat1[k]
        add("t2_from_schur", f"j={j}", eval_poly(fam.t2[j], a), (-1.0) ** (j + 1) * prod)

    # first-type parameters from polynomial endpoint values
    for j in range(min(len(first.M), len(fam.t2), len(fam.p1))):
        t2a = eval_poly(fam.t2[j], a)
        target = -np.linalg.inv(t2a) if j == 0 else -np.linalg.solve(
            t2a, eval_poly(fam.p1[j], a)
        )
        add("m_first_from_polys", f"j={j}", first.M[j], target)
    for j in range(min(len(first.L), len(fam.p1) - 1, len(fam.t2))):
        add("l_first_from_polys", f"j={j}", first.L[j],
            np.linalg.solve(eval_poly(fam.p1[j + 1], a), eval_poly(fam.t2[j], a)))

    return IdentityReport(tuple(entries), tuple(notes))


def _require_pd_param(x, name, index):
    mat = np.asarray(x, dtype=complex)
    if np.linalg.norm(mat - mat.conj().T) > 1e-10 * (1.0 + np.linalg.norm(mat)):
        raise NonPositiveParameter(name, index)
    if cholesky_pd(hermitize(mat)) is None:
        raise NonPositiveParameter(name, index)
    return hermitize(mat)


def recover_moments(s0, mhat, lhat, a, b):
    """Rebuild the longest moment sequence the parameter chains support.

    The corner of each K1/H2 Hankel extension is the cross quadratic form
    plus the Schur complement predicted by the parameters, so moments
    unwind in the order s_1 (from mhat_0), s_2 (from lhat_0), s_3
    (from mhat_1), s_4 (from lhat_1), and so on.  The result classifies
    PositiveDefinite by construction.
    """
    if not float(a) < float(b):
        raise InvalidMomentSequence(f"need a < b, got a={a}, b={b}")
    s0 = _require_pd_param(s0, "s0", 0)
    mhat = [_require_pd_param(x, "mhat", j) for j, x in enumerate(mhat)]
    lhat = [_require_pd_param(x, "lhat", j) for j, x in enumerate(lhat)]
    if len(lhat) > len(mhat):
        raise InconsistentLengths(
            f"got {len(lhat)} lhat parameters but only {len(mhat)} mhat parameters"
        )
    a = float(a)
    b = float(b)
    q = s0.shape[0]
    eye = np.eye(q, dtype=complex)

    s = [s0]
    W = eye
    for j in range(len(mhat)):
        inv_mj = inv_pd(mhat[j], "mhat", j)
        khat = W @ inv_mj @ W.conj().T
        if j == 0:
            corner = khat
        else:
            yt = np.concatenate(
                [b * s[j + i] - s[j + 1 + i] for i in range(j)], axis=0
            )
            k_prev = hankel_from_entries(
                [b * s[i] - s[i + 1] for i in range(2 * j - 1)], j - 1
            )
            corner = khat + yt.conj().T @ solve_pd(k_prev, yt, "K1", j - 1)
        s.append(hermitize(b * s[2 * j] - corner))

        if j >= len(lhat):
            break
        inv_lj = inv_pd(lhat[j], "lhat", j)
        x = W @ inv_mj
        hhat = x @ inv_lj @ x.conj().T
        shat_entries = [
            -a * b * s[i] + (a + b) * s[i + 1] - s[i + 2] for i in range(2 * j)
        ]
        if j == 0:
            shat_corner = hhat
        else:
            y2 = np.concatenate(shat_entries[j:2 * j], axis=0)
            h_prev = hankel_from_entries(shat_entries, j - 1)
            shat_corner = hhat + y2.conj().T @ solve_pd(h_prev, y2, "H2", j - 1)
        s.append(hermitize(-a * b * s[2 * j] + (a + b) * s[2 * j + 1] - shat_corner))
        W = W @ inv_mj @ inv_lj

    return MomentSequence(a=a, b=b, s=tuple(s))


@dataclasses.dataclass(frozen=True)
class LimitCheckRow:
    b: float
    index: int
    m_error: float
    l_error: float | None


def stieltjes_limit_check(seq, b_values):
    """Error table for the half-line limit of the second-type parameters.

    With a = 0 and the moments held fixed, b * mhat_j(0, b) approaches
    M_j(0) and lhat_j(0, b) / b approaches L_j(0) at rate 1/b as b grows.
    """
    if seq.a != 0.0:
        raise InvalidMomentSequence("limit check requires a = 0")
    first = compute_first(seq)
    rows = []
    for b in b_values:
        seq_b = MomentSequence(a=0.0, b=float(b), s=seq.s)
        dsm = compute_second(seq_b)
        for j in range(len(dsm.mhat)):
            m_err = frob(float(b) * dsm.mhat[j] - first.M[j])
            l_err = None
            if j < len(dsm.lhat_from_zero) and j < len(first.L):
                l_err = frob(dsm.lhat_from_zero[j] / float(b) - first.L[j])
            rows.append(LimitCheckRow(b=float(b), index=j, m_error=m_err, l_error=l_err))
    return tuple(rows)


def scalar_determinant_params(seq, rtol=1e-8):
    """Determinant formulas for the scalar (q = 1) second-type parameters.

    mtilde_j = det(D3_j)^2 / (det K1[j] det K1[j-1]) where D3_j carries j
    Hankel rows of b s_k - s_{k+1} over the monomial row (1, a, .., a^j);
    ltilde_j = det(E2_j)^2 / (det H2[j] det H2[j-1]) with Hankel rows of
    shat over the row -(u2^* + a v^* s_0) R^*(a).  Index -1 determinants
    are 1, which reproduces the closed base cases.  Values are validated
    against the matrix-route parameters before being returned.
    """
    if seq.q != 1:
        raise WrongMatrixSize(f"scalar determinant route needs q = 1, got q = {seq.q}")
    fam = build_family(seq)
    hank = fam.hankels
    vecs = fam.vectors
    a, b = seq.a, seq.b
    m = seq.m
    s = [complex(x[0, 0]) for x in seq.s]
    s3 = [b * s[k] - s[k + 1] for k in range(m)]
    sh = [complex(x[0, 0]) for x in hank.shat]
    n_t = (m - 1) // 2 if m >= 1 else -1
    n_l = (m - 2) // 2 if m >= 2 else -1

    def det(mat):
        return complex(np.linalg.det(mat))

    mtilde = []
    for j in range(n_t + 1):
        rows = [[s3[i + k] for k in range(j + 1)] for i in range(j)]
        rows.append([a ** k for k in range(j + 1)])
        d3 = det(np.array(rows, dtype=complex))
        denom = det(hank.K1[j]) * (det(hank.K1[j - 1]) if j >= 1 else 1.0)
        mtilde.append(float((d3 ** 2 / denom).real))

    ltilde = []
    for j in range(n_l + 1):
        u = vecs.u2(j) + a * (vecs.v(j) @ seq.s[0])
        e_row = -(u.conj().T @ vecs.R(j, a).conj().T)
        rows = [[sh[i + k] for k in range(j + 1)] for i in range(j)]
        rows.append([e_row[0, k] for k in range(j + 1)])
        e2 = det(np.array(rows, dtype=complex))
        denom = det(hank.H2[j]) * (det(hank.H2[j - 1]) if j >= 1 else 1.0)
        ltilde.append(float((e2 ** 2 / denom).real))

    dsm = compute_second(seq, fam)
    for j, val in enumerate(mtilde):
        res = rel_residual(np.array([[val]]), dsm.mhat[j])
        if res > rtol:
            raise RouteMismatch("mtilde", f"j={j}", res)
    for j, val in enumerate(ltilde):
        res = rel_residual(np.array([[val]]), dsm.lhat_from_zero[j])
        if res > rtol:
            raise RouteMismatch("ltilde", f"j={j}", res)
    return tuple(mtilde), tuple(ltilde)
