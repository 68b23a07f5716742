"""Resolvent matrices, auxiliary matrices, and their multiplicative factorizations.

The 2q x 2q resolvent U of order m = 2n or m = 2n + 1 parameterizes the
solution set of the truncated Hausdorff matrix moment problem through a
linear fractional transformation.  It is computed here by three routes:

  direct      block quotients of polynomial values (normalized at z = a),
  second-dsm  a left-to-right product of affine triangular factors built
              from the second-type Dyukarev-Stieltjes parameters,
  first-dsm   the analogous product over the first-type parameters.

The auxiliary matrices tie the routes together: the odd-kind auxiliary
matrix is the product of the odd Blaschke-Potapov factors, the even-kind
(hat) auxiliary matrix the product of the even ones, and sandwiching by
diagonal scalings and one boundary factor recovers U itself.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from ._linalg import rel_residual, solve_pd
from .errors import (
    InsufficientMoments,
    PoleAtZ,
    RouteMismatch,
    SingularNormalization,
)
from .polynomials import adjoint_eval, ensure_family, eval_poly


def _eye(q):
    return np.eye(q, dtype=complex)


def _up(x):
    q = x.shape[0]
    out = np.zeros((2 * q, 2 * q), dtype=complex)
    out[:q, :q] = _eye(q)
    out[q:, q:] = _eye(q)
    out[:q, q:] = x
    return out


def _low(y):
    q = y.shape[0]
    out = np.zeros((2 * q, 2 * q), dtype=complex)
    out[:q, :q] = _eye(q)
    out[q:, q:] = _eye(q)
    out[q:, :q] = y
    return out


def _diag(c_top, c_bottom, q):
    out = np.zeros((2 * q, 2 * q), dtype=complex)
    out[:q, :q] = complex(c_top) * _eye(q)
    out[q:, q:] = complex(c_bottom) * _eye(q)
    return out


def _anti(upper, lower_right, q):
    """[[0, upper I], [I, lower_right]] with scalar or matrix entries."""
    out = np.zeros((2 * q, 2 * q), dtype=complex)
    out[:q, q:] = complex(upper) * _eye(q) if np.isscalar(upper) else upper
    out[q:, :q] = _eye(q)
    out[q:, q:] = lower_right
    return out


def _blocks(mat, q):
    return mat[:q, :q], mat[:q, q:], mat[q:, :q], mat[q:, q:]


def _assemble(alpha, beta, gamma, delta):
    return np.block([[alpha, beta], [gamma, delta]])


@dataclasses.dataclass(frozen=True, eq=False)
class ResolventValue:
    """Value of the 2q x 2q resolvent at one point z."""

    full: np.ndarray
    q: int
    parity: str
    z: complex
    fallback_direct: bool = False

    def __post_init__(self):
        if not np.all(np.isfinite(self.full)):
            raise SingularNormalization(
                f"resolvent value at z={self.z} is not finite"
            )

    @property
    def alpha(self):
        return self.full[:self.q, :self.q]

    @property
    def beta(self):
        return self.full[:self.q, self.q:]

    @property
    def gamma(self):
        return self.full[self.q:, :self.q]

    @property
    def delta(self):
        return self.full[self.q:, self.q:]


def _order(seq, parity):
    if parity == "even":
        return seq.m // 2
    if parity == "odd":
        if seq.m < 1:
            raise InsufficientMoments("odd parity needs at least s_0, s_1")
        return (seq.m - 1) // 2
    raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")


def _inv_normalizer(value, what):
    try:
        return np.linalg.inv(value)
    except np.linalg.LinAlgError as exc:
        raise SingularNormalization(f"{what} is numerically singular") from exc


def resolvent_direct(source, z, parity):
    """Resolvent by block quotients of polynomial values.

    Even parity (m = 2n) uses the interval families:
        alpha = T2[n]^*(zbar) T2[n]^{*-1}(a)
        beta  = T1[n]^*(zbar) G1[n]^{*-1}(a) / (b - a)
        gamma = (z - a) G2[n]^*(zbar) T2[n]^{*-1}(a)
        delta = (b - z)/(b - a) G1[n]^*(zbar) G1[n]^{*-1}(a)
    Odd parity (m = 2n + 1):
        alpha = Q2[n]^*(zbar) Q2[n]^{*-1}(a)
        beta  = -Q1[n+1]^*(zbar) P1[n+1]^{*-1}(a)
        gamma = -(z - a)(b - z) P2[n]^*(zbar) Q2[n]^{*-1}(a)
        delta = P1[n+1]^*(zbar) P1[n+1]^{*-1}(a)
    """
    fam = ensure_family(source)
    seq = fam.seq
    a, b = seq.a, seq.b
    z = complex(z)
    n = _order(seq, parity)
    if parity == "even":
        inv_t2a = _inv_normalizer(adjoint_eval(fam.T2(n), a), f"T2[{n}]^*(a)")
        inv_g1a = _inv_normalizer(adjoint_eval(fam.G1(n), a), f"G1[{n}]^*(a)")
        alpha = adjoint_eval(fam.T2(n), z) @ inv_t2a
        beta = adjoint_eval(fam.T1(n), z) @ inv_g1a / (b - a)
        gamma = (z - a) * adjoint_eval(fam.G2(n), z) @ inv_t2a
        delta = (b - z) / (b - a) * adjoint_eval(fam.G1(n), z) @ inv_g1a
    else:
        inv_q2a = _inv_normalizer(adjoint_eval(fam.Q2(n), a), f"Q2[{n}]^*(a)")
        inv_p1a = _inv_normalizer(adjoint_eval(fam.P1(n + 1), a), f"P1[{n + 1}]^*(a)")
        alpha = adjoint_eval(fam.Q2(n), z) @ inv_q2a
        beta = -adjoint_eval(fam.Q1(n + 1), z) @ inv_p1a
        gamma = -(z - a) * (b - z) * adjoint_eval(fam.P2(n), z) @ inv_q2a
        delta = adjoint_eval(fam.P1(n + 1), z) @ inv_p1a
    return ResolventValue(
        full=_assemble(alpha, beta, gamma, delta), q=seq.q, parity=parity, z=z
    )


@dataclasses.dataclass(frozen=True, eq=False)
class AuxMatrixValue:
    kind: str
    order: int
    z: complex
    value: np.ndarray


def _aux_blocks(fam, j, z, kind):
    """The four transfer quadratic-form blocks of one auxiliary matrix."""
    seq = fam.seq
    vecs = fam.vectors
    hank = fam.hankels
    a = seq.a
    z = complex(z)
    q = seq.q
    v = vecs.v(j)
    eye = _eye(q)
    if kind == "tilde-odd":
        mat, fam_name = hank.k1(j), "K1"
        left_col = right_col = vecs.ut1(j)
        extra = None
    elif kind == "tilde-even":
        mat, fam_name = hank.h2(j), "H2"
        left_col = right_col = vecs.u2(j)
        extra = None
    elif kind == "hat-even":
        mat, fam_name = hank.h2(j), "H2"
        left_col = vecs.u2(j) + np.conj(z) * (v @ seq.s[0])
        right_col = vecs.u2(j) + a * (v @ seq.s[0])
        extra = seq.s[0]
    else:
        raise ValueError(f"unknown auxiliary kind {kind!r}")

    rz = vecs.R(j, np.conj(z))
    ra = vecs.R(j, a)
    left = np.hstack([rz @ left_col, rz @ v]).conj().T
    right = solve_pd(mat, np.hstack([ra @ v, ra @ right_col]), fam_name, j)
    pair = left @ right
    p_uv, p_uu = pair[:q, :q], pair[:q, q:]
    p_vv, p_vu = pair[q:, :q], pair[q:, q:]

    alpha = eye - (z - a) * p_uv
    beta = (z - a) * (p_uu if extra is None else extra + p_uu)
    gamma = -(z - a) * p_vv
    delta = eye + (z - a) * p_vu
    return _assemble(alpha, beta, gamma, delta)


def aux_tilde_odd(source, j, z):
    fam = ensure_family(source)
    return AuxMatrixValue("tilde-odd", 2 * j + 1, complex(z),
                          _aux_blocks(fam, j, z, "tilde-odd"))


def aux_tilde_even(source, j, z):
    fam = ensure_family(source)
    return AuxMatrixValue("tilde-even", 2 * j, complex(z),
                          _aux_blocks(fam, j, z, "tilde-even"))


def aux_hat_even(source, j, z):
    fam = ensure_family(source)
    return AuxMatrixValue("hat-even", 2 * j, complex(z),
                          _aux_blocks(fam, j, z, "hat-even"))


@dataclasses.dataclass(frozen=True, eq=False)
class AuxTriple:
    tilde_even: AuxMatrixValue
    tilde_odd: AuxMatrixValue
    hat_even: AuxMatrixValue


def aux_matrices(source, j, z, check_rtol=1e-12):
    """All three auxiliary matrices of order index j at the point z.

    Also asserts that conjugating the plain even-kind matrix by the
    moment shear [[I, z s0], [0, I]] ... [[I, -a s0], [0, I]] reproduces
    the hat-kind matrix, which ties the two even-kind definitions together.
    """
    fam = ensure_family(source)
    s0 = fam.seq.s[0]
    a = fam.seq.a
    te = aux_tilde_even(fam, j, z)
    to = aux_tilde_odd(fam, j, z)
    he = aux_hat_even(fam, j, z)
    sheared = _up(complex(z) * s0) @ te.value @ _up(-a * s0)
    res = rel_residual(he.value, sheared)
    if res > check_rtol:
        raise RouteMismatch("hat-even shear identity", f"j={j}, z={z}", res)
    return AuxTriple(tilde_even=te, tilde_odd=to, hat_even=he)


def bp_factor(fam, schur, k, z):
    """Blaschke-Potapov factor d^(k), affine in z, from polynomial values at a.

    d^(0) is the plain moment shear; even k = 2j + 2 is driven by
    (P2[j], Q2[j], hhat2[j]); odd k = 2j + 1 by (G1[j], T1[j], khat1[j]).
    Every factor equals the identity at z = a and has determinant one.
    """
    fam = ensure_family(fam)
    schur = fam.schur if schur is None else schur
    seq = fam.seq
    a = seq.a
    z = complex(z)
    q = seq.q
    eye = _eye(q)
    if k == 0:
        return _up((z - a) * seq.s[0])
    if k % 2 == 1:
        j = (k - 1) // 2
        g = eval_poly(fam.G1(j), a)
        t = eval_poly(fam.T1(j), a)
        solved = solve_pd(schur.khat1[j], np.hstack([g, t]), "khat1", j)
        sg, st = solved[:, :q], solved[:, q:]
        g_adj, t_adj = g.conj().T, t.conj().T
        alpha = eye - (z - a) * t_adj @ sg
        beta = (z - a) * t_adj @ st
        gamma = -(z - a) * g_adj @ sg
        delta = eye + (z - a) * g_adj @ st
    else:
        j = (k - 2) // 2
        p = eval_poly(fam.P2(j), a)
        qq = eval_poly(fam.Q2(j), a)
        solved = solve_pd(schur.hhat2[j], np.hstack([p, qq]), "hhat2", j)
        sp, sq = solved[:, :q], solved[:, q:]
        p_adj, q_adj = p.conj().T, qq.conj().T
        alpha = eye + (z - a) * q_adj @ sp
        beta = (z - a) * q_adj @ sq
        gamma = -(z - a) * p_adj @ sp
        delta = eye - (z - a) * p_adj @ sq
    return _assemble(alpha, beta, gamma, delta)


def bp_split(dsm, k, z):
    """The same factor as a sandwich of unit triangular matrices.

    Odd k = 2j + 1:  up(rhat_j) low(-(z - a) mhat_j) up(-rhat_j).
    Even k = 2j + 2: low(-that_j) up((z - a) lhat_j) low(that_j).
    k = 0 is the bare shear up((z - a) s_0).
    """
    z = complex(z)
    a = dsm.a
    if k == 0:
        return _up((z - a) * dsm.s0)
    if k % 2 == 1:
        j = (k - 1) // 2
        return _up(dsm.r(j)) @ _low(-(z - a) * dsm.m(j)) @ _up(-dsm.r(j))
    j = (k - 2) // 2
    return _low(-dsm.t(j)) @ _up((z - a) * dsm.l(j)) @ _low(dsm.t(j))


def bp_pair_check(fam, dsm, k, z, rtol=1e-12):
    """Factor route vs parameter-sandwich route for d^(k)."""
    fam = ensure_family(fam)
    lhs = bp_factor(fam, fam.schur, k, z)
    rhs = bp_split(dsm, k, z)
    res = rel_residual(lhs, rhs)
    if res > rtol:
        raise RouteMismatch("Blaschke-Potapov factor", f"k={k}, z={z}", res)
    return lhs


def aux_product(source, order, z, kind, dsm=None, rtol=1e-10):
    """Auxiliary matrix as a product of Blaschke-Potapov factors.

    kind = "tilde-odd" with order 2j + 1 multiplies d^(1) d^(3) .. d^(2j+1);
    kind = "hat-even" with order 2j multiplies d^(0) d^(2) .. d^(2j+2).
    The telescoped parameter form (pairs of shears and lower factors with
    the trailing boundary factors) is evaluated as well, and both products
    must match the directly assembled auxiliary matrix.
    """
    from .dsm import compute_second

    fam = ensure_family(source)
    seq = fam.seq
    a = seq.a
    z = complex(z)
    q = seq.q
    if dsm is None:
        dsm = compute_second(seq, fam)

    if kind == "tilde-odd":
        if order % 2 != 1:
            raise ValueError("tilde-odd product takes an odd order 2j + 1")
        j = (order - 1) // 2
        factors = [bp_factor(fam, fam.schur, 2 * k + 1, z) for k in range(j + 1)]
        direct = aux_tilde_odd(fam, j, z).value
        telescoped = _eye(2 * q)
        for k in range(j + 1):
            telescoped = telescoped @ _up(dsm.l(k - 1)) @ _low(-(z - a) * dsm.m(k))
        telescoped = telescoped @ _up(-dsm.r(j))
    elif kind == "hat-even":
        if order % 2 != 0:
            raise ValueError("hat-even product takes an even order 2j")
        j = order // 2
        factors = [bp_factor(fam, fam.schur, 2 * k, z) for k in range(j + 2)]
        direct = aux_hat_even(fam, j, z).value
        telescoped = _eye(2 * q)
        for k in range(j + 1):
            telescoped = telescoped @ _up((z - a) * dsm.l(k - 1)) @ _low(-dsm.m(k))
        telescoped = telescoped @ _up((z - a) * dsm.l(j)) @ _low(dsm.t(j))
    else:
        raise ValueError(f"kind must be 'tilde-odd' or 'hat-even', got {kind!r}")

    product = _eye(2 * q)
    for f in factors:
        product = product @ f
    res_bp = rel_residual(product, direct)
    if res_bp > rtol:
        raise RouteMismatch(f"{kind} factor product", f"order={order}, z={z}", res_bp)
    res_tel = rel_residual(telescoped, direct)
    if res_tel > rtol:
        raise RouteMismatch(f"{kind} parameter product", f"order={order}, z={z}", res_tel)
    return product


def boundary_n2(fam, j):
    """-(b - a)^{-1} v^* R^*(a) H1[j]^{-1} R(a) v, the even boundary correction."""
    seq = fam.seq
    vecs = fam.vectors
    ra_v = vecs.R(j, seq.a) @ vecs.v(j)
    return -(ra_v.conj().T @ solve_pd(fam.hankels.h1(j), ra_v, "H1", j)) / (seq.b - seq.a)


def boundary_b2(fam, j):
    """(b - a) ut2^* R^*(a) K2[j]^{-1} R(a) ut2, the odd boundary correction."""
    seq = fam.seq
    vecs = fam.vectors
    col = vecs.R(j, seq.a) @ vecs.ut2(j)
    return (seq.b - seq.a) * (col.conj().T @ solve_pd(fam.hankels.k2(j), col, "K2", j))


def resolvent_from_aux(source, z, parity):
    """Resolvent reassembled from the auxiliary matrix and boundary factors.

    Even parity:  diag(1/((z-a)(b-z)), 1) hat[(2n-2)] low(N2[n])
                  diag((b-a)(z-a), (b-z)/(b-a)),  n >= 1.
    Odd parity:   diag(1/(b-z), 1) tilde[(2n+1)] up(B2[n]) diag(b-z, 1).
    """
    fam = ensure_family(source)
    seq = fam.seq
    a, b = seq.a, seq.b
    z = complex(z)
    n = _order(seq, parity)
    if parity == "even":
        if n < 1:
            raise InsufficientMoments("even-parity reassembly needs n >= 1")
        if z == a or z == b:
            raise PoleAtZ(f"z = {z} hits a scalar pole of the reassembly")
        core = aux_hat_even(fam, n - 1, z).value
        full = (
            _diag(1.0 / ((z - a) * (b - z)), 1.0, seq.q)
            @ core
            @ _low(boundary_n2(fam, n))
            @ _diag((b - a) * (z - a), (b - z) / (b - a), seq.q)
        )
    else:
        if z == b:
            raise PoleAtZ(f"z = {z} hits a scalar pole of the reassembly")
        core = aux_tilde_odd(fam, n, z).value
        full = (
            _diag(1.0 / (b - z), 1.0, seq.q)
            @ core
            @ _up(boundary_b2(fam, n))
            @ _diag(b - z, 1.0, seq.q)
        )
    return ResolventValue(full=full, q=seq.q, parity=parity, z=z)


def _tail_second_even(fam, n):
    g = np.linalg.solve(eval_poly(fam.Q2(n - 1), fam.seq.a), eval_poly(fam.P2(n - 1), fam.seq.a))
    g = g + np.linalg.solve(eval_poly(fam.T2(n), fam.seq.a), eval_poly(fam.G2(n), fam.seq.a)) / (
        fam.seq.b - fam.seq.a
    )
    return g


def _tail_second_odd(fam, n):
    t = -np.linalg.solve(eval_poly(fam.G1(n), fam.seq.a), eval_poly(fam.T1(n), fam.seq.a))
    t = t - (fam.seq.b - fam.seq.a) * np.linalg.solve(
        eval_poly(fam.P1(n + 1), fam.seq.a), eval_poly(fam.Q1(n + 1), fam.seq.a)
    )
    return t


def _tail_first_even(fam, n):
    a = fam.seq.a
    g = adjoint_eval(fam.Q1(n), a) @ _inv_normalizer(
        adjoint_eval(fam.P1(n), a), f"P1[{n}]^*(a)"
    )
    g = g + adjoint_eval(fam.T1(n), a) @ _inv_normalizer(
        adjoint_eval(fam.G1(n), a), f"G1[{n}]^*(a)"
    ) / (fam.seq.b - fam.seq.a)
    return g


def _tail_first_odd(fam, n):
    a = fam.seq.a
    t = -adjoint_eval(fam.G2(n), a) @ _inv_normalizer(
        adjoint_eval(fam.T2(n), a), f"T2[{n}]^*(a)"
    )
    t = t - (fam.seq.b - fam.seq.a) * adjoint_eval(fam.P2(n), a) @ _inv_normalizer(
        adjoint_eval(fam.Q2(n), a), f"Q2[{n}]^*(a)"
    )
    return t


def resolvent_factorized(source, z, parity, route, params=None):
    """Resolvent as the printed left-to-right product of affine factors.

    route = "second" uses the second-type parameter chains (poles of the
    scalar prefactors at z = a, b for even parity and z = b for odd);
    route = "first" uses the first-type chains (no pole for even parity,
    z = a excluded for odd).  The even second-type product needs n >= 1;
    n = 0 requests fall back to the direct route with a flag set.
    Products are evaluated strictly in the printed order.
    """
    from .dsm import compute_first, compute_second

    fam = ensure_family(source)
    seq = fam.seq
    a, b = seq.a, seq.b
    z = complex(z)
    n = _order(seq, parity)
    q = seq.q

    if route in ("second", "second-dsm"):
        if parity == "even" and n == 0:
            direct = resolvent_direct(fam, z, "even")
            return dataclasses.replace(direct, fallback_direct=True)
        dsm = params if params is not None else compute_second(seq, fam)
        if parity == "even":
            if z == a or z == b:
                raise PoleAtZ(f"second-type even route has a pole at z = {z}")
            factors = [_diag(1.0 / ((b - z) * (z - a)), 1.0, q)]
            for k in range(n):
                factors.append(_up((z - a) * dsm.l(k - 1)))
                factors.append(_low(-dsm.m(k)))
            factors.append(_up((z - a) * dsm.l(n - 1)))
            factors.append(_low(_tail_second_even(fam, n)))
            factors.append(_diag((b - a) * (z - a), (b - z) / (b - a), q))
        else:
            if z == b:
                raise PoleAtZ(f"second-type odd route has a pole at z = {z}")
            factors = [_diag(1.0 / (b - z), 1.0, q)]
            for k in range(n + 1):
                factors.append(_up(dsm.l(k - 1)))
                factors.append(_low(-(z - a) * dsm.m(k)))
            factors.append(_up(_tail_second_odd(fam, n)))
            factors.append(_diag(b - z, 1.0, q))
    elif route in ("first", "first-dsm"):
        first = params if params is not None else compute_first(fam)
        if parity == "even":
            factors = []
            for k in range(n):
                factors.append(_low(-(z - a) * first.M[k]))
                factors.append(_up(first.L[k]))
            factors.append(_low(-(z - a) * first.M[n]))
            factors.append(_up(_tail_first_even(fam, n)))
        else:
            if z == a:
                raise PoleAtZ(f"first-type odd route has a pole at z = {z}")
            factors = [_diag(1.0 / (z - a), 1.0, q)]
            for k in range(n + 1):
                factors.append(_low(-first.M[k]))
                factors.append(_up((z - a) * first.L[k]))
            factors.append(_low(_tail_first_odd(fam, n)))
            factors.append(_diag(z - a, 1.0, q))
    else:
        raise ValueError(f"route must be 'second' or 'first', got {route!r}")

    full = factors[0]
    for f in factors[1:]:
        full = full @ f
    return ResolventValue(full=full, q=q, parity=parity, z=z)


@dataclasses.dataclass(frozen=True, eq=False)
class FactorChain:
    """Ordered anti-triangular factor chain whose product is the resolvent.

    Each builder maps z to one 2q x 2q factor; `value` multiplies them in
    order.  Used to exercise the factor-by-factor composition of the
    linear fractional transformation.
    """

    parity: str
    route: str
    q: int
    builders: tuple

    def factors(self, z):
        return [build(complex(z)) for build in self.builders]

    def value(self, z):
        mats = self.factors(z)
        out = mats[0]
        for f in mats[1:]:
            out = out @ f
        return out


def factor_chain(source, parity, route, params=None):
    """Anti-triangular chain for the resolvent (boundary matrices included).

    route = "second":
      even:  D1 L(-1) M(0) L(0) .. M(n-1) L(n-1) B2 D2
      odd:   D3 L(-1) M(0) L(0) .. L(n-1) M(n) B2 D4
    route = "first":
      even:  M(0) L(0) .. L(n-1) M(n) B1
      odd:   D5 M(0) L(0) .. M(n) L(n) B1 D6
    """
    from .dsm import compute_first, compute_second

    fam = ensure_family(source)
    seq = fam.seq
    a, b = seq.a, seq.b
    q = seq.q
    n = _order(seq, parity)
    builders = []

    if route in ("second", "second-dsm"):
        dsm = params if params is not None else compute_second(seq, fam)
        if parity == "even":
            if n == 0:
                raise InsufficientMoments("second-type even chain needs n >= 1")
            tail = _tail_second_even(fam, n)
            builders.append(lambda z: _anti(1.0 / ((b - z) * (z - a)), np.zeros((q, q)), q))
            builders.append(lambda z: _anti(1.0, (z - a) * dsm.l(-1), q))
            for k in range(n):
                builders.append(lambda z, k=k: _anti(1.0, -dsm.m(k), q))
                if k < n - 1:
                    builders.append(lambda z, k=k: _anti(1.0, (z - a) * dsm.l(k), q))
            builders.append(lambda z: _anti(1.0, (z - a) * dsm.l(n - 1), q))
            builders.append(lambda z: _anti(1.0, tail, q))
            builders.append(lambda z: np.block([
                [np.zeros((q, q)), (b - z) / (b - a) * _eye(q)],
                [(b - a) * (z - a) * _eye(q), np.zeros((q, q))],
            ]))
        else:
            tail = _tail_second_odd(fam, n)
            builders.append(lambda z: _anti(1.0 / (b - z), np.zeros((q, q)), q))
            builders.append(lambda z: _anti(1.0, dsm.l(-1), q))
            for k in range(n + 1):
                builders.append(lambda z, k=k: _anti(1.0, -(z - a) * dsm.m(k), q))
                if k < n:
                    builders.append(lambda z, k=k: _anti(1.0, dsm.l(k), q))
            builders.append(lambda z: _anti(1.0, tail, q))
            builders.append(lambda z: _diag(b - z, 1.0, q))
    elif route in ("first", "first-dsm"):
        first = params if params is not None else compute_first(fam)
        if parity == "even":
            tail = _tail_first_even(fam, n)
            for k in range(n):
                builders.append(lambda z, k=k: _anti(1.0, -(z - a) * first.M[k], q))
                builders.append(lambda z, k=k: _anti(1.0, first.L[k], q))
            builders.append(lambda z: _anti(1.0, -(z - a) * first.M[n], q))
            builders.append(lambda z: _anti(1.0, tail, q))
        else:
            tail = _tail_first_odd(fam, n)
            builders.append(lambda z: _diag(1.0 / (z - a), 1.0, q))
            for k in range(n + 1):
                builders.append(lambda z, k=k: _anti(1.0, -first.M[k], q))
                builders.append(lambda z, k=k: _anti(1.0, (z - a) * first.L[k], q))
            builders.append(lambda z: _anti(1.0, tail, q))
            builders.append(lambda z: np.block([
                [np.zeros((q, q)), _eye(q)],
                [(z - a) * _eye(q), np.zeros((q, q))],
            ]))
    else:
        raise ValueError(f"route must be 'second' or 'first', got {route!r}")

    return FactorChain(parity=parity, route=route, q=q, builders=tuple(builders))
