"""Linear fractional transforms, extremal solutions, matrix continued fractions.

A 2q x 2q matrix acts on q x q matrices through the right-quotient Moebius
transform (A X + B Y)(C X + D Y)^{-1}.  The constant pairs (I, 0) and
(0, I) applied to the resolvent give the Krein and Friedrichs extremal
solutions; the same values arise as block quotients of polynomial values
and as finite matrix continued fractions driven by the parameter chains:

  friedrichs / even   s0/(b-z) + 1/(-(z-a)(b-z) mhat_0 + 1/(lhat_0/(b-z) + ..
                      .. + 1/(lhat_{n-1}/(b-z))))
  krein / odd         the same chain extended by a final -(z-a)(b-z) mhat_n
  krein / even        1/(-(z-a) M_0 + 1/(L_0 + .. + 1/(-(z-a) M_n)))
  friedrichs / odd    the same first-type chain extended by a final L_n

where 1/X means the matrix inverse and levels are summed in the printed
order.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from ._linalg import rel_residual
from .errors import (
    PointOnInterval,
    SingularDenominator,
    SingularLevel,
)
from .polynomials import adjoint_eval, ensure_family
from .resolvent import ResolventValue, _order, resolvent_direct

COND_LIMIT = 1e12


def _as_square(x, q=None):
    m = np.asarray(x, dtype=complex)
    if q is not None and m.shape != (q, q):
        raise ValueError(f"expected a {q}x{q} matrix, got shape {m.shape}")
    return m


def mobius_apply(transform, x, y, cond_limit=COND_LIMIT):
    """(A X + B Y)(C X + D Y)^{-1} for the 2q x 2q block transform."""
    full = transform.full if isinstance(transform, ResolventValue) else np.asarray(
        transform, dtype=complex
    )
    q = full.shape[0] // 2
    x = _as_square(x, q)
    y = _as_square(y, q)
    a, b = full[:q, :q], full[:q, q:]
    c, d = full[q:, :q], full[q:, q:]
    num = a @ x + b @ y
    den = c @ x + d @ y
    cond = np.linalg.cond(den)
    if not np.isfinite(cond) or cond > cond_limit:
        raise SingularDenominator(cond)
    return np.linalg.solve(den.T, num.T).T


def mobius_chain_apply(factors, x, y, cond_limit=COND_LIMIT):
    """Apply the transform factor by factor, rightmost first.

    Column pairs propagate with per-step rescaling; the value is read off
    by one final right quotient.  Matches applying the full product at
    once whenever the final denominator is invertible.
    """
    q = np.asarray(x).shape[0]
    col_x = _as_square(x, q)
    col_y = _as_square(y, q)
    for f in reversed(list(factors)):
        f = np.asarray(f, dtype=complex)
        new_x = f[:q, :q] @ col_x + f[:q, q:] @ col_y
        new_y = f[q:, :q] @ col_x + f[q:, q:] @ col_y
        scale = max(np.linalg.norm(new_x), np.linalg.norm(new_y))
        if scale == 0.0:
            raise SingularDenominator(np.inf)
        col_x, col_y = new_x / scale, new_y / scale
    cond = np.linalg.cond(col_y)
    if not np.isfinite(cond) or cond > cond_limit:
        raise SingularDenominator(cond)
    return np.linalg.solve(col_y.T, col_x.T).T


def solution_transform(resolvent, p0, q0):
    """Solution value at a constant column pair: (alpha p0 + beta q0)(gamma p0 + delta q0)^{-1}."""
    return mobius_apply(resolvent, p0, q0)


@dataclasses.dataclass(frozen=True, eq=False)
class ContinuedFractionChain:
    """head + inv(levels[0] + inv(levels[1] + .. + inv(levels[-1]) ..)).

    Tags name the parameter each level consumes.  Depth equals the number
    of parameters; evaluation requires every intermediate sum to be
    invertible.
    """

    head: np.ndarray | None
    levels: tuple
    tags: tuple

    @property
    def depth(self):
        return len(self.levels)


def evaluate_chain(chain, cond_limit=COND_LIMIT):
    """Bottom-up evaluation of a finite matrix continued fraction."""
    if chain.depth == 0:
        if chain.head is None:
            raise SingularLevel(0)
        return np.array(chain.head)
    q = chain.levels[0].shape[0]
    w = np.zeros((q, q), dtype=complex)
    for depth in range(chain.depth, 0, -1):
        term = chain.levels[depth - 1] + w
        cond = np.linalg.cond(term)
        if not np.isfinite(cond) or cond > cond_limit:
            raise SingularLevel(depth)
        w = np.linalg.inv(term)
    return w if chain.head is None else chain.head + w


def extremal_chain(source, z, parity, which, params=None):
    """Build the continued-fraction chain for one extremal solution.

    friedrichs/even and krein/odd consume the second-type parameters,
    krein/even and friedrichs/odd the first-type ones.
    """
    from .dsm import DsmFirst, DsmSecond, compute_first, compute_second

    z = complex(z)
    if which not in ("krein", "friedrichs"):
        raise ValueError(f"which must be 'krein' or 'friedrichs', got {which!r}")
    second_kind = (which == "friedrichs") == (parity == "even")

    if isinstance(source, (DsmSecond, DsmFirst)):
        params = source
        source = None
    if params is None:
        fam = ensure_family(source)
        params = compute_second(fam.seq, fam) if second_kind else compute_first(fam)
        n = _order(fam.seq, parity)
    else:
        fam = None
        if second_kind:
            n_l = len(params.lhat_from_zero)
            if parity == "even":
                n = min(len(params.mhat), n_l)
            else:
                n = min(len(params.mhat) - 1, n_l)
        else:
            if parity == "even":
                n = min(len(params.M) - 1, len(params.L))
            else:
                n = min(len(params.M), len(params.L)) - 1

    levels = []
    tags = []
    if second_kind:
        a, b = params.a, params.b
        head = params.s0 / (b - z)
        count = n if parity == "even" else n + 1
        for k in range(count):
            levels.append(-(z - a) * (b - z) * params.m(k))
            tags.append(f"mhat[{k}]")
            if parity == "odd" and k == count - 1:
                break
            levels.append(params.l(k) / (b - z))
            tags.append(f"lhat[{k}]")
        return ContinuedFractionChain(head=head, levels=tuple(levels), tags=tuple(tags))

    a = params.a
    head = None
    for k in range(n + 1):
        levels.append(-(z - a) * params.M[k])
        tags.append(f"M[{k}]")
        if parity == "even" and k == n:
            break
        levels.append(np.array(params.L[k], dtype=complex))
        tags.append(f"L[{k}]")
    return ContinuedFractionChain(head=head, levels=tuple(levels), tags=tuple(tags))


def extremal_cf(source, z, parity, which, params=None, cond_limit=COND_LIMIT):
    """Extremal solution value via its finite matrix continued fraction."""
    chain = extremal_chain(source, z, parity, which, params=params)
    return evaluate_chain(chain, cond_limit=cond_limit)


@dataclasses.dataclass(frozen=True, eq=False)
class ExtremalSet:
    """Krein and Friedrichs extremal values at one point."""

    sK: np.ndarray
    sF: np.ndarray
    parity: str
    z: complex
    cross_residual: float


def _right_quotient(num, den):
    cond = np.linalg.cond(den)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularDenominator(cond)
    return np.linalg.solve(den.T, num.T).T


def extremal_quotient(source, z, parity):
    """Extremal solutions as block quotients of polynomial values.

    Even parity: sK = T2[n]^*(zbar) / ((z-a) G2[n]^*(zbar)),
                 sF = T1[n]^*(zbar) / ((b-z) G1[n]^*(zbar)).
    Odd parity:  sK = -Q2[n]^*(zbar) / ((z-a)(b-z) P2[n]^*(zbar)),
                 sF = -Q1[n+1]^*(zbar) / P1[n+1]^*(zbar).
    Cross-checked against the Moebius route through the resolvent at the
    constant pairs (I, 0) and (0, I); the largest deviation is reported.
    """
    fam = ensure_family(source)
    seq = fam.seq
    a, b = seq.a, seq.b
    z = complex(z)
    if z.imag == 0.0 and a <= z.real <= b:
        raise PointOnInterval(f"z = {z} lies on [{a}, {b}]")
    n = _order(seq, parity)
    if parity == "even":
        sk = _right_quotient(
            adjoint_eval(fam.T2(n), z), (z - a) * adjoint_eval(fam.G2(n), z)
        )
        sf = _right_quotient(
            adjoint_eval(fam.T1(n), z), (b - z) * adjoint_eval(fam.G1(n), z)
        )
    else:
        sk = -_right_quotient(
            adjoint_eval(fam.Q2(n), z), (z - a) * (b - z) * adjoint_eval(fam.P2(n), z)
        )
        sf = -_right_quotient(
            adjoint_eval(fam.Q1(n + 1), z), adjoint_eval(fam.P1(n + 1), z)
        )
    u = resolvent_direct(fam, z, parity)
    eye = np.eye(seq.q, dtype=complex)
    zero = np.zeros((seq.q, seq.q), dtype=complex)
    cross = max(
        rel_residual(sk, mobius_apply(u, eye, zero)),
        rel_residual(sf, mobius_apply(u, zero, eye)),
    )
    return ExtremalSet(sK=sk, sF=sf, parity=parity, z=z, cross_residual=cross)
