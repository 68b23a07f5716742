import numpy as np
import pytest
import sympy

from thmm import (
    InconsistentLengths,
    NonPositiveParameter,
    WrongMatrixSize,
    build_family,
    classify,
    compute_first,
    compute_second,
    product_identities,
    recover_moments,
    scalar_determinant_params,
    stieltjes_limit_check,
)
from thmm._linalg import min_eigenvalue

from conftest import lebesgue, random_sequence, rel


@pytest.fixture(scope="module")
def leb3():
    seq = lebesgue(3)
    fam = build_family(seq)
    return seq, fam, compute_second(seq, fam)


def test_second_desk_values(leb3):
    _, _, dsm = leb3
    assert abs(dsm.m(0)[0, 0] - 2.0) < 1e-12
    assert abs(dsm.m(1)[0, 0] - 4.0) < 1e-12
    assert abs(dsm.l(0)[0, 0] - 1.5) < 1e-12
    assert abs(dsm.r(1)[0, 0] - 2.5) < 1e-12
    assert abs(dsm.l(-1)[0, 0] - 1.0) < 1e-15
    # that_1 is the top-left entry of K1[1]^{-1}
    assert abs(dsm.t(1)[0, 0] - 6.0) < 1e-11


def test_mhat0_is_inverse_of_k10(rng):
    seq, _ = random_sequence(rng, 2, 2)
    dsm = compute_second(seq)
    k10 = seq.b * seq.s[0] - seq.s[1]
    assert rel(dsm.m(0), np.linalg.inv(k10)) < 1e-12


def test_telescoping_exact(rng):
    for q, n in ((1, 3), (2, 2), (3, 2)):
        seq, _ = random_sequence(rng, q, n)
        dsm = compute_second(seq)
        for j in range(1, len(dsm.mhat)):
            assert rel(dsm.m(j), dsm.t(j) - dsm.t(j - 1)) < 1e-12
        for j in range(len(dsm.lhat_from_zero)):
            assert rel(dsm.l(j), dsm.r(j + 1) - dsm.r(j)) < 1e-12


def test_positivity(rng):
    for q, n in ((2, 2), (3, 2)):
        seq, _ = random_sequence(rng, q, n)
        dsm = compute_second(seq)
        first = compute_first(seq)
        for x in list(dsm.mhat) + list(dsm.lhat) + list(first.M) + list(first.L):
            assert min_eigenvalue(x) > 0.0


def test_exact_rational_oracle_q1():
    # Independent exact-arithmetic evaluation of the defining quadratic
    # forms for q = 1 Lebesgue data, via sympy rationals.
    m = 5
    s = [sympy.Rational(1, j + 1) for j in range(m + 1)]
    b = sympy.Integer(1)

    def k1(j):
        return sympy.Matrix(j + 1, j + 1, lambda l, k: b * s[l + k] - s[l + k + 1])

    def h2(j):
        return sympy.Matrix(j + 1, j + 1, lambda l, k: s[l + k + 1] - s[l + k + 2])

    that = [k1(j).inv()[0, 0] for j in range(3)]
    mhat = [that[0]] + [that[j] - that[j - 1] for j in (1, 2)]
    # u2_j + a v s0 at a = 0 stacks (-(a+b)s0 + s1; -shat_0; ...)
    def qf(j):
        col = sympy.Matrix([-s[0] + s[1]] + [-(s[i + 1] - s[i + 2]) for i in range(j)])
        return (col.T * h2(j).inv() * col)[0, 0]

    lhat = [qf(0), qf(1) - qf(0)]
    assert mhat == [2, 4, 6]
    assert lhat == [sympy.Rational(3, 2), sympy.Rational(5, 6)]

    seq = lebesgue(m)
    dsm = compute_second(seq)
    for j, exact in enumerate(mhat):
        assert abs(dsm.m(j)[0, 0] - float(exact)) < 1e-10
    for j, exact in enumerate(lhat):
        assert abs(dsm.l(j)[0, 0] - float(exact)) < 1e-10


def test_route_agreement_ensemble(rng):
    for q, n in ((1, 3), (2, 3), (3, 2)):
        seq, _ = random_sequence(rng, q, n)
        compute_second(seq)  # raises RouteMismatch above 1e-10


def test_first_desk_values():
    first = compute_first(lebesgue(3))
    assert abs(first.M[0][0, 0] - 1.0) < 1e-14
    assert abs(first.M[1][0, 0] - 3.0) < 1e-12
    assert abs(first.L[0][0, 0] - 2.0) < 1e-12


def test_first_m0_is_s0_inverse(rng):
    seq, _ = random_sequence(rng, 3, 1)
    first = compute_first(seq)
    assert rel(first.M[0], np.linalg.inv(seq.s[0])) < 1e-12


def test_product_identities_desk(leb3):
    seq, fam, dsm = leb3
    report = product_identities(fam, dsm)
    # g1_alternating_product at j=1: G1[1](0) = -mhat_0^{-1} lhat_0^{-1} = -1/3
    assert report.residual_for("g1_alternating_product") < 1e-12
    assert report.residual_for("q2_alternating_product") < 1e-12
    assert report.residual_for("khat1_from_params") < 1e-12
    assert report.residual_for("hhat2_from_params") < 1e-12
    assert report.residual_for("mhat_from_schur") < 1e-12
    assert report.residual_for("lhat_from_schur") < 1e-12
    assert report.residual_for("p2_sum_through_current") < 1e-12
    assert any("p2_sum_through_current" in note for note in report.notes)


def test_product_identities_values(leb3):
    seq, fam, dsm = leb3
    from thmm import eval_poly

    g11 = eval_poly(fam.G1(1), 0.0)[0, 0]
    assert abs(g11 - (-1.0 / 3.0)) < 1e-13
    q21 = eval_poly(fam.Q2(1), 0.0)[0, 0]
    prod = -1.0 / (dsm.m(0)[0, 0] * dsm.l(0)[0, 0] * dsm.m(1)[0, 0])
    assert abs(q21 - prod) < 1e-13
    assert abs(q21 - (-1.0 / 12.0)) < 1e-13
    # khat1[0] = mhat_0^{-1}
    assert abs(fam.schur.khat1[0][0, 0] - 1.0 / dsm.m(0)[0, 0]) < 1e-13


def test_product_identities_ensemble(rng):
    for q, n in ((2, 2), (3, 2)):
        seq, _ = random_sequence(rng, q, n)
        fam = build_family(seq)
        dsm = compute_second(seq, fam)
        report = product_identities(fam, dsm)
        gate = [e.residual for e in report.entries if e.name != "p2_sum_through_previous"]
        assert max(gate) < 1e-9


def test_recover_minimal():
    s1_expected = 1.0 * 1.0 - 0.5  # b s0 - mhat_0^{-1}
    seq = recover_moments(np.array([[1.0]]), [np.array([[2.0]])], [], 0.0, 1.0)
    assert seq.m == 1
    assert abs(seq.s[1][0, 0] - s1_expected) < 1e-15


def test_recover_lebesgue_round_trip(leb3):
    seq, _, dsm = leb3
    rec = recover_moments(seq.s[0], list(dsm.mhat), list(dsm.lhat_from_zero), 0.0, 1.0)
    assert rec.m == 3
    for x, y in zip(rec.s, seq.s):
        assert rel(x, y) < 1e-12


def test_recover_round_trip_q2(rng):
    seq, _ = random_sequence(rng, 2, 2)
    dsm = compute_second(seq)
    rec = recover_moments(seq.s[0], list(dsm.mhat), list(dsm.lhat_from_zero), seq.a, seq.b)
    assert rec.m == 5
    for x, y in zip(rec.s, seq.s):
        assert rel(x, y) < 1e-9
    assert classify(rec).kind == "PositiveDefinite"


def test_recover_errors():
    with pytest.raises(NonPositiveParameter):
        recover_moments(np.array([[1.0]]), [np.array([[-2.0]])], [], 0.0, 1.0)
    with pytest.raises(NonPositiveParameter):
        recover_moments(np.array([[-1.0]]), [np.array([[2.0]])], [], 0.0, 1.0)
    with pytest.raises(InconsistentLengths):
        recover_moments(
            np.array([[1.0]]), [np.array([[2.0]])],
            [np.array([[1.0]]), np.array([[1.0]])], 0.0, 1.0,
        )


def test_limit_check_scalar_algebra():
    # j = 0: b mhat_0 = b / (b s0 - s1) converges to 1/s0 = M_0
    seq = lebesgue(1)
    rows = stieltjes_limit_check(seq, [1e3, 1e4])
    errs = {r.b: r.m_error for r in rows if r.index == 0}
    assert 8.0 <= errs[1e3] / errs[1e4] <= 12.0


def test_limit_check_ratio_and_q2(rng):
    seq, _ = random_sequence(rng, 2, 2)
    rows = stieltjes_limit_check(seq, [1e3, 1e4])
    first = compute_first(seq)
    for j in range(2):
        m3 = next(r.m_error for r in rows if r.b == 1e3 and r.index == j)
        m4 = next(r.m_error for r in rows if r.b == 1e4 and r.index == j)
        assert 8.0 <= m3 / m4 <= 12.0
        assert m4 / np.linalg.norm(first.M[j]) <= 1e-2
        l4 = next(r.l_error for r in rows if r.b == 1e4 and r.index == j)
        if l4 is not None:
            assert l4 / np.linalg.norm(first.L[j]) <= 1e-2


def test_limit_check_requires_a_zero():
    seq = lebesgue(3, a=0.1, b=1.0)
    with pytest.raises(Exception):
        stieltjes_limit_check(seq, [1e3])


def test_scalar_determinant_desk():
    mt, lt = scalar_determinant_params(lebesgue(3))
    assert abs(mt[0] - 2.0) < 1e-12
    assert abs(mt[1] - 4.0) < 1e-10
    assert abs(lt[0] - 1.5) < 1e-12


def test_scalar_determinant_d3_value():
    # D3 at x=0, j=1 for Lebesgue data is [[1/2, 1/6], [1, 0]], det -1/6,
    # so mtilde_1 = (1/36) / ((1/72)(1/2)) = 4.
    d3 = np.array([[0.5, 1.0 / 6.0], [1.0, 0.0]])
    det = np.linalg.det(d3)
    assert abs(det + 1.0 / 6.0) < 1e-15
    k11 = np.array([[0.5, 1.0 / 6.0], [1.0 / 6.0, 1.0 / 12.0]])
    assert abs(det ** 2 / (np.linalg.det(k11) * 0.5) - 4.0) < 1e-12


def test_scalar_determinant_matches_matrix_route(rng):
    seq, _ = random_sequence(rng, 1, 3)
    mt, lt = scalar_determinant_params(seq)
    dsm = compute_second(seq)
    for j, v in enumerate(mt):
        assert abs(v - dsm.m(j)[0, 0].real) <= 1e-8 * max(1.0, abs(v))
    for j, v in enumerate(lt):
        assert abs(v - dsm.l(j)[0, 0].real) <= 1e-8 * max(1.0, abs(v))


def test_scalar_determinant_wrong_size(rng):
    seq, _ = random_sequence(rng, 2, 1)
    with pytest.raises(WrongMatrixSize):
        scalar_determinant_params(seq)
