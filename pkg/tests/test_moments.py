from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thmm import (
    InsufficientMoments,
    InvalidMomentSequence,
    EmptyMeasure,
    PointOutsideInterval,
    MomentSequence,
    build_hankels,
    classify,
    moments_from_discrete_measure,
    schur_chain,
)
from thmm._linalg import cholesky_pd, is_pd
from thmm.moments import StructuralVectors, shifted_moments

from conftest import lebesgue, random_measure, rel


def test_hankel_members_match_entry_definitions(rng):
    q, n = 2, 2
    from conftest import random_sequence

    seq, _ = random_sequence(rng, q, n)
    hank = build_hankels(seq)
    a, b = seq.a, seq.b
    shat = shifted_moments(seq)
    for j in range(len(hank.H1)):
        for l in range(j + 1):
            for k in range(j + 1):
                blk = hank.H1[j][l * q:(l + 1) * q, k * q:(k + 1) * q]
                assert np.array_equal(blk, seq.s[l + k])
    for j in range(len(hank.K1)):
        for l in range(j + 1):
            for k in range(j + 1):
                blk = hank.K1[j][l * q:(l + 1) * q, k * q:(k + 1) * q]
                assert np.allclose(blk, b * seq.s[l + k] - seq.s[l + k + 1], rtol=0, atol=0)
                blk2 = hank.K2[j][l * q:(l + 1) * q, k * q:(k + 1) * q]
                assert np.allclose(blk2, -a * seq.s[l + k] + seq.s[l + k + 1], rtol=0, atol=0)
    for j in range(len(hank.H2)):
        for l in range(j + 1):
            for k in range(j + 1):
                blk = hank.H2[j][l * q:(l + 1) * q, k * q:(k + 1) * q]
                assert np.array_equal(blk, shat[l + k])


def test_lebesgue_k11_exact():
    hank = build_hankels(lebesgue(3))
    expected = np.array([[Fraction(1, 2), Fraction(1, 6)], [Fraction(1, 6), Fraction(1, 12)]],
                        dtype=float)
    assert rel(hank.k1(1), expected) < 1e-15


def test_lebesgue_h20_is_shat0():
    hank = build_hankels(lebesgue(2))
    assert abs(hank.h2(0)[0, 0] - 1.0 / 6.0) < 1e-15


def test_m0_has_only_h1():
    seq = MomentSequence(0.0, 1.0, (np.array([[1.0]]),))
    hank = build_hankels(seq)
    assert len(hank.H1) == 1 and hank.h1(0)[0, 0] == 1.0
    assert len(hank.K1) == 0 and len(hank.H2) == 0
    with pytest.raises(InsufficientMoments):
        hank.k1(0)
    with pytest.raises(InsufficientMoments):
        hank.h2(0)


def test_hermitian_validation_and_interval():
    with pytest.raises(InvalidMomentSequence):
        MomentSequence(0.0, 1.0, (np.array([[0.0, 1.0], [0.0, 0.0]]),))
    with pytest.raises(InvalidMomentSequence):
        MomentSequence(1.0, 0.0, (np.array([[1.0]]),))
    with pytest.raises(InvalidMomentSequence):
        MomentSequence(0.0, 1.0, ())


def test_schur_base_cases_and_k11():
    seq = lebesgue(3)
    sch = schur_chain(build_hankels(seq))
    assert abs(sch.hhat1[0][0, 0] - 1.0) < 1e-15
    assert abs(sch.khat1[0][0, 0] - 0.5) < 1e-15
    assert abs(sch.khat2[0][0, 0] - 0.5) < 1e-15
    # 1/12 - (1/6)^2 * 2 = 1/36
    assert abs(sch.khat1[1][0, 0] - 1.0 / 36.0) < 1e-15


def test_schur_hhat2_base_is_shat0():
    sch = schur_chain(build_hankels(lebesgue(2)))
    assert abs(sch.hhat2[0][0, 0] - 1.0 / 6.0) < 1e-15


def test_schur_determinant_telescoping(rng):
    from conftest import random_sequence

    for q, n in ((1, 3), (2, 2), (3, 2)):
        seq, _ = random_sequence(rng, q, n)
        hank = build_hankels(seq)
        sch = schur_chain(hank)
        for j in range(len(hank.K1)):
            det_parent = np.linalg.det(hank.K1[j])
            det_prod = np.prod([np.linalg.det(x) for x in sch.khat1[:j + 1]])
            assert abs(det_parent - det_prod) <= 1e-9 * abs(det_parent)
        for j in range(len(hank.H1)):
            det_parent = np.linalg.det(hank.H1[j])
            det_prod = np.prod([np.linalg.det(x) for x in sch.hhat1[:j + 1]])
            assert abs(det_parent - det_prod) <= 1e-9 * abs(det_parent)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_block_pd_splitting_both_directions(seed):
    # A = [[A11, A12], [A12^*, A22]] > 0  iff  A11 > 0 and the Schur
    # complement of A11 is positive definite.
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 4))
    g = rng.normal(size=(2 * k, 2 * k)) + 1j * rng.normal(size=(2 * k, 2 * k))
    shift = rng.uniform(-0.5, 1.0)
    a = g @ g.conj().T + shift * np.eye(2 * k)
    a11, a12, a22 = a[:k, :k], a[:k, k:], a[k:, k:]
    whole_pd = is_pd(a)
    if not is_pd(a11):
        assert not whole_pd
        return
    complement = a22 - a12.conj().T @ np.linalg.solve(a11, a12)
    assert whole_pd == is_pd(complement)


def test_classify_lebesgue_positive_definite():
    assert classify(lebesgue(5)).kind == "PositiveDefinite"
    assert classify(lebesgue(4)).kind == "PositiveDefinite"


def test_classify_m0_scalar():
    assert classify(MomentSequence(0.0, 1.0, (np.array([[1.0]]),))).kind == "PositiveDefinite"


def test_classify_point_mass_degenerate():
    seq = MomentSequence(0.0, 1.0, tuple(np.array([[0.5 ** j]]) for j in range(3)))
    cls = classify(seq)
    assert cls.kind == "Degenerate"
    assert cls.witness.family == "H1" and cls.witness.index == 1
    assert abs(cls.witness.min_eigenvalue) < 1e-12


def test_classify_indefinite_witness():
    seq = MomentSequence(0.0, 1.0, (np.array([[1.0]]), np.array([[3.0]]), np.array([[0.0]])))
    cls = classify(seq)
    assert cls.kind == "Indefinite"
    assert cls.witness.min_eigenvalue < 0


def test_discrete_measure_moments_two_atoms():
    seq = moments_from_discrete_measure(
        [0.0, 1.0], [np.array([[0.5]]), np.array([[0.5]])], 2, 0.0, 1.0
    )
    assert [x[0, 0].real for x in seq.s] == [1.0, 0.5, 0.5]


def test_discrete_measure_single_atom():
    w = np.array([[2.0, 1j], [-1j, 3.0]])
    seq = moments_from_discrete_measure([0.5], [w], 3, 0.0, 1.0)
    for j in range(4):
        assert rel(seq.s[j], 0.5 ** j * w) < 1e-15


def test_discrete_measure_identity_atoms_positive_definite():
    seq = moments_from_discrete_measure(
        [0.25, 0.75], [np.eye(2), np.eye(2)], 3, 0.0, 1.0
    )
    assert classify(seq).kind == "PositiveDefinite"


def test_measure_rank_deficiency_vs_atom_count(rng):
    q = 2
    for atoms in (1, 2, 3):
        meas = random_measure(rng, q, atoms)
        seq = moments_from_discrete_measure(meas.points, meas.weights, 6, 0.0, 1.0)
        hank = build_hankels(seq)
        for j in range(len(hank.H1)):
            if atoms >= j + 1:
                assert cholesky_pd(hank.H1[j]) is not None
            else:
                rank = np.linalg.matrix_rank(hank.H1[j], tol=1e-10)
                assert rank <= atoms * q
                assert cholesky_pd(hank.H1[j]) is None


def test_measure_errors():
    with pytest.raises(EmptyMeasure):
        moments_from_discrete_measure([], [], 2, 0.0, 1.0)
    with pytest.raises(PointOutsideInterval):
        moments_from_discrete_measure([1.5], [np.eye(1)], 2, 0.0, 1.0)


def test_structural_vectors_shift_resolvent_identity(rng):
    from conftest import random_sequence

    seq, _ = random_sequence(rng, 2, 2)
    vecs = StructuralVectors(seq)
    for j in range(3):
        for z in (0.3, -1.2 + 0.7j):
            r = vecs.R(j, z)
            t = vecs.shift(j)
            eye = np.eye((j + 1) * seq.q)
            assert rel(r @ (eye - z * t), eye) < 1e-14
            rv = r @ vecs.v(j)
            for k in range(j + 1):
                blk = rv[k * seq.q:(k + 1) * seq.q]
                assert rel(blk, (z ** k) * np.eye(seq.q)) < 1e-14


def test_structural_vector_shapes(rng):
    from conftest import random_sequence

    seq, _ = random_sequence(rng, 2, 2)
    vecs = StructuralVectors(seq)
    q = seq.q
    for j in range(1, 3):
        assert vecs.u2(j).shape == ((j + 1) * q, q)
        assert vecs.ut1(j).shape == ((j + 1) * q, q)
        assert vecs.Y1(j).shape == (j * q, q)
        assert vecs.Yt1(j).shape == (j * q, q)
    assert np.array_equal(vecs.ut2(0), -seq.s[0])
    u21 = vecs.u2(1)
    assert np.allclose(u21[q:], -shifted_moments(seq)[0])
