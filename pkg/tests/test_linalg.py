import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thmm import SingularPivot
from thmm._linalg import cholesky_pd, inv_pd, is_pd, rel_residual, right_divide, solve_pd


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_cholesky_matches_numpy_on_pd(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 6))
    g = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    a = g @ g.conj().T + 0.2 * np.eye(k)
    ours = cholesky_pd(a)
    assert ours is not None
    assert rel_residual(ours, np.linalg.cholesky(a)) < 1e-10
    assert rel_residual(ours @ ours.conj().T, a) < 1e-12


def test_cholesky_rejects_indefinite_and_singular():
    assert cholesky_pd(np.array([[1.0, 2.0], [2.0, 1.0]])) is None
    assert cholesky_pd(np.array([[1.0, 1.0], [1.0, 1.0]])) is None
    assert not is_pd(np.zeros((2, 2)))


def test_solve_pd_and_inverse():
    a = np.array([[4.0, 1.0j], [-1.0j, 3.0]])
    rhs = np.array([[1.0], [2.0]], dtype=complex)
    x = solve_pd(a, rhs)
    assert rel_residual(a @ x, rhs) < 1e-13
    assert rel_residual(a @ inv_pd(a), np.eye(2)) < 1e-13


def test_solve_pd_raises_named_pivot():
    with pytest.raises(SingularPivot) as err:
        solve_pd(np.array([[0.0]]), np.eye(1), "K1", 3)
    assert err.value.family == "K1" and err.value.index == 3


def test_right_divide():
    rng = np.random.default_rng(5)
    num = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    den = rng.normal(size=(2, 2)) + np.eye(2) * 3
    assert rel_residual(right_divide(num, den), num @ np.linalg.inv(den)) < 1e-13
