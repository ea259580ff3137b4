import numpy as np
import pytest
from hypothesis import given, strategies as st

from spherical_aluthge.errors import NotCommuting, ShapeMismatch, SizeGuard
from spherical_aluthge.tuples import (
    PointCd,
    as_point,
    criss_cross_residual,
    elementary_apply,
    explicit_power_tuple,
    log_power_norms,
    power_norm,
    shift,
    tuple_two_norm,
    validate_commuting,
    zero_tuple,
)
from spherical_aluthge.models import polynomial_tuple, random_commuting

from conftest import crandn


def test_validate_rejects_non_commuting_pair():
    A = np.array([[0, 1], [0, 0]])
    with pytest.raises(NotCommuting) as err:
        validate_commuting([A, A.T])
    assert err.value.pair == (0, 1)


def test_validate_rejects_mixed_sizes():
    with pytest.raises(ShapeMismatch):
        validate_commuting([np.eye(2), np.eye(3)])


def test_tuple_matrices_are_read_only():
    T = validate_commuting([np.eye(2)])
    with pytest.raises(ValueError):
        T[0][0, 0] = 5


def test_point_coercions():
    assert as_point(2, 3) == PointCd((2, 2, 2))
    assert as_point([1, 1j], 2).norm2 == pytest.approx(np.sqrt(2))
    with pytest.raises(ShapeMismatch):
        as_point([1, 2], 3)


@given(st.integers(0, 10**6))
def test_two_norm_is_norm_of_sum_of_squares(seed):
    T = random_commuting(seed % 997, 4, 2).tuple
    S = sum(m.conj().T @ m for m in T)
    assert tuple_two_norm(T) == pytest.approx(np.sqrt(np.linalg.norm(S, 2)), rel=1e-12)


def test_two_norm_of_scalar_tuple():
    T = validate_commuting([2 * np.eye(3), 1j * np.eye(3)])
    assert tuple_two_norm(T) == pytest.approx(np.sqrt(5))


def test_power_norm_matches_explicit_products():
    T = random_commuting(11, 4, 2, "jordan-mixed").tuple
    for k in (1, 2, 3, 4):
        explicit = explicit_power_tuple(T, k)
        assert explicit.d == 2**k
        assert power_norm(T, k) == pytest.approx(tuple_two_norm(explicit), rel=1e-12)


def test_explicit_power_order_is_lexicographic(rng):
    A = crandn(rng, 3, 3)
    T = polynomial_tuple(A, [[0, 1], [1, 0, 1]]).tuple
    P2 = explicit_power_tuple(T, 2)
    assert np.allclose(P2[1], T[0] @ T[1])
    assert np.allclose(P2[2], T[1] @ T[0])


def test_explicit_power_guard():
    with pytest.raises(SizeGuard):
        explicit_power_tuple(zero_tuple(2, 4), 7)


def test_log_power_norms_of_nilpotent_become_minus_inf():
    N = np.diag([1.0, 1.0], -1)
    logs = log_power_norms(validate_commuting([N]), 4)
    assert np.isfinite(logs[:2]).all() and np.isneginf(logs[2:]).all()


def test_log_power_norms_do_not_overflow():
    T = validate_commuting([1e3 * np.eye(2)])
    assert log_power_norms(T, 200)[-1] == pytest.approx(200 * np.log(1e3))


def test_elementary_apply_identity_gives_gram(rng):
    T = random_commuting(5, 3, 3).tuple
    assert np.allclose(elementary_apply(T, np.eye(3)), sum(m.conj().T @ m for m in T))


def test_shift_subtracts_point():
    T = validate_commuting([np.diag([1.0, 2.0]), np.diag([3.0, 4.0])])
    S = shift(T, (1, 4))
    assert np.allclose(S[0], np.diag([0, 1])) and np.allclose(S[1], np.diag([-1, 0]))


def test_criss_cross_commuting_tuple_with_itself():
    T = random_commuting(3, 4, 2).tuple
    assert criss_cross_residual(list(T), list(T)) < 1e-12


def test_criss_cross_detects_violation():
    A = [np.array([[0, 1], [0, 0]]), np.array([[1, 0], [0, 0]])]
    B = [np.eye(2), np.eye(2)]
    assert criss_cross_residual(A, B) > 0.1
