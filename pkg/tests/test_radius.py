import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spherical_aluthge.errors import SizeGuard
from spherical_aluthge.models import ex41_matrix, polynomial_tuple, random_commuting
from spherical_aluthge.radius import (
    _tail_limit,
    elementary_matrix,
    ladder_diagnostics,
    radius_aluthge,
    radius_elementary,
    radius_joint_eig,
    radius_power,
    radius_report,
)
from spherical_aluthge.tuples import explicit_power_tuple, validate_commuting, zero_tuple

seeds = st.integers(0, 10**5)
styles = st.sampled_from(["diagonalizable", "jordan-mixed", "shift-based"])


def test_zero_tuple_has_zero_radius():
    Z = zero_tuple(3, 2)
    assert radius_joint_eig(Z) == 0
    assert radius_power(Z).value == 0
    assert radius_elementary(Z) == 0


def test_ex41_all_routes():
    T = ex41_matrix(2).tuple
    r = math.sqrt(3)
    assert radius_joint_eig(T) == pytest.approx(r, abs=1e-12)
    assert abs(radius_power(T, k_max=2).value - r) <= 1e-12
    assert radius_aluthge(T, 0.5).value == pytest.approx(r, abs=1e-6)
    assert radius_elementary(T) == pytest.approx(r, abs=1e-12)


def test_ex41_duggal_limit_is_the_norm_and_warns():
    res = radius_aluthge(ex41_matrix(2).tuple, 1.0)
    assert res.value == pytest.approx(3.0, abs=1e-12)
    assert any("period-2" in w for w in res.warnings)


def test_polynomial_pair_radius():
    # joint eigenvalues (1, 1) and (2, 4): r = sqrt(20)
    T = polynomial_tuple(np.diag([1.0, 2.0]), [[0, 1], [0, 0, 1]]).tuple
    assert radius_joint_eig(T) == pytest.approx(math.sqrt(20), abs=1e-12)
    assert radius_power(T).value == pytest.approx(math.sqrt(20), abs=1e-9)
    assert radius_elementary(T) == pytest.approx(math.sqrt(20), abs=1e-10)


def test_scalar_and_nilpotent():
    T = validate_commuting([2 * np.eye(3)])
    assert radius_power(T).value == pytest.approx(2.0, abs=1e-12)
    assert radius_aluthge(T, 0.5).value == pytest.approx(2.0, abs=1e-12)
    N = validate_commuting([np.diag([1.0, 1.0, 1.0], -1)])
    assert radius_joint_eig(N) == 0
    res = radius_power(N)
    assert res.value == 0 and res.k_reached == 4


def test_elementary_matrix_acts_on_vec():
    rng = np.random.default_rng(1)
    A = rng.normal(size=(3, 3))
    T = validate_commuting([A, A @ A])
    X = rng.normal(size=(3, 3))
    want = A.T @ X @ A + (A @ A).T @ X @ (A @ A)
    got = (elementary_matrix(T) @ X.reshape(-1, order="F")).reshape(3, 3, order="F")
    assert np.allclose(got, want)


def test_elementary_guard():
    with pytest.raises(SizeGuard):
        radius_elementary(zero_tuple(65, 1))


@given(seeds, styles, st.integers(1, 3))
def test_estimators_agree_with_ground_truth(seed, style, d):
    sample = random_commuting(seed, 4, d, style)
    r = sample.radius
    assert radius_joint_eig(sample.tuple) == pytest.approx(r, abs=1e-6)
    assert radius_elementary(sample.tuple) == pytest.approx(r, abs=1e-6)
    power = radius_power(sample.tuple)
    assert power.value == pytest.approx(r, abs=1e-3)
    assert power.root >= r - 1e-10


@settings(max_examples=15)
@given(seeds, styles, st.integers(1, 3))
def test_radius_of_powers(seed, style, k):
    T = random_commuting(seed, 3, 2, style).tuple
    r = radius_joint_eig(T)
    assert radius_joint_eig(explicit_power_tuple(T, k)) == pytest.approx(r**k, rel=1e-6)


def test_zero_radius_summand_does_not_change_radius():
    T = random_commuting(5, 3, 2).tuple
    r = radius_joint_eig(T)
    c = 0.1 * r
    S = validate_commuting(
        [np.block([[m, np.zeros((3, 2))], [np.zeros((2, 3)), (c if i == 0 else 0) * np.eye(2)]]) for i, m in enumerate(T)]
    )
    assert radius_joint_eig(S) == pytest.approx(r, abs=1e-10)
    assert radius_elementary(S) == pytest.approx(r, abs=1e-10)


def test_radius_report_collects_budgets():
    rep = radius_report(ex41_matrix(2).tuple)
    assert set(rep.estimates) == {"joint_eig", "power", "aluthge", "elementary"}
    assert rep.spread < 1e-6
    assert rep.two_norm == pytest.approx(3.0)
    assert rep.metadata["power"]["k_max"] == 40


def test_tail_limit():
    q = 0.5
    seq = [1.0 + q**j for j in range(10)]
    assert _tail_limit(seq) == pytest.approx(1.0, abs=1e-12)
    assert _tail_limit([3.0, 3.0, 3.0]) == 3.0


@settings(max_examples=10)
@given(seeds, styles, st.sampled_from([0.25, 0.5, 0.75]))
def test_ladder_properties(seed, style, t):
    T = random_commuting(seed, 4, 2, style).tuple
    r = radius_joint_eig(T)
    table = ladder_diagnostics(T, t, N=40, K=3)
    A = table.norms
    assert A.shape == (41, 3)
    # cells never drop below r^k and columns do not increase
    ks = np.arange(1, 4)
    assert np.all(A ** (1.0 / ks) >= r - 1e-8)
    assert np.all(np.diff(A, axis=0) <= 1e-10 * np.maximum(1, A[:-1]))
    assert np.all(A[:, 1] <= A[:, 0] ** 2 + 1e-10)


def test_ladder_limits_are_powers():
    T = random_commuting(11, 5, 2).tuple
    table = ladder_diagnostics(T, 0.5, N=500, K=3, stall_tol=1e-12)
    L = table.limits
    assert np.allclose(L, L[0] ** np.arange(1, 4), rtol=1e-3)


def test_ladder_guard():
    with pytest.raises(SizeGuard):
        ladder_diagnostics(zero_tuple(2, 1), 0.5, N=501)
    with pytest.raises(SizeGuard):
        ladder_diagnostics(zero_tuple(2, 1), 0.5, K=7)


def test_slow_orbit_is_extrapolated_but_upper_bound_kept():
    from spherical_aluthge.models import corpus

    T = corpus(7, 50)[49].tuple
    r = radius_joint_eig(T)
    res = radius_aluthge(T, 0.25, max_iter=500)
    assert res.extrapolated and res.upper >= r
    assert abs(res.value - r) < abs(res.upper - r) / 10
