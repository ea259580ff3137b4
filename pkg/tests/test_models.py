import numpy as np
import pytest
from hypothesis import given, strategies as st

from spherical_aluthge.errors import NotCommuting
from spherical_aluthge.models import (
    STYLES,
    ShiftSpec,
    TwoVarShiftSpec,
    corpus,
    ex14_pair,
    ex24_pair,
    ex41_matrix,
    polynomial_tuple,
    random_commuting,
    two_variable_shift,
    weighted_shift,
)
from spherical_aluthge.tuples import tuple_two_norm


def test_weighted_shift_maps_basis():
    W = weighted_shift(ShiftSpec((2.0, 3.0)))
    assert np.allclose(W @ np.eye(3)[:, 0], [0, 2, 0])
    assert np.allclose(W @ np.eye(3)[:, 1], [0, 0, 3])
    assert ShiftSpec.s_a(0.5, 4).weights == (0.5, 1.0, 1.0)
    with pytest.raises(ValueError):
        ShiftSpec((1.0, -1.0))


def test_product_two_variable_shift_commutes():
    spec = TwoVarShiftSpec.product([1.0, 2.0, 0.5], [3.0, 1.5])
    assert spec.commutativity_defect() == 0
    T = two_variable_shift(spec)
    assert T.n == 12 and T.commutator_residual == 0
    # e_(0,0) -> alpha e_(1,0) at flat index 1 * N2 + 0
    assert T[0][3, 0] == 1.0 and T[1][1, 0] == 3.0


def test_incompatible_weights_rejected():
    alpha = np.ones((3, 3))
    beta = np.ones((3, 3))
    beta[1, 0] = 2.0
    with pytest.raises(NotCommuting):
        two_variable_shift(TwoVarShiftSpec(alpha, beta))


def test_ex41_closed_forms():
    ex = ex41_matrix(3)
    T = ex.tuple[0]
    assert np.allclose(ex.expected["V"] @ ex.expected["P"], T)
    assert np.allclose(T @ T, (1 - 9) * np.eye(2))
    assert tuple_two_norm(ex.tuple) == pytest.approx(ex.expected["norm"])
    with pytest.raises(ValueError):
        ex41_matrix(1)


def test_ex14_expected_shape():
    ex = ex14_pair(5)
    D, Z = ex.expected["aluthge"]
    assert D[0].sum() == 0 and np.allclose(Z, 0)
    assert np.allclose(ex.expected["P"], np.diag([0, 1, 1, 1, 1]))


def test_ex24_closed_form_identities():
    ex = ex24_pair(6)
    e = ex.expected
    assert np.allclose(e["P"] @ e["P"], e["P_squared"])
    assert ex.mask.sum() == 25
    assert np.allclose(e.aluthge(1.0)[1], ex.tuple[1])


def test_polynomial_tuple_spectrum_and_degree_guard():
    s = polynomial_tuple(np.diag([1.0, -1.0]), [[0, 0, 1]])
    assert len(s.spectrum) == 1 and s.radius == pytest.approx(1.0)
    with pytest.raises(ValueError):
        polynomial_tuple(np.eye(2), [[0] * 8])


@given(st.integers(0, 10**6), st.integers(2, 8), st.integers(1, 4), st.sampled_from(STYLES))
def test_random_commuting_contract(seed, n, d, style):
    if style == "jordan-mixed" and n < 3:
        n = 3
    s = random_commuting(seed, n, d, style)
    assert s.tuple.n == n and s.tuple.d == d
    assert s.tuple.commutator_residual < 1e-10
    norms = sorted({round(p.norm2, 12) for p in s.spectrum}, reverse=True)
    assert len(norms) == 1 or norms[1] <= 0.8 * norms[0]


def test_random_commuting_is_seeded():
    a = random_commuting(3, 5, 2, "shift-based").tuple
    b = random_commuting(3, 5, 2, "shift-based").tuple
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    with pytest.raises(ValueError):
        random_commuting(0, 17, 1)
    with pytest.raises(ValueError):
        random_commuting(0, 3, 1, "unknown")


def test_corpus_bounds_and_determinism():
    c1 = corpus(7, 12)
    c2 = corpus(7, 12)
    assert [s.meta["index"] for s in c1] == list(range(12))
    for s1, s2 in zip(c1, c2):
        assert 2 <= s1.tuple.n <= 8 and 1 <= s1.tuple.d <= 3
        assert all(np.array_equal(x, y) for x, y in zip(s1.tuple, s2.tuple))
    assert {s.meta["style"] for s in c1} == set(STYLES)
