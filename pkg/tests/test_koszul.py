import numpy as np
import pytest
from hypothesis import given, strategies as st

from spherical_aluthge.errors import SizeGuard
from spherical_aluthge.koszul import (
    GridSlice,
    boundary_maps,
    boundary_matrices,
    grid_scan,
    hausdorff_distance,
    homology_dims,
    invariant_blocks,
    joint_eigenvalues,
    membership_report,
)
from spherical_aluthge.models import polynomial_tuple, random_commuting
from spherical_aluthge.tuples import PointCd, validate_commuting, zero_tuple

seeds = st.integers(0, 10**5)
styles = st.sampled_from(["diagonalizable", "jordan-mixed", "shift-based"])


def test_d2_boundary_maps_match_displayed_complex(rng):
    A = rng.normal(size=(3, 3))
    T = validate_commuting([A, A @ A])
    D0, D1 = boundary_matrices(T)
    assert np.allclose(D0, np.vstack([T[0], T[1]]))
    assert np.allclose(D1, np.hstack([-T[1], T[0]]))


def test_d3_block_signs():
    T = validate_commuting([np.eye(1), 2 * np.eye(1), 3 * np.eye(1)])
    D0, D1, D2 = boundary_matrices(T)
    # stage 1 -> 2 on subsets {0},{1},{2} -> {0,1},{0,2},{1,2}
    assert np.allclose(D1, [[-2, 1, 0], [-3, 0, 1], [0, -3, 2]])
    assert np.allclose(D2, [[3, -2, 1]])


@given(seeds, styles, st.integers(1, 4))
def test_boundary_squares_to_zero_and_euler_vanishes(seed, style, d):
    T = random_commuting(seed, 4, d, style).tuple
    cx = boundary_maps(T)
    assert cx.square_residual() <= 1e-12 * max(1.0, np.linalg.norm(np.vstack(list(T)), 2) ** 2)
    assert cx.euler_characteristic == 0
    assert cx.index == 0
    assert sum(cx.stage_dims) == 2**d * 4


def test_homology_of_zero_tuple_is_everything():
    assert homology_dims(zero_tuple(2, 2)) == [2, 4, 2]


def test_membership_of_diagonal_tuple():
    T = validate_commuting([np.diag([1.0, 2.0]), np.diag([3.0, 5.0])])
    inside = membership_report(T, (1, 3))
    assert inside.taylor and inside.point_spectrum and inside.left and inside.right
    mixed = membership_report(T, (1, 5))
    assert not mixed.taylor and not mixed.harte
    far = membership_report(T, (100, 100))
    assert not any(far.flags().values())


def test_pi_and_delta_chains_are_nested():
    T = random_commuting(4, 4, 3, "jordan-mixed").tuple
    for p in joint_eigenvalues(T):
        rep = membership_report(T, p)
        assert rep.pi[0] == rep.left and rep.delta[0] == rep.right
        assert list(rep.pi) == sorted(rep.pi) and list(rep.delta) == sorted(rep.delta)
        assert rep.pi[-1] == rep.taylor == rep.delta[-1]
        assert rep.harte == (rep.left or rep.right)


def test_joint_eigenvalues_of_polynomial_tuple():
    sample = polynomial_tuple(np.diag([1.0, 2.0]), [[0, 1], [0, 0, 1]])
    got = joint_eigenvalues(sample.tuple)
    assert hausdorff_distance(got, [PointCd((1, 1)), PointCd((2, 4))]) < 1e-12


def test_joint_eigenvalues_d1_are_eigenvalues(rng):
    A = rng.normal(size=(5, 5))
    def key(z):
        return (round(z.real, 9), round(z.imag, 9))

    got = sorted((complex(p[0]) for p in joint_eigenvalues(validate_commuting([A]))), key=key)
    assert np.allclose(got, sorted(np.linalg.eigvals(A), key=key))


def test_nilpotent_pair_has_only_origin():
    N = np.diag([1.0, 1.0], -1)
    I = np.eye(3)
    T = validate_commuting([np.kron(N, I), np.kron(I, N)])
    assert joint_eigenvalues(T) == [PointCd((0, 0))]


@given(seeds, styles, st.integers(1, 3))
def test_joint_eigenvalues_match_ground_truth(seed, style, d):
    sample = random_commuting(seed, 5, d, style)
    assert hausdorff_distance(joint_eigenvalues(sample.tuple), sample.spectrum) < 1e-6


def test_invariant_blocks_block_diagonalize():
    T = random_commuting(9, 6, 2, "jordan-mixed").tuple
    W, sizes = invariant_blocks(T)
    offsets = np.cumsum([0] + sizes)
    for m in T:
        B = np.linalg.solve(W, m @ W)
        for a, b in zip(offsets[:-1], offsets[1:]):
            B[a:b, a:b] = 0
        assert np.abs(B).max() < 1e-10


def test_hausdorff_distance_basics():
    A = [PointCd((0,)), PointCd((1,))]
    assert hausdorff_distance(A, A) == 0
    assert hausdorff_distance(A, [PointCd((0,))]) == pytest.approx(1)
    assert hausdorff_distance([], A) == np.inf


def test_single_point_grid_is_membership_report():
    T = validate_commuting([np.diag([1.0, 2.0])])
    grid = GridSlice(0, (2.0, 2.0), (0.0, 0.0), (1, 1))
    ((p, rep),) = grid_scan(T, grid)
    assert rep == membership_report(T, p)


def test_grid_marks_the_two_eigenvalues():
    T = validate_commuting([np.diag([1.0, 2.0])])
    grid = GridSlice(0, (0.0, 3.0), (-1.5, 1.5), (7, 7))
    cells = grid_scan(T, grid, workers=3)
    marked = sorted(complex(p[0]).real for p, rep in cells if rep.taylor)
    assert marked == [1.0, 2.0]


def test_zero_tuple_grid_marks_only_origin():
    grid = GridSlice(1, (-1.0, 1.0), (-1.0, 1.0), (5, 5), fixed=(0, 0))
    cells = grid_scan(zero_tuple(2, 2), grid)
    assert [p for p, rep in cells if rep.taylor] == [PointCd((0, 0))]


def test_grid_scan_order_independent_of_workers():
    T = random_commuting(2, 3, 2).tuple
    grid = GridSlice(0, (-1.0, 1.0), (-1.0, 1.0), (6, 5))
    assert grid_scan(T, grid, workers=1) == grid_scan(T, grid, workers=4)


def test_grid_guard():
    with pytest.raises(SizeGuard):
        grid_scan(zero_tuple(1, 1), GridSlice(0, (0, 1), (0, 1), (2000, 1000)))
