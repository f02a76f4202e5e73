import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_paths, delannoy
from warplin.errors import (
    BoundaryViolation,
    DimensionMismatch,
    EnumerationTooLarge,
    InfeasibleConstraint,
    StepViolation,
)
from warplin.warping import (
    PathConstraint,
    band_constraint,
    count_paths,
    embedding_matrices,
    enumerate_paths,
    path_from_matrix,
    resolve_constraint,
    validate_path,
    warping_matrix,
)


def test_validate_singleton():
    p = validate_path([(1, 1)], 1, 1)
    assert p.points == ((1, 1),)
    assert (p.m, p.n) == (1, 1)


def test_validate_diagonal():
    p = validate_path([(1, 1), (2, 2)], 2, 2)
    assert p.points == ((1, 1), (2, 2))


def test_validate_illegal_step():
    with pytest.raises(StepViolation) as exc:
        validate_path([(1, 1), (3, 2)], 3, 2)
    assert exc.value.index == 1


def test_validate_boundaries():
    with pytest.raises(BoundaryViolation):
        validate_path([(1, 2), (2, 2)], 2, 2)
    with pytest.raises(BoundaryViolation):
        validate_path([(1, 1), (2, 1)], 2, 2)
    with pytest.raises(StepViolation):
        validate_path([(1, 1), (1, 1), (2, 2)], 2, 2)


@pytest.mark.parametrize("m,n,expected", [(1, 5, 1), (2, 2, 3), (3, 3, 13)])
def test_enumerate_small(m, n, expected):
    assert len(enumerate_paths(m, n)) == expected
    assert count_paths(m, n) == expected


def test_enumeration_matches_brute_force():
    for m in range(1, 5):
        for n in range(1, 5):
            got = {p.points for p in enumerate_paths(m, n)}
            assert got == set(brute_paths(m, n))
            assert count_paths(m, n) == delannoy(m, n)


def test_enumeration_order_and_distinct():
    paths = [p.points for p in enumerate_paths(3, 4)]
    assert len(paths) == len(set(paths))
    assert paths == [p.points for p in enumerate_paths(3, 4)]


def test_enumeration_cap():
    with pytest.raises(EnumerationTooLarge):
        enumerate_paths(9, 9, cap=1000)


@given(st.integers(1, 6), st.integers(1, 6))
def test_path_length_bounds(m, n):
    for p in enumerate_paths(m, n):
        assert max(m, n) <= len(p.points) <= m + n - 1
        assert p.points[0] == (1, 1) and p.points[-1] == (m, n)


def test_warping_matrix_examples():
    diag = validate_path([(1, 1), (2, 2)], 2, 2)
    np.testing.assert_array_equal(warping_matrix(diag), [[1, 0], [0, 1]])
    p = validate_path([(1, 1), (1, 2), (2, 2)], 2, 2)
    np.testing.assert_array_equal(warping_matrix(p), [[1, 1], [0, 1]])


def test_warping_matrix_round_trip():
    for p in enumerate_paths(3, 4):
        assert path_from_matrix(warping_matrix(p)) == p


def test_embedding_example():
    p = validate_path([(1, 1), (1, 2), (2, 2)], 2, 2)
    phi, psi = embedding_matrices(p)
    np.testing.assert_array_equal(phi, [[1, 0], [1, 0], [0, 1]])
    np.testing.assert_array_equal(psi, [[1, 0], [0, 1], [0, 1]])
    np.testing.assert_array_equal(phi.T @ psi, [[1, 1], [0, 1]])


def test_embedding_diagonal_is_identity():
    p = validate_path([(i, i) for i in range(1, 5)], 4, 4)
    phi, psi = embedding_matrices(p)
    np.testing.assert_array_equal(phi, np.eye(4))
    np.testing.assert_array_equal(psi, np.eye(4))


def test_band_zero_is_diagonal():
    q = band_constraint(4, 4, 0)
    paths = enumerate_paths(4, 4, q)
    assert [p.points for p in paths] == [tuple((i, i) for i in range(1, 5))]


def test_band_wide_is_full():
    q = band_constraint(3, 3, 2)
    assert q.mask.all()
    assert len(enumerate_paths(3, 3, q)) == 13


def test_band_thin_corridor_infeasible():
    # only the two corner cells lie within width 0 of the 5x2 diagonal line
    with pytest.raises(InfeasibleConstraint):
        band_constraint(5, 2, 0)
    assert count_paths(5, 2, band_constraint(5, 2, 1)) >= 1


def test_constraint_rejects_blocked_corner():
    mask = np.ones((3, 3), dtype=bool)
    mask[0, 0] = False
    with pytest.raises(InfeasibleConstraint):
        PathConstraint(mask)


def test_constraint_filters_paths():
    mask = np.ones((3, 3), dtype=bool)
    mask[0, 1] = mask[1, 0] = False
    q = PathConstraint(mask)
    paths = enumerate_paths(3, 3, q)
    assert all(q.admits(p) for p in paths)
    assert len(paths) == sum(all(mask[i - 1, j - 1] for i, j in pts) for pts in brute_paths(3, 3))
    assert count_paths(3, 3, q) == len(paths)


def test_constraint_mask_read_only():
    q = PathConstraint.full(2, 3)
    with pytest.raises(ValueError):
        q.mask[0, 0] = False


def test_resolve_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        resolve_constraint(PathConstraint.full(2, 2), 3, 2)


@settings(max_examples=40)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 3))
def test_band_count_matches_filtered_enumeration(m, n, width):
    try:
        q = band_constraint(m, n, width)
    except InfeasibleConstraint:
        return
    expected = sum(all(q.mask[i - 1, j - 1] for i, j in pts) for pts in brute_paths(m, n))
    assert count_paths(m, n, q) == expected
