import numpy as np
import pytest

from warplin.errors import DimensionMismatch
from warplin.maxlinear import MaxLinearModel
from warplin.separability import in_convex_hull, max_lin_separable, region_membership, square_construction

SIMPLEX = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]


def test_hull_examples():
    assert in_convex_hull([0.25, 0.25], SIMPLEX)
    assert not in_convex_hull([1.0, 1.0], SIMPLEX)
    assert in_convex_hull([1.0, 0.0], SIMPLEX)
    assert in_convex_hull([0.5, 0.5], SIMPLEX)  # on an edge


def test_hull_near_boundary():
    assert not in_convex_hull([0.5 + 1e-6, 0.5], SIMPLEX)
    assert in_convex_hull([0.5 - 1e-6, 0.5], SIMPLEX)


def test_hull_against_sampled_combinations(rng):
    U = rng.normal(size=(6, 3))
    for _ in range(30):
        lam = rng.dirichlet(np.ones(6))
        assert in_convex_hull(lam @ U, U)
    # a point beyond a supporting hyperplane is outside
    direction = rng.normal(size=3)
    far = U[np.argmax(U @ direction)] + direction
    assert not in_convex_hull(far, U)


def test_separability_examples():
    corners = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]
    far = [[-3.0, 0.5], [4.0, 0.5], [0.5, -3.0], [0.5, 4.0]]
    assert max_lin_separable(corners, far)
    assert not max_lin_separable(far, corners)
    assert not max_lin_separable([[0.0, 0.0], [1.0, 1.0]], [[1.0, 1.0]])
    assert max_lin_separable([[0.0, 0.0]], [[1.0, 0.0], [0.0, 2.0]])


def test_square_construction():
    U, V = square_construction()
    assert max_lin_separable(U, V)
    assert not max_lin_separable(V, U)
    assert np.all((U > 0) & (U < 1))


def test_separable_sets_admit_a_max_linear_witness():
    # one facet per outside point: a_i @ (1, x) is positive at v_i, negative on U
    U, V = square_construction()
    comps = []
    for v in V:
        normal = v - 0.5
        offset = normal @ (0.5 + 0.5 * normal / np.abs(normal).max())
        comps.append(np.concatenate(([-offset], normal)))
    model = MaxLinearModel(comps)
    assert all(region_membership(model, np.concatenate(([1.0], u))) == "negative" for u in U)
    assert all(region_membership(model, np.concatenate(([1.0], v))) == "positive" for v in V)


def test_region_membership_examples():
    zero = MaxLinearModel(np.zeros((2, 2)))
    assert region_membership(zero, [1.0, 5.0]) == "negative"
    m = MaxLinearModel([[0.0, 1.0]])
    assert region_membership(m, [1.0, 2.0]) == "positive"
    assert region_membership(m, [1.0, -2.0]) == "negative"
    assert region_membership(m, [1.0, 0.0]) == "negative"


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        max_lin_separable([[0.0, 0.0]], [[0.0, 0.0, 0.0]])
    with pytest.raises(DimensionMismatch):
        in_convex_hull([0.0], SIMPLEX)
