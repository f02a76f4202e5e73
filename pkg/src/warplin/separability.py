"""Convex-hull membership and max-lin separability of finite point sets."""
from __future__ import annotations

import numpy as np
from scipy.optimize import nnls

from .errors import DimensionMismatch
from .maxlinear import MaxLinearModel, evaluate

HULL_TOL = 1e-9


def as_point_set(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise DimensionMismatch(f"a point set needs shape (n, dim) with n >= 1, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point set contains non-finite coordinates")
    return arr


def in_convex_hull(v, U, tol: float = HULL_TOL) -> bool:
    """Whether ``v`` is a convex combination of the rows of ``U``.

    Solves the non-negative least-squares problem ``[U^T; 1^T] lam = [v; 1]``;
    a residual within ``tol`` (scaled by the magnitude of the data) counts as
    inside, so points on the hull boundary are members.
    """
    U = as_point_set(U)
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (U.shape[1],):
        raise DimensionMismatch(f"point of shape {v.shape} vs set of dimension {U.shape[1]}")
    A = np.vstack((U.T, np.ones(U.shape[0])))
    b = np.concatenate((v, [1.0]))
    _, resid = nnls(A, b, maxiter=50 * A.shape[1])
    scale = 1.0 + max(np.abs(U).max(), np.abs(v).max())
    return bool(resid <= tol * scale)


def max_lin_separable(U, V) -> bool:
    """True iff no point of ``V`` lies in the convex hull of ``U``."""
    U = as_point_set(U)
    V = as_point_set(V)
    if U.shape[1] != V.shape[1]:
        raise DimensionMismatch(f"sets of dimension {U.shape[1]} and {V.shape[1]}")
    return not any(in_convex_hull(v, U) for v in V)


def region_membership(model: MaxLinearModel, x) -> str:
    """``"negative"`` on the closed region ``f(x) <= 0``, ``"positive"`` otherwise."""
    return "negative" if evaluate(model, x)[0] <= 0 else "positive"


def square_construction() -> tuple[np.ndarray, np.ndarray]:
    """Points inside the unit square and outside points whose hull covers the square."""
    U = np.array([[0.25, 0.25], [0.75, 0.25], [0.25, 0.75], [0.75, 0.75], [0.5, 0.5]])
    V = np.array([[-1.0, 0.5], [2.0, 0.5], [0.5, -1.0], [0.5, 2.0]])
    return U, V
