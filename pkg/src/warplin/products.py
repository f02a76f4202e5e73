"""Warped and elastic products, their path scores and matrix forms."""
from __future__ import annotations

from typing import Optional

import numpy as np

from . import _dp
from .errors import DimensionMismatch, InfeasibleConstraint
from .warping import PathConstraint, WarpingPath, resolve_constraint


def as_series(x, name="x") -> np.ndarray:
    """Validate a univariate series and return it as a float64 array."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionMismatch(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_weight_matrix(W) -> np.ndarray:
    arr = np.asarray(W, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"weight matrix must be 2-d and non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("weight matrix contains non-finite values")
    return arr


def _check_path(p: WarpingPath, m: int, n: int):
    if (p.m, p.n) != (m, n):
        raise DimensionMismatch(f"path lives in a {p.m}x{p.n} lattice, expected {m}x{n}")


def _to_path(rows, cols, m, n) -> WarpingPath:
    return WarpingPath(tuple((int(i) + 1, int(j) + 1) for i, j in zip(rows, cols)), m, n)


def path_score_warped(w, x, p: WarpingPath) -> float:
    """Sum of ``w_i * x_j`` over the points of ``p``."""
    w = as_series(w, "w")
    x = as_series(x)
    _check_path(p, w.size, x.size)
    return float(np.sum(w[p.rows] * x[p.cols]))


def warped_product(w, x, q: Optional[PathConstraint] = None) -> tuple[float, WarpingPath]:
    """Maximum of :func:`path_score_warped` over the admissible paths.

    Rows of the lattice index the weight sequence, columns the input.
    """
    w = as_series(w, "w")
    x = as_series(x)
    mask = resolve_constraint(q, w.size, x.size)
    value, rows, cols = _dp.maxplus(np.outer(w, x), mask)
    if value == -np.inf:
        raise InfeasibleConstraint("no admissible warping path")
    return float(value), _to_path(rows, cols, w.size, x.size)


def _elastic_rows(W: np.ndarray, x: np.ndarray) -> np.ndarray:
    if x.size > W.shape[0]:
        raise DimensionMismatch(f"series of length {x.size} exceeds the {W.shape[0]} rows of W")
    return W[: x.size]


def path_score_elastic(W, x, p: WarpingPath) -> float:
    """Sum of ``w_ij * x_i`` over ``p``, using only the first ``len(x)`` rows of W."""
    W = as_weight_matrix(W)
    x = as_series(x)
    sub = _elastic_rows(W, x)
    _check_path(p, x.size, W.shape[1])
    return float(np.sum(sub[p.rows, p.cols] * x[p.rows]))


def elastic_product(W, x, q: Optional[PathConstraint] = None) -> tuple[float, WarpingPath]:
    W = as_weight_matrix(W)
    x = as_series(x)
    sub = _elastic_rows(W, x)
    mask = resolve_constraint(q, x.size, W.shape[1])
    value, rows, cols = _dp.maxplus(sub * x[:, None], mask)
    if value == -np.inf:
        raise InfeasibleConstraint("no admissible warping path")
    return float(value), _to_path(rows, cols, x.size, W.shape[1])


def p_matrix(x, p: WarpingPath, d: int, e: int) -> np.ndarray:
    """Scatter ``x`` into a ``d x e`` zero matrix along ``p``.

    Rows beyond ``len(x)`` stay zero.
    """
    x = as_series(x)
    if x.size > d:
        raise DimensionMismatch(f"series of length {x.size} exceeds d={d}")
    _check_path(p, x.size, e)
    out = np.zeros((d, e))
    out[p.rows, p.cols] = x[p.rows]
    return out


def p_projection(W, p: WarpingPath) -> np.ndarray:
    """Row sums of W over the cells of ``p`` (zero for rows the path skips)."""
    W = as_weight_matrix(W)
    d, e = W.shape
    if p.n != e or p.m > d:
        raise DimensionMismatch(f"path in a {p.m}x{p.n} lattice does not fit W of shape {W.shape}")
    out = np.zeros(d)
    np.add.at(out, p.rows, W[p.rows, p.cols])
    return out


def dtw_distance(x, y) -> float:
    """Squared-cost DTW distance (no square root)."""
    return float(_dp.dtw_sq(as_series(x), as_series(y, "y")))
