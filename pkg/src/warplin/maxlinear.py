"""Max-linear functions and their conversions to and from warped-linear form."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, InvalidShape
from .products import as_series, as_weight_matrix, p_projection
from .warping import DEFAULT_ENUMERATION_CAP, PathConstraint, enumerate_paths, warping_matrix

ACTIVE_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class MaxLinearModel:
    """``f(x) = max_p components[p] @ x`` with ``components`` of shape (c, d)."""

    components: np.ndarray

    def __post_init__(self):
        comps = np.array(self.components, dtype=np.float64)
        if comps.ndim == 1:
            comps = comps[None, :]
        if comps.ndim != 2 or comps.shape[0] < 1 or comps.shape[1] < 1:
            raise InvalidShape(f"components must form a non-empty (c, d) array, got {comps.shape}")
        comps.setflags(write=False)
        object.__setattr__(self, "components", comps)

    @property
    def c(self) -> int:
        return self.components.shape[0]

    @property
    def d(self) -> int:
        return self.components.shape[1]

    def scores(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.d,):
            raise DimensionMismatch(f"expected an input of dimension {self.d}, got shape {x.shape}")
        return self.components @ x

    def __call__(self, x) -> float:
        return evaluate(self, x)[0]


def evaluate(model: MaxLinearModel, x) -> tuple[float, int]:
    """Value and smallest active index."""
    s = model.scores(x)
    k = int(np.argmax(s))
    return float(s[k]), k


def active_set(model: MaxLinearModel, x) -> frozenset[int]:
    s = model.scores(x)
    top = s.max()
    tol = ACTIVE_RTOL * (1.0 + abs(top))
    return frozenset(int(k) for k in np.flatnonzero(s >= top - tol))


def ep_to_maxlinear(
    W, q: Optional[PathConstraint], input_length: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> MaxLinearModel:
    """One component (the p-projection) per admissible path of the ``l x e`` lattice."""
    W = as_weight_matrix(W)
    if not 1 <= input_length <= W.shape[0]:
        raise DimensionMismatch(f"input length {input_length} incompatible with W of shape {W.shape}")
    sub = W[:input_length]
    paths = enumerate_paths(input_length, W.shape[1], q, cap=cap)
    return MaxLinearModel(np.array([p_projection(sub, p) for p in paths]))


def wp_to_maxlinear(
    w, q: Optional[PathConstraint], input_length: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> MaxLinearModel:
    """One component ``M_p^T w`` per admissible path of the ``e x l`` lattice."""
    w = as_series(w, "w")
    paths = enumerate_paths(w.size, input_length, q, cap=cap)
    return MaxLinearModel(np.array([warping_matrix(p).T @ w for p in paths], dtype=np.float64))


def maxlinear_to_ep(A) -> tuple[np.ndarray, PathConstraint]:
    """Weight matrix and mask whose constrained elastic product equals ``max_i a_i @ x``.

    ``W`` has shape ``(d, 2(c-1) + d)``. The first and last columns of ``A``
    are replaced by successive differences, the result is transposed,
    interleaved with zero (rows 1 and d) or masked columns, and row ``i`` is
    shifted right by ``i - 1``. Masked cells are stored as 0.

    With ``d == 2`` and ``c > 1`` nothing separates row 1 from row d, so the
    mask admits paths that combine the bias of one component with the slope of
    the next; those cases are rejected.
    """
    A = as_weight_matrix(A)
    c, d = A.shape
    if d < 2:
        raise InvalidShape("the construction needs d >= 2")
    if d == 2 and c > 1:
        raise InvalidShape("d == 2 with more than one component admits mixed paths; need d >= 3")
    adj = A.copy()
    adj[1:, 0] = A[1:, 0] - A[:-1, 0]
    adj[:-1, d - 1] = A[:-1, d - 1] - A[1:, d - 1]
    B = adj.T

    n = 2 * c - 1
    C = np.zeros((d, n))
    keep = np.zeros((d, n), dtype=bool)
    C[:, 0::2] = B
    keep[:, 0::2] = True
    keep[[0, d - 1], 1::2] = True

    e = 2 * (c - 1) + d
    W = np.zeros((d, e))
    mask = np.zeros((d, e), dtype=bool)
    for i in range(d):
        W[i, i : i + n] = C[i]
        mask[i, i : i + n] = keep[i]
    return W, PathConstraint(mask)


def maxlinear_to_wp_padded(A) -> tuple[np.ndarray, PathConstraint]:
    """Weight sequence and mask reproducing ``max_i a_i @ x`` on ``pad_input(x)``.

    ``w`` concatenates the rows of ``A`` (length ``c*d``); the mask lives on the
    ``(c*d) x (d+2)`` lattice. For ``d == 1`` and ``c > 1`` the diagonal
    segments touch and paths may sum several components, so that case is
    rejected.
    """
    A = as_weight_matrix(A)
    c, d = A.shape
    if d == 1 and c > 1:
        raise InvalidShape("d == 1 with more than one component admits summed paths; need d >= 2")
    e = c * d
    w = A.reshape(-1).copy()
    i = np.arange(1, e + 1)[:, None]
    j = np.arange(1, d + 3)[None, :]
    left = (i <= (c - 1) * d + 1) & (j == 1)
    right = (i >= d) & (j == d + 2)
    diag = (2 <= j) & (j <= d + 1) & ((i - j + 1) % d == 0) & ((i - j + 1) // d <= c - 1)
    return w, PathConstraint(left | right | diag)


def pad_input(x) -> np.ndarray:
    """``(0, x, 0)``."""
    x = np.asarray(x, dtype=np.float64)
    return np.concatenate(([0.0], x, [0.0]))
