"""Warping paths, admissibility masks and their matrix representations.

All public indices are 1-based, i.e. a path in an ``m x n`` lattice starts at
``(1, 1)`` and ends at ``(m, n)``. Arrays returned by this module are plain
0-based numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    BoundaryViolation,
    DimensionMismatch,
    EnumerationTooLarge,
    InfeasibleConstraint,
    StepViolation,
)

DEFAULT_ENUMERATION_CAP = 10**6

_STEPS = ((1, 0), (0, 1), (1, 1))


@dataclass(frozen=True)
class WarpingPath:
    points: tuple[tuple[int, int], ...]
    m: int
    n: int

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def rows(self) -> np.ndarray:
        """0-based row indices of the path points."""
        return np.fromiter((i - 1 for i, _ in self.points), dtype=np.intp, count=len(self.points))

    @property
    def cols(self) -> np.ndarray:
        return np.fromiter((j - 1 for _, j in self.points), dtype=np.intp, count=len(self.points))


class PathConstraint:
    """Boolean admissibility mask over an ``m x n`` lattice.

    A warping path is admissible iff every one of its points lies on a true
    cell. Construction fails with :class:`InfeasibleConstraint` when the two
    corners are masked out or no admissible path connects them.
    """

    __slots__ = ("_mask",)

    def __init__(self, mask):
        mask = np.array(mask, dtype=bool)
        if mask.ndim != 2 or mask.size == 0:
            raise DimensionMismatch(f"mask must be a non-empty 2-d array, got shape {mask.shape}")
        if not (mask[0, 0] and mask[-1, -1]):
            raise InfeasibleConstraint("both lattice corners must be admissible")
        if not _reachable(mask)[-1, -1]:
            raise InfeasibleConstraint(f"no admissible warping path in the {mask.shape[0]}x{mask.shape[1]} mask")
        mask.setflags(write=False)
        self._mask = mask

    @classmethod
    def full(cls, m: int, n: int) -> "PathConstraint":
        return cls(np.ones((m, n), dtype=bool))

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    @property
    def shape(self) -> tuple[int, int]:
        return self._mask.shape

    def admits(self, path: WarpingPath) -> bool:
        if (path.m, path.n) != self.shape:
            return False
        return bool(self._mask[path.rows, path.cols].all())

    def __eq__(self, other):
        if not isinstance(other, PathConstraint):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._mask, other._mask))

    def __hash__(self):
        return hash((self.shape, self._mask.tobytes()))

    def __repr__(self):
        return f"PathConstraint(shape={self.shape}, admissible_cells={int(self._mask.sum())})"


class EmbeddingPair(NamedTuple):
    phi: np.ndarray
    psi: np.ndarray


def _reachable(mask: np.ndarray) -> np.ndarray:
    """Cells reachable from (0, 0) through admissible cells with DTW steps."""
    m, n = mask.shape
    reach = np.zeros_like(mask, dtype=bool)
    reach[0, 0] = mask[0, 0]
    for i in range(m):
        for j in range(n):
            if (i == 0 and j == 0) or not mask[i, j]:
                continue
            reach[i, j] = (
                (i > 0 and reach[i - 1, j])
                or (j > 0 and reach[i, j - 1])
                or (i > 0 and j > 0 and reach[i - 1, j - 1])
            )
    return reach


def validate_path(points: Iterable[Sequence[int]], m: int, n: int) -> WarpingPath:
    if m < 1 or n < 1:
        raise DimensionMismatch(f"lattice dimensions must be positive, got {m}x{n}")
    pts = tuple((int(i), int(j)) for i, j in points)
    if not pts:
        raise BoundaryViolation("empty path", index=0)
    if pts[0] != (1, 1):
        raise BoundaryViolation(f"path must start at (1, 1), starts at {pts[0]}", index=0)
    for l in range(1, len(pts)):
        step = (pts[l][0] - pts[l - 1][0], pts[l][1] - pts[l - 1][1])
        if step not in _STEPS:
            raise StepViolation(f"illegal step {step} from {pts[l - 1]} to {pts[l]}", index=l)
        i, j = pts[l]
        if i > m or j > n:
            raise BoundaryViolation(f"point {pts[l]} outside the {m}x{n} lattice", index=l)
    if pts[-1] != (m, n):
        raise BoundaryViolation(f"path must end at ({m}, {n}), ends at {pts[-1]}", index=len(pts) - 1)
    return WarpingPath(pts, m, n)


def count_paths(m: int, n: int, q: Optional[PathConstraint] = None) -> int:
    """Number of admissible paths (exact integer), via the counting DP."""
    mask = np.ones((m, n), dtype=bool) if q is None else q.mask
    if mask.shape != (m, n):
        raise DimensionMismatch(f"constraint shape {mask.shape} does not match lattice {m}x{n}")
    count = [[0] * n for _ in range(m)]
    for i in range(m):
        for j in range(n):
            if not mask[i, j]:
                continue
            if i == 0 and j == 0:
                count[i][j] = 1
                continue
            c = 0
            if i > 0:
                c += count[i - 1][j]
            if j > 0:
                c += count[i][j - 1]
            if i > 0 and j > 0:
                c += count[i - 1][j - 1]
            count[i][j] = c
    return count[m - 1][n - 1]


def enumerate_paths(
    m: int,
    n: int,
    q: Optional[PathConstraint] = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> list[WarpingPath]:
    """All admissible warping paths in lexicographic order of their point sequences."""
    if m < 1 or n < 1:
        raise DimensionMismatch(f"lattice dimensions must be positive, got {m}x{n}")
    total = count_paths(m, n, q)
    if total > cap:
        raise EnumerationTooLarge(f"{total} paths in the {m}x{n} lattice exceed the cap {cap}")
    mask = np.ones((m, n), dtype=bool) if q is None else q.mask
    # cells from which (m-1, n-1) is still reachable, for pruning
    alive = _reachable(mask[::-1, ::-1])[::-1, ::-1]

    paths: list[WarpingPath] = []
    stack = [(0, 0)]

    def extend(i, j):
        if i == m - 1 and j == n - 1:
            paths.append(WarpingPath(tuple((a + 1, b + 1) for a, b in stack), m, n))
            return
        # (i, j+1) < (i+1, j) < (i+1, j+1) lexicographically
        for a, b in ((i, j + 1), (i + 1, j), (i + 1, j + 1)):
            if a < m and b < n and alive[a, b]:
                stack.append((a, b))
                extend(a, b)
                stack.pop()

    if alive[0, 0]:
        extend(0, 0)
    return paths


def warping_matrix(p: WarpingPath) -> np.ndarray:
    mat = np.zeros((p.m, p.n), dtype=np.int64)
    mat[p.rows, p.cols] = 1
    return mat


def path_from_matrix(mat) -> WarpingPath:
    """Inverse of :func:`warping_matrix`."""
    mat = np.asarray(mat)
    rows, cols = np.nonzero(mat)
    # np.nonzero is row-major, which is the path order for monotone paths
    return validate_path(zip(rows + 1, cols + 1), *mat.shape)


def embedding_matrices(p: WarpingPath) -> EmbeddingPair:
    length = len(p)
    phi = np.zeros((length, p.m), dtype=np.int64)
    psi = np.zeros((length, p.n), dtype=np.int64)
    phi[np.arange(length), p.rows] = 1
    psi[np.arange(length), p.cols] = 1
    return EmbeddingPair(phi, psi)


def band_constraint(m: int, n: int, width: float) -> PathConstraint:
    """Slope-corrected Sakoe-Chiba band of the given half-width.

    Cell ``(i, j)`` (0-based) is admissible iff
    ``|i * (n - 1) / (m - 1) - j| <= width``. Degenerate single-row or
    single-column lattices are left unconstrained.
    """
    if width < 0:
        raise ValueError(f"band width must be non-negative, got {width}")
    if m < 1 or n < 1:
        raise DimensionMismatch(f"lattice dimensions must be positive, got {m}x{n}")
    if m == 1 or n == 1:
        return PathConstraint.full(m, n)
    i = np.arange(m)[:, None]
    j = np.arange(n)[None, :]
    mask = np.abs(i * (n - 1) / (m - 1) - j) <= width
    mask[0, 0] = mask[-1, -1] = True
    return PathConstraint(mask)


def resolve_constraint(q: Optional[PathConstraint], m: int, n: int) -> np.ndarray:
    """Boolean mask for an ``m x n`` lattice; ``None`` means unconstrained."""
    if q is None:
        return np.ones((m, n), dtype=bool)
    if q.shape != (m, n):
        raise DimensionMismatch(f"constraint shape {q.shape} does not match lattice {m}x{n}")
    return q.mask
