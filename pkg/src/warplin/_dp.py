"""Compiled dynamic-programming kernels (0-based, no validation)."""
import numpy as np
from numba import njit

NEG_INF = -np.inf


@njit(cache=True)
def maxplus(gain, mask):
    """Best path score through ``gain`` restricted to ``mask``.

    Returns the score and the optimal path as 0-based row/column arrays.
    Backtracking prefers the diagonal, then the vertical, then the
    horizontal predecessor. Score is -inf iff no admissible path exists.
    """
    m, n = gain.shape
    s = np.full((m, n), NEG_INF)
    for i in range(m):
        for j in range(n):
            if not mask[i, j]:
                continue
            if i == 0 and j == 0:
                s[0, 0] = gain[0, 0]
                continue
            best = NEG_INF
            if i > 0 and j > 0 and s[i - 1, j - 1] > best:
                best = s[i - 1, j - 1]
            if i > 0 and s[i - 1, j] > best:
                best = s[i - 1, j]
            if j > 0 and s[i, j - 1] > best:
                best = s[i, j - 1]
            if best > NEG_INF:
                s[i, j] = gain[i, j] + best
    value = s[m - 1, n - 1]
    rows = np.empty(m + n - 1, dtype=np.intp)
    cols = np.empty(m + n - 1, dtype=np.intp)
    if value == NEG_INF:
        return value, rows[:0], cols[:0]
    i, j = m - 1, n - 1
    k = 0
    rows[0] = i
    cols[0] = j
    while i > 0 or j > 0:
        diag = s[i - 1, j - 1] if (i > 0 and j > 0) else NEG_INF
        vert = s[i - 1, j] if i > 0 else NEG_INF
        horz = s[i, j - 1] if j > 0 else NEG_INF
        if diag >= vert and diag >= horz:
            i -= 1
            j -= 1
        elif vert >= horz:
            i -= 1
        else:
            j -= 1
        k += 1
        rows[k] = i
        cols[k] = j
    return value, rows[k::-1].copy(), cols[k::-1].copy()


@njit(cache=True)
def dtw_sq(x, y):
    m = x.shape[0]
    n = y.shape[0]
    d = np.full((m + 1, n + 1), np.inf)
    d[0, 0] = 0.0
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            diff = x[i - 1] - y[j - 1]
            best = d[i - 1, j - 1]
            if d[i - 1, j] < best:
                best = d[i - 1, j]
            if d[i, j - 1] < best:
                best = d[i, j - 1]
            d[i, j] = diff * diff + best
    return d[m, n]
