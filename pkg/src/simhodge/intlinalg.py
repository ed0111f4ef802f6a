"""Exact rank of integer matrices by fraction-free Gaussian elimination.

The one-step Bareiss scheme keeps every intermediate entry an exact integer
(each is a minor of the input), so the rank over the rationals comes out with
no floating-point ambiguity.  A vectorized int64 path handles the common case;
when entries threaten to leave the int64-safe range the computation restarts
with arbitrary-precision Python integers.
"""

from __future__ import annotations

import numpy as np

# Products of two entries must stay below 2^62; bound each factor at 2^30.
_SAFE = 1 << 30


def exact_rank(matrix) -> int:
    """Rank over the rationals of an integer matrix (any array-like)."""
    m = np.asarray(matrix)
    if m.size == 0:
        return 0
    if m.ndim != 2:
        raise ValueError("exact_rank expects a 2-d array")
    try:
        a = m.astype(np.int64)
    except (OverflowError, ValueError):
        return _rank_bigint([[int(x) for x in row] for row in m.tolist()])
    if not np.array_equal(a, m):
        raise ValueError("exact_rank expects integer entries")
    rank = _rank_int64(a.copy())
    if rank is None:
        rank = _rank_bigint([[int(x) for x in row] for row in m.tolist()])
    return rank


def exact_nullity(matrix) -> int:
    """Dimension of the rational kernel (columns minus rank)."""
    m = np.asarray(matrix)
    cols = m.shape[1] if m.ndim == 2 else 0
    return cols - exact_rank(matrix)


def _rank_int64(a: np.ndarray):
    """Vectorized Bareiss on int64; returns None if entries outgrow the range."""
    rows, cols = a.shape
    r = 0
    prev = np.int64(1)
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        # smallest non-zero pivot keeps intermediate minors small
        p = r + nz[np.argmin(np.abs(a[r + nz, c]))]
        if p != r:
            a[[r, p]] = a[[p, r]]
        piv = a[r, c]
        if r + 1 < rows:
            block = a[r + 1:]
            limit = max(abs(int(piv)), int(np.abs(block).max()), int(np.abs(a[r]).max()))
            if limit >= _SAFE:
                return None
            a[r + 1:] = (piv * block - np.outer(block[:, c], a[r])) // prev
        prev = piv
        r += 1
    return r


def _rank_bigint(rows_list) -> int:
    """Bareiss over Python integers, exact for any entry size."""
    rows = [row[:] for row in rows_list if any(row)]
    if not rows:
        return 0
    cols = len(rows[0])
    r = 0
    prev = 1
    for c in range(cols):
        if r == len(rows):
            break
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                if pivot_row is None or abs(rows[i][c]) < abs(rows[pivot_row][c]):
                    pivot_row = i
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        piv = rows[r][c]
        top = rows[r]
        for i in range(r + 1, len(rows)):
            row = rows[i]
            f = row[c]
            if f:
                rows[i] = [(piv * x - f * y) // prev for x, y in zip(row, top)]
            else:
                rows[i] = [(piv * x) // prev for x in row]
        prev = piv
        r += 1
    return r
