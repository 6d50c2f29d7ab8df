"""Pure-Python implementations of the hot loops.

Used when the compiled ``_ckernels`` extension is unavailable or when
``ZIPFCODE_PURE_PYTHON=1`` is set. Results are identical to the compiled
versions; only speed differs.
"""
import numpy as np


def _tie_pairs(sorted_values):
    """Sum of t*(t-1)/2 over runs of equal values in an already sorted array."""
    if len(sorted_values) == 0:
        return 0
    _, counts = np.unique(sorted_values, return_counts=True)
    counts = counts.astype(np.int64)
    return int((counts * (counts - 1) // 2).sum())


def _count_inversions(values):
    """Bottom-up merge sort over ``values`` returning the number of strict inversions."""
    a = list(values)
    n = len(a)
    buf = [0.0] * n
    swaps = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if a[i] <= a[j]:
                    buf[k] = a[i]
                    i += 1
                else:
                    buf[k] = a[j]
                    swaps += mid - i
                    j += 1
                k += 1
            buf[k:k + mid - i] = a[i:mid]
            k += mid - i
            buf[k:k + hi - j] = a[j:hi]
        a, buf = buf, a
        width *= 2
    return swaps, a


def kendall_counts(x, y):
    """Pair statistics for Kendall's tau-b using Knight's O(n log n) algorithm.

    Returns ``(s, n0, ties_x, ties_y)`` where ``s`` is concordant minus
    discordant pairs and ``n0 = n(n-1)/2``.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = len(x)
    order = np.lexsort((y, x))
    xs = x[order]
    ys = y[order]
    n0 = n * (n - 1) // 2
    ties_x = _tie_pairs(xs)
    # joint ties: runs equal in both coordinates of the lexsorted pairs
    joint = 0
    run = 1
    for k in range(1, n):
        if xs[k] == xs[k - 1] and ys[k] == ys[k - 1]:
            run += 1
        else:
            joint += run * (run - 1) // 2
            run = 1
    joint += run * (run - 1) // 2
    swaps, merged = _count_inversions(ys.tolist())
    ties_y = _tie_pairs(np.asarray(merged))
    s = n0 - ties_x - ties_y + joint - 2 * swaps
    return s, n0, ties_x, ties_y


def nonsingular_lengths(ranks, n_symbols):
    """Length of the i-th string in length-then-lexicographic order, per rank.

    Integer shell arithmetic only: the result for rank ``i`` is the smallest
    ``L`` with ``N + N**2 + ... + N**L >= i``.
    """
    ranks = np.asarray(ranks, dtype=np.int64)
    out = np.empty(len(ranks), dtype=np.int64)
    for k, i in enumerate(ranks.tolist()):
        length = 1
        shell = n_symbols
        below = 0
        while i - below > shell:
            below += shell
            shell *= n_symbols
            length += 1
        out[k] = length
    return out
