"""Numba kernels for the census hot path.

Imported lazily so that CLI commands that never run a census do not pay
the numba import/JIT cost.  Arithmetic is int64; callers must check the
characteristic-number bound first and fall back to the big-integer path
when 64-bit words could overflow.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _subset_exceptional(d, perms, buf):
    """True when two reversal-class representatives of d share a
    characteristic number.  buf is scratch of length perms.shape[0]."""
    nreps = perms.shape[0]
    n = perms.shape[1]
    cnt = 0
    for k in range(nreps):
        pm1 = 1
        p = 0
        qm1 = 0
        q = 1
        for j in range(n):
            a = d[perms[k, j]]
            t = a * p + pm1
            pm1 = p
            p = t
            t = a * q + qm1
            qm1 = q
            q = t
        x = (p + q) * (qm1 + q)
        lo = 0
        hi = cnt
        while lo < hi:
            mid = (lo + hi) >> 1
            if buf[mid] < x:
                lo = mid + 1
            else:
                hi = mid
        if lo < cnt and buf[lo] == x:
            return True
        for m in range(cnt, lo, -1):
            buf[m] = buf[m - 1]
        buf[lo] = x
        cnt += 1
    return False


@njit(cache=True, nogil=True)
def count_for_smallest(s, n_max, perms, out):
    """Count exceptional subsets of {1..n_max} with smallest element s,
    bucketed by largest element: out[max] += 1."""
    n = perms.shape[1]
    r = n - 1
    if s + r > n_max:
        return
    c = np.empty(r, np.int64)
    for i in range(r):
        c[i] = s + 1 + i
    d = np.empty(n, np.int64)
    d[0] = s
    buf = np.empty(perms.shape[0], np.int64)
    while True:
        for i in range(r):
            d[i + 1] = c[i]
        if _subset_exceptional(d, perms, buf):
            out[c[r - 1]] += 1
        i = r - 1
        while i >= 0 and c[i] == n_max - (r - 1 - i):
            i -= 1
        if i < 0:
            return
        c[i] += 1
        for j in range(i + 1, r):
            c[j] = c[j - 1] + 1


@njit(cache=True, nogil=True)
def collect_for_smallest(s, n_max, perms, found):
    """Write the digits of each exceptional subset with smallest element s
    into found (row-major, lexicographic); return how many there are.
    Rows past found.shape[0] are counted but not written."""
    n = perms.shape[1]
    r = n - 1
    m = 0
    if s + r > n_max:
        return m
    c = np.empty(r, np.int64)
    for i in range(r):
        c[i] = s + 1 + i
    d = np.empty(n, np.int64)
    d[0] = s
    buf = np.empty(perms.shape[0], np.int64)
    while True:
        for i in range(r):
            d[i + 1] = c[i]
        if _subset_exceptional(d, perms, buf):
            if m < found.shape[0]:
                for i in range(n):
                    found[m, i] = d[i]
            m += 1
        i = r - 1
        while i >= 0 and c[i] == n_max - (r - 1 - i):
            i -= 1
        if i < 0:
            return m
        c[i] += 1
        for j in range(i + 1, r):
            c[j] = c[j - 1] + 1
