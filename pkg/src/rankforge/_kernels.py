"""Compiled sweep kernels.

Both kernels fill a 512-slot histogram indexed by containment bitset; every
count the package reports is a linear function of that histogram.
"""

from itertools import combinations

import numba
import numpy as np

from .hands import profile_bits

_jit = numba.njit(cache=True, nogil=True)

NPROFILES = 512


@_jit
def binom_table(n):
    t = np.zeros((n + 1, 8), dtype=np.int64)
    for i in range(n + 1):
        t[i, 0] = 1
        for k in range(1, min(i, 7) + 1):
            t[i, k] = t[i - 1, k - 1] + (t[i - 1, k] if k <= i - 1 else 0)
    return t


@_jit
def unrank_colex(idx, table, out):
    """Write the 7-combination with colex index ``idx`` into ``out`` (ascending)."""
    n = table.shape[0] - 1
    for k in range(7, 0, -1):
        c = n
        while table[c, k] > idx:
            c -= 1
        out[k - 1] = c
        idx -= table[c, k]
        n = c


@_jit
def sweep_range(r, lo, hi, hist):
    """Accumulate profiles of colex-ranked hands ``lo <= idx < hi`` into ``hist``."""
    if hi <= lo:
        return
    table = binom_table(4 * r)
    c = np.empty(7, dtype=np.int64)
    unrank_colex(lo, table, c)
    base = np.zeros(4, dtype=np.int64)
    for j in range(1, 7):
        base[c[j] & 3] |= 1 << (c[j] >> 2)
    remaining = hi - lo
    while True:
        s = c[0] & 3
        bit = 1 << (c[0] >> 2)
        m0 = base[0]
        m1 = base[1]
        m2 = base[2]
        m3 = base[3]
        if s == 0:
            m0 |= bit
        elif s == 1:
            m1 |= bit
        elif s == 2:
            m2 |= bit
        else:
            m3 |= bit
        hist[profile_bits(m0, m1, m2, m3, r)] += 1
        remaining -= 1
        if remaining == 0:
            return
        # colex successor; the cards above position 0 change only on a carry
        if c[0] + 1 < c[1]:
            c[0] += 1
            continue
        i = 1
        while i < 6 and c[i] + 1 == c[i + 1]:
            i += 1
        c[i] += 1
        for j in range(i):
            c[j] = j
        base[:] = 0
        for j in range(1, 7):
            base[c[j] & 3] |= 1 << (c[j] >> 2)


def masks_by_popcount(r):
    """Sorted r-bit masks of popcount 0..7, packed as ``(masks, offsets)``.

    Masks of popcount k are ``masks[offsets[k]:offsets[k + 1]]``.
    """
    chunks = []
    for k in range(8):
        ms = sorted(sum(1 << i for i in bits) for bits in combinations(range(r), k))
        chunks.append(np.array(ms, dtype=np.int64))
    offsets = np.zeros(9, dtype=np.int64)
    offsets[1:] = np.cumsum([len(c) for c in chunks])
    return np.concatenate(chunks), offsets


@_jit
def _orbit_weight(m0, m1, m2, m3):
    # 24 / |stabilizer|; masks arrive sorted so equal masks are adjacent
    if m0 == m1:
        if m1 == m2:
            if m2 == m3:
                return 1
            return 4
        if m2 == m3:
            return 6
        return 12
    if m1 == m2:
        if m2 == m3:
            return 4
        return 12
    if m2 == m3:
        return 12
    return 24


@_jit
def _count_upto(masks, lo, hi, bound):
    """Number of entries of the increasing slice ``masks[lo:hi]`` that are <= bound."""
    a = lo
    b = hi
    while a < b:
        mid = (a + b) // 2
        if masks[mid] <= bound:
            a = mid + 1
        else:
            b = mid
    return a - lo


@_jit
def sweep_canonical(r, tops, masks, offsets, hist):
    """Suit-canonical sweep over representatives m0 >= m1 >= m2 >= m3.

    ``tops`` holds indices into ``masks`` for the largest suit mask; each
    representative adds the size of its suit-permutation orbit to ``hist``.
    """
    for t in range(tops.shape[0]):
        ti = tops[t]
        k0 = 0
        while offsets[k0 + 1] <= ti:
            k0 += 1
        m0 = masks[ti]
        for k1 in range(0, 8 - k0):
            s1 = offsets[k1]
            n1 = _count_upto(masks, s1, offsets[k1 + 1], m0)
            for i1 in range(s1, s1 + n1):
                m1 = masks[i1]
                for k2 in range(0, 8 - k0 - k1):
                    k3 = 7 - k0 - k1 - k2
                    s2 = offsets[k2]
                    s3 = offsets[k3]
                    n2 = _count_upto(masks, s2, offsets[k2 + 1], m1)
                    for i2 in range(s2, s2 + n2):
                        m2 = masks[i2]
                        n3 = _count_upto(masks, s3, offsets[k3 + 1], m2)
                        for i3 in range(s3, s3 + n3):
                            m3 = masks[i3]
                            hist[profile_bits(m0, m1, m2, m3, r)] += _orbit_weight(m0, m1, m2, m3)
