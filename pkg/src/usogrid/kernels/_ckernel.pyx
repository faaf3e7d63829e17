# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: subgrid validation and exhaustive USO enumeration.

Must match usogrid.kernels.pure bit for bit; see that module for the vertex,
edge-word and subgrid-scan conventions.  Limited to m, n <= 16 and
m*n <= 64 so vertex masks fit in one machine word.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport free, malloc


cdef inline int _popcount(uint64_t x) noexcept:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def find_violation(int m, int n, out_masks):
    """First subgrid (ascending (row_mask, col_mask)) with sink count != 1."""
    if m < 1 or n < 1 or m > 16 or n > 16 or m * n > 64:
        raise ValueError("compiled kernel supports m, n <= 16 with m*n <= 64")
    cdef uint64_t out[64]
    cdef int v
    for v in range(m * n):
        out[v] = out_masks[v]

    cdef uint64_t full_row = (<uint64_t>1 << n) - 1
    cdef uint64_t *csel = <uint64_t *>malloc((<size_t>1 << n) * sizeof(uint64_t))
    if csel is NULL:
        raise MemoryError()
    cdef uint64_t single
    cdef int i, j
    cdef uint64_t cmask, low
    csel[0] = 0
    for cmask in range(1, <uint64_t>1 << n):
        low = cmask & (~cmask + 1)
        j = _popcount(low - 1)
        single = 0
        for i in range(m):
            single |= <uint64_t>1 << (i * n + j)
        csel[cmask] = csel[cmask ^ low] | single

    cdef uint64_t rmask, rsel, t, sub
    cdef int sinks, row_single
    try:
        for rmask in range(1, <uint64_t>1 << m):
            rsel = 0
            t = rmask
            while t:
                i = _popcount((t & (~t + 1)) - 1)
                rsel |= full_row << (i * n)
                t &= t - 1
            row_single = (rmask & (rmask - 1)) == 0
            for cmask in range(1, <uint64_t>1 << n):
                if row_single and (cmask & (cmask - 1)) == 0:
                    continue
                sub = rsel & csel[cmask]
                sinks = 0
                t = sub
                while t:
                    v = _popcount((t & (~t + 1)) - 1)
                    if not (out[v] & sub):
                        sinks += 1
                    t &= t - 1
                if sinks != 1:
                    return int(rmask), int(cmask), sinks
    finally:
        free(csel)
    return None


def enumerate_uso_words(int m, int n):
    """Edge words of every (m, n)-grid USO, ascending."""
    cdef int nedges = m * (n * (n - 1) // 2) + n * (m * (m - 1) // 2)
    if m < 1 or n < 1 or m > 6 or n > 6 or nedges > 24:
        raise ValueError("compiled kernel enumerates only m, n <= 6 with <= 24 edges")

    cdef int ea[24]
    cdef int eb[24]
    cdef int e = 0
    cdef int i, j, j1, j2, i1, i2
    for i in range(m):
        for j1 in range(n - 1):
            for j2 in range(j1 + 1, n):
                ea[e] = i * n + j1
                eb[e] = i * n + j2
                e += 1
    for j in range(n):
        for i1 in range(m - 1):
            for i2 in range(i1 + 1, m):
                ea[e] = i1 * n + j
                eb[e] = i2 * n + j
                e += 1

    # Precompute subgrid vertex masks, ascending (row_mask, col_mask),
    # skipping 1x1 subgrids.
    cdef uint64_t full_row = (<uint64_t>1 << n) - 1
    cdef uint64_t col_single[16]
    for j in range(n):
        col_single[j] = 0
        for i in range(m):
            col_single[j] |= <uint64_t>1 << (i * n + j)
    cdef int nsub = ((1 << m) - 1) * ((1 << n) - 1) - m * n
    cdef uint64_t *subs = <uint64_t *>malloc(nsub * sizeof(uint64_t))
    if subs is NULL:
        raise MemoryError()
    cdef int si = 0
    cdef uint64_t rmask, cmask, rsel, csel, t
    for rmask in range(1, <uint64_t>1 << m):
        rsel = 0
        t = rmask
        while t:
            rsel |= full_row << (_popcount((t & (~t + 1)) - 1) * n)
            t &= t - 1
        for cmask in range(1, <uint64_t>1 << n):
            if (rmask & (rmask - 1)) == 0 and (cmask & (cmask - 1)) == 0:
                continue
            csel = 0
            t = cmask
            while t:
                csel |= col_single[_popcount((t & (~t + 1)) - 1)]
                t &= t - 1
            subs[si] = rsel & csel
            si += 1

    cdef uint64_t out[64]
    cdef uint64_t word, sub
    cdef int v, sinks, ok, k
    words = []
    try:
        for word in range(<uint64_t>1 << nedges):
            for v in range(m * n):
                out[v] = 0
            for e in range(nedges):
                if word >> e & 1:
                    out[ea[e]] |= <uint64_t>1 << eb[e]
                else:
                    out[eb[e]] |= <uint64_t>1 << ea[e]
            ok = 1
            for k in range(nsub):
                sub = subs[k]
                sinks = 0
                t = sub
                while t:
                    v = _popcount((t & (~t + 1)) - 1)
                    if not (out[v] & sub):
                        sinks += 1
                        if sinks > 1:
                            break
                    t &= t - 1
                if sinks != 1:
                    ok = 0
                    break
            if ok:
                words.append(int(word))
    finally:
        free(subs)
    return words
