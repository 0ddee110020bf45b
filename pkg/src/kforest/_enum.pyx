# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Native edge-subset enumeration for the exact oracle.

Same contract and search order as :func:`kforest._enum_py.enumerate_profile`:
depth-first over edges (exclude, then include), skipping edges that would
close a cycle.
"""
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

ctypedef unsigned long long u64


cdef inline bint lex_less(u64 a, u64 b) noexcept nogil:
    # sorted-index-tuple order on edge sets given as bitmasks
    cdef u64 d = a ^ b
    cdef u64 x, above
    if d == 0:
        return False
    x = d & (~d + 1)
    above = ~((x << 1) - 1)
    if a & x:
        return (b & above) != 0
    return (a & above) == 0


cdef struct Ctx:
    int n
    int E
    int m
    int* eu
    int* ev
    long long* ec
    int* ds
    int* dt
    int* labels      # (E + 1) rows of n + 1 component labels
    long long* best
    u64* best_mask


cdef void rec(Ctx* c, int i, u64 mask, long long cost) noexcept nogil:
    cdef int* lab = c.labels + i * (c.n + 1)
    cdef int* nxt
    cdef int j, a, b, bad
    if i == c.E:
        bad = 0
        for j in range(c.m):
            if lab[c.ds[j]] != lab[c.dt[j]]:
                bad += 1
        if c.best[bad] < 0 or cost < c.best[bad] or (cost == c.best[bad] and lex_less(mask, c.best_mask[bad])):
            c.best[bad] = cost
            c.best_mask[bad] = mask
        return
    nxt = lab + (c.n + 1)
    memcpy(nxt, lab, (c.n + 1) * sizeof(int))
    rec(c, i + 1, mask, cost)
    a = lab[c.eu[i]]
    b = lab[c.ev[i]]
    if a != b:
        for j in range(c.n + 1):
            nxt[j] = a if lab[j] == b else lab[j]
        rec(c, i + 1, mask | ((<u64>1) << i), cost + c.ec[i])


def enumerate_profile(int n, us, vs, costs, ss, ts):
    cdef Ctx c
    cdef int i
    c.n = n
    c.E = len(us)
    c.m = len(ss)
    if c.E > 62:
        raise ValueError("too many edges for the native kernel")
    c.eu = <int*>malloc((c.E + 1) * sizeof(int))
    c.ev = <int*>malloc((c.E + 1) * sizeof(int))
    c.ec = <long long*>malloc((c.E + 1) * sizeof(long long))
    c.ds = <int*>malloc((c.m + 1) * sizeof(int))
    c.dt = <int*>malloc((c.m + 1) * sizeof(int))
    c.labels = <int*>malloc((c.E + 1) * (n + 1) * sizeof(int))
    c.best = <long long*>malloc((c.m + 1) * sizeof(long long))
    c.best_mask = <u64*>malloc((c.m + 1) * sizeof(u64))
    try:
        for i in range(c.E):
            c.eu[i] = us[i]
            c.ev[i] = vs[i]
            c.ec[i] = costs[i]
        for i in range(c.m):
            c.ds[i] = ss[i]
            c.dt[i] = ts[i]
        for i in range(c.m + 1):
            c.best[i] = -1
            c.best_mask[i] = 0
        for i in range(n + 1):
            c.labels[i] = i
        with nogil:
            rec(&c, 0, 0, 0)
        return [c.best[i] for i in range(c.m + 1)], [c.best_mask[i] for i in range(c.m + 1)]
    finally:
        free(c.eu); free(c.ev); free(c.ec); free(c.ds); free(c.dt)
        free(c.labels); free(c.best); free(c.best_mask)
