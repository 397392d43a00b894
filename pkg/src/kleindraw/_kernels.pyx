# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled face-tracing kernels (same contract as ``_kernels_py``)."""

import numpy as np
cimport numpy as cnp
from libc.string cimport memset

cnp.import_array()


cdef int _orbits(long[:] nplus, long[:] nminus, long[:] tw, unsigned char* seen, int ndarts) nogil:
    cdef int nstates = 2 * ndarts
    cdef int orbits = 0
    cdef int st, d, s, nd
    memset(seen, 0, nstates)
    for st in range(nstates):
        if seen[st]:
            continue
        orbits += 1
        while not seen[st]:
            seen[st] = 1
            d = st >> 1
            s = st & 1          # 1 means orientation -1
            s ^= tw[d >> 1]
            if s:
                nd = nminus[d]
            else:
                nd = nplus[d]
            st = (nd << 1) | s
    return orbits


def count_face_orbits(nxt_plus, nxt_minus, twisted):
    cdef long[:] np_ = np.ascontiguousarray(nxt_plus, dtype=np.int64)
    cdef long[:] nm = np.ascontiguousarray(nxt_minus, dtype=np.int64)
    cdef long[:] tw = np.ascontiguousarray(twisted, dtype=np.int64)
    cdef int ndarts = np_.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] seen = np.zeros(2 * ndarts + 1, dtype=np.uint8)
    return _orbits(np_, nm, tw, <unsigned char*> seen.data, ndarts)


def scan_euler(degrees, n_options, opt_in, opt_plus, opt_minus, masks, long m, long target_orbits):
    """Return ``(flat_index, mask)`` pairs whose orbit count equals ``target_orbits``.

    Vertex ``v`` has ``n_options[v]`` candidate rotations; option ``k`` owns
    entries ``offset_v + k*deg_v .. +deg_v`` of the ``opt_*`` tables, which
    map each incoming dart to its successor/predecessor outgoing dart.
    The flat index is mixed-radix with vertex 0 most significant.
    """
    cdef long[:] deg = np.ascontiguousarray(degrees, dtype=np.int64)
    cdef long[:] nopt = np.ascontiguousarray(n_options, dtype=np.int64)
    cdef long[:] oin = np.ascontiguousarray(opt_in, dtype=np.int64)
    cdef long[:] opl = np.ascontiguousarray(opt_plus, dtype=np.int64)
    cdef long[:] omi = np.ascontiguousarray(opt_minus, dtype=np.int64)
    cdef long[:] mk = np.ascontiguousarray(masks, dtype=np.int64)
    cdef int n = deg.shape[0]
    cdef int ndarts = 2 * m
    cdef long[:] offset = np.zeros(n, dtype=np.int64)
    cdef long[:] counter = np.zeros(n, dtype=np.int64)
    cdef long[:] nplus = np.zeros(ndarts, dtype=np.int64)
    cdef long[:] nminus = np.zeros(ndarts, dtype=np.int64)
    cdef long[:] tw = np.zeros(m, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] seen_arr = np.zeros(2 * ndarts + 1, dtype=np.uint8)
    cdef unsigned char* seen = <unsigned char*> seen_arr.data
    cdef long v, j, base, total, flat, mi, nmasks, mask, e
    cdef int changed
    out_flat = []
    out_mask = []

    base = 0
    total = 1
    for v in range(n):
        offset[v] = base
        base += nopt[v] * deg[v]
        total *= nopt[v]
    nmasks = mk.shape[0]

    for v in range(n):
        for j in range(deg[v]):
            nplus[oin[offset[v] + j]] = opl[offset[v] + j]
            nminus[oin[offset[v] + j]] = omi[offset[v] + j]

    for flat in range(total):
        if flat:
            v = n - 1
            while v >= 0:
                counter[v] += 1
                if counter[v] < nopt[v]:
                    break
                counter[v] = 0
                v -= 1
            # every vertex from v onwards changed option
            while v < n:
                if v >= 0:
                    base = offset[v] + counter[v] * deg[v]
                    for j in range(deg[v]):
                        nplus[oin[base + j]] = opl[base + j]
                        nminus[oin[base + j]] = omi[base + j]
                v += 1
        for mi in range(nmasks):
            mask = mk[mi]
            for e in range(m):
                tw[e] = (mask >> e) & 1
            if _orbits(nplus, nminus, tw, seen, ndarts) == target_orbits:
                out_flat.append(flat)
                out_mask.append(mask)
    return np.asarray(out_flat, dtype=np.int64), np.asarray(out_mask, dtype=np.int64)
