"""Pure-Python face-tracing kernels; reference twin of ``_kernels.pyx``."""

from __future__ import annotations

import numpy as np


def _orbits(nplus: list[int], nminus: list[int], tw: list[int], nstates: int) -> int:
    seen = bytearray(nstates)
    orbits = 0
    for st in range(nstates):
        if seen[st]:
            continue
        orbits += 1
        while not seen[st]:
            seen[st] = 1
            d = st >> 1
            s = (st & 1) ^ tw[d >> 1]
            st = ((nminus[d] if s else nplus[d]) << 1) | s
    return orbits


def count_face_orbits(nxt_plus, nxt_minus, twisted) -> int:
    nplus = [int(x) for x in nxt_plus]
    return _orbits(nplus, [int(x) for x in nxt_minus], [int(x) for x in twisted], 2 * len(nplus))


def scan_euler(degrees, n_options, opt_in, opt_plus, opt_minus, masks, m, target_orbits):
    deg = [int(x) for x in degrees]
    nopt = [int(x) for x in n_options]
    oin = [int(x) for x in opt_in]
    opl = [int(x) for x in opt_plus]
    omi = [int(x) for x in opt_minus]
    n = len(deg)
    offset = []
    base = 0
    total = 1
    for v in range(n):
        offset.append(base)
        base += nopt[v] * deg[v]
        total *= nopt[v]
    ndarts = 2 * m
    nplus = [0] * ndarts
    nminus = [0] * ndarts
    # twist vectors are reused for every rotation choice
    twists = [[(int(mask) >> e) & 1 for e in range(m)] for mask in masks]
    mask_values = [int(x) for x in masks]
    counter = [0] * n
    out_flat: list[int] = []
    out_mask: list[int] = []
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
            for u in range(max(v, 0), n):
                b = offset[u] + counter[u] * deg[u]
                for j in range(deg[u]):
                    nplus[oin[b + j]] = opl[b + j]
                    nminus[oin[b + j]] = omi[b + j]
        for tw, mask in zip(twists, mask_values):
            if _orbits(nplus, nminus, tw, 2 * ndarts) == target_orbits:
                out_flat.append(flat)
                out_mask.append(mask)
    return np.asarray(out_flat, dtype=np.int64), np.asarray(out_mask, dtype=np.int64)
