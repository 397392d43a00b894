"""Compare the compiled and pure-Python face-tracing kernels.

    python benchmarks/bench_kernels.py            # K3,3 full scan, K5 on a mask sample
    python benchmarks/bench_kernels.py --full     # full K5 scan on both backends (slow in Python)
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from kleindraw import kernels
from kleindraw.enumeration import _kernel_tables, rotation_options, sign_masks
from kleindraw.graph import make_named
from kleindraw.rotation import _trace_arrays
from kleindraw.omega import load_omega


def _time(fn, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def scan_case(name: str, mask_limit: int | None):
    g = make_named(name)
    tables = _kernel_tables(g, rotation_options(g))
    masks = np.asarray(sign_masks(g), dtype=np.int64)
    if mask_limit is not None:
        masks = masks[:: max(1, len(masks) // mask_limit)][:mask_limit]
    target = 2 * (0 - g.n + g.m)
    return lambda mod: mod.scan_euler(*tables, masks, g.m, target), len(masks)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--full", action="store_true")
    args = ap.parse_args()
    backends = ["python"]
    try:
        kernels.backend_module("cython")
        backends.insert(0, "cython")
    except ImportError:
        print("compiled kernels unavailable; timing the Python fallback only")

    cases = []
    arrays = _trace_arrays(load_omega()[0].system)
    cases.append(("face count, one K5 system x1000", lambda mod: [mod.count_face_orbits(*arrays) for _ in range(1000)]))
    fn, k = scan_case("K33", None)
    cases.append((f"scan K3,3, {k} masks", fn))
    fn, k = scan_case("K5", None if args.full else 16)
    cases.append((f"scan K5, {k} masks", fn))

    print(f"{'case':36} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for label, fn in cases:
        times = {b: _time(lambda: fn(kernels.backend_module(b)), 1 if args.full else 3) for b in backends}
        row = " ".join(f"{times[b]:9.4f}s" for b in backends)
        speed = f"{times['python'] / times['cython']:8.1f}x" if "cython" in times else ""
        print(f"{label:36} {row} {speed}")
    # both backends must agree
    if "cython" in backends:
        for label, fn in cases[1:]:
            a, b = fn(kernels.backend_module("cython")), fn(kernels.backend_module("python"))
            assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1]), label


if __name__ == "__main__":
    main()
