"""Compare the compiled and pure-Python kernels on realistic workloads.

Run with ``python benchmarks/bench_kernels.py``.
"""
from __future__ import annotations

import argparse
import time

from cayleykit._kernels import _pykernels
from cayleykit.cayley import affine_functionals
from cayleykit.catalog import fano, simplex

try:
    from cayleykit._kernels import _ckernels
except ImportError:
    _ckernels = None


def _workloads():
    cfg = fano()
    for d in (2, 3, 4):
        gens = affine_functionals(cfg.full_face, d)
        yield f"fano multisets d={d}", "multisets_summing_to", (gens, tuple([d] * len(cfg)))
    cfg = simplex(3)
    gens = affine_functionals(cfg.full_face, 4)
    yield "simplex3 multisets d=4", "multisets_summing_to", (gens, tuple([4] * len(cfg)))
    # column assignment: merge a length-11 structure into a length-3 one
    src = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)] * 3
    tgt = [(3, 0, 0, 0), (0, 3, 0, 0), (0, 0, 3, 3)]
    yield "assign 12 -> 3", "assign_columns", (src, tgt)
    bad = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)] * 3
    yield "assign 12 -> 3 (infeasible)", "assign_columns", (bad, [(2, 1, 0, 0), (1, 2, 0, 0), (0, 0, 3, 3)])


def _time(fn, args, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; only the Python timings are shown")
    print(f"{'workload':32} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, op, call in _workloads():
        tp, rp = _time(getattr(_pykernels, op), call, args.repeat)
        if _ckernels is None:
            print(f"{name:32} {tp:10.4f} {'-':>10} {'-':>8}")
            continue
        tc, rc = _time(getattr(_ckernels, op), call, args.repeat)
        assert rp == rc, f"backends disagree on {name}"
        print(f"{name:32} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
