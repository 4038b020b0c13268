"""Compare the compiled and pure-Python lattice-point box scans.

Run with ``python benchmarks/bench_kernels.py``. Each workload is the
facet data of a polytope from the toolkit; both backends must return the
same points, and the script prints the best-of-N wall time of each.
"""

from __future__ import annotations

import argparse
import itertools
import timeit

from fanovol import kernels
from fanovol.construct import reflexive_R
from fanovol.polytope import _bounding_box, dual, hull


def scan_args(P, strict):
    lo, hi = _bounding_box(P)
    offsets = [c for c, _ in P.facet_rows]
    normals = [list(a) for _, a in P.facet_rows]
    return offsets, normals, [strict] * len(offsets), lo, hi


def workloads():
    cube = hull(list(itertools.product([-6, 6], repeat=4)))
    yield "cube [-6,6]^4, all points", scan_args(cube, False)
    yield "R_5, all points", scan_args(reflexive_R(5), False)
    yield "R_6, interior points", scan_args(reflexive_R(6), True)
    yield "dual(R_4) scaled by 3, all points", scan_args(hull([tuple(3 * x for x in v) for v in dual(reflexive_R(4)).vertices]), False)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.BACKEND != "cython":
        print("compiled kernel not built; only the Python backend is available")
    print(f"{'workload':40s} {'points':>9s} {'python s':>9s} {'cython s':>9s} {'speedup':>8s}")
    for name, data in workloads():
        ref = kernels.box_scan(*data, backend="python")
        t_py = min(timeit.repeat(lambda: kernels.box_scan(*data, backend="python"), number=1, repeat=args.repeat))
        if kernels.BACKEND == "cython":
            got = kernels.box_scan(*data, backend="cython")
            assert list(got) == list(ref), name
            t_c = min(timeit.repeat(lambda: kernels.box_scan(*data, backend="cython"), number=1, repeat=args.repeat))
            print(f"{name:40s} {len(ref):9d} {t_py:9.4f} {t_c:9.4f} {t_py / t_c:8.1f}")
        else:
            print(f"{name:40s} {len(ref):9d} {t_py:9.4f} {'-':>9s} {'-':>8s}")


if __name__ == "__main__":
    main()
