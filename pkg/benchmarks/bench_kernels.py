#!/usr/bin/env python3
"""Compare the compiled and pure-Python relation kernels.

Both backends enumerate the admissible three-term relations of each
dataset; the script checks that the outputs agree and reports the best of
``--repeat`` timings.
"""

import argparse
import sys
import time

import numpy as np

from pluckertree import _kernels_py
from pluckertree.generators import dataset
from pluckertree.gpgraph import solid_arrays
from pluckertree.solids import SolidTable

try:
    from pluckertree import _kernels
except ImportError:
    _kernels = None

DEFAULT = ["intro-example", "jockusch-d3-5", "jockusch-d3-6", "prismatoid-1039", "zheng-Z"]


def best_time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("datasets", nargs="*", default=DEFAULT)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`")
        return 1

    print(f"{'dataset':<18}{'n':>4}{'relations':>11}{'python s':>11}{'cython s':>11}{'speedup':>9}")
    for name in args.datasets:
        cx = dataset(name).complex()
        table = SolidTable(cx)
        verts = list(range(table.n))
        eps, known = solid_arrays(table, verts)
        tp, rp = best_time(lambda: _kernels_py.admissible_relations(table.n, table.d, eps, known, verts), args.repeat)
        tc, rc = best_time(lambda: _kernels.admissible_relations(table.n, table.d, eps, known, verts), args.repeat)
        if not np.array_equal(rp, rc):
            print(f"{name}: backends disagree")
            return 1
        print(f"{name:<18}{table.n:>4}{len(rc):>11}{tp:>11.3f}{tc:>11.4f}{tp / tc:>9.0f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
