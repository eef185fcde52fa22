"""Cyclic stabilizer code counts per (n, k): all, single generator, weight four, CSS, linear.

Each cell prints as ``inequivalent (distinct)``; inequivalent counts are only
computed up to --equiv-max-n since the permutation search grows quickly.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

from stabsearch.cyclic import enumerate_cyclic, has_single_generator, to_stabilizer
from stabsearch.pauli import classify_structure, equivalence_classes

COLUMNS = ("cyc", "one_gen", "weight4", "css", "linear")


def cell_counts(n: int, k: int, with_equivalence: bool):
    codes = enumerate_cyclic(n, k)
    stabs = [to_stabilizer(c) for c in codes]
    reps = [classify_structure(s) for s in stabs]
    flags = [
        [True] * len(codes),
        [has_single_generator(c)[0] for c in codes],
        [r.has_weight4_rep for r in reps],
        [r.is_css for r in reps],
        [r.is_linear for r in reps],
    ]
    classes = equivalence_classes(stabs) if with_equivalence else None
    out = []
    for f in flags:
        distinct = sum(f)
        inequivalent = sum(1 for c in classes if f[c[0]]) if classes is not None else None
        out.append((inequivalent, distinct))
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-min", type=int, default=5)
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--k-max", type=int, default=3)
    ap.add_argument("--equiv-max-n", type=int, default=9)
    args = ap.parse_args()
    w = csv.writer(sys.stdout)
    w.writerow(["n", "k", *COLUMNS, "seconds"])
    for n in range(args.n_min, args.n_max + 1):
        for k in range(1, args.k_max + 1):
            t0 = time.perf_counter()
            cells = cell_counts(n, k, n <= args.equiv_max_n)
            text = [f"{i} ({d})" if i is not None else f"? ({d})" for i, d in cells]
            w.writerow([n, k, *text, f"{time.perf_counter() - t0:.1f}"])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
