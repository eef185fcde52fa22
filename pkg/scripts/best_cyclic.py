"""Rank every distinct cyclic [[n,k]] code by its geometric-mean MAP FER over a channel grid."""

from __future__ import annotations

import argparse

from stabsearch.channel import grid
from stabsearch.cyclic import enumerate_cyclic, to_stabilizer
from stabsearch.fer import ErrorSetCache, Kind, geometric_mean_fer
from stabsearch.pauli import cyclic_stabilizer, distance, permutation_equivalent


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=7)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--family", choices=["xz", "ad"], default="xz")
    ap.add_argument("--bound", type=float, default=0.01)
    ap.add_argument("--compare", default="XZIZXII", help="cyclic generator to test equivalence against")
    args = ap.parse_args()
    cache = ErrorSetCache()
    rows = []
    for c in enumerate_cyclic(args.n, args.k):
        s = to_stabilizer(c)
        g = geometric_mean_fer(s, grid(args.family), Kind.MAP, args.bound, cache)
        rows.append((g.value, g.bound, s))
    rows.sort(key=lambda r: (r[0], r[2].key))
    ref = cyclic_stabilizer(args.compare) if len(args.compare) == args.n else None
    for value, bound, s in rows:
        same = permutation_equivalent(s, ref) if ref is not None else None
        print(f"{value:.6e}  bound={bound:.2e}  d={distance(s)}  ~{args.compare}={same}  {s}")


if __name__ == "__main__":
    main()
