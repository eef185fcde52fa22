"""Percentile objective traces of hill climbing under each mutation type.

Writes CSV rows (mutation, iteration, objective) for a shared seed bank.
"""

from __future__ import annotations

import argparse
import csv
import sys

from stabsearch.channel import ChannelSpec
from stabsearch.search import Mutation, SearchConfig, hill_climb


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=9)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--restarts", type=int, default=100)
    ap.add_argument("--iterations", type=int, default=300)
    ap.add_argument("--channel", default="xz:p=0.01,eta=10")
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    w = csv.writer(sys.stdout)
    w.writerow(["mutation", "iteration", "objective"])
    for m in Mutation:
        cfg = SearchConfig(
            args.n, args.k, args.restarts, args.iterations, [ChannelSpec.parse(args.channel)],
            mutation=m, seed=args.seed, workers=args.workers,
        )  # fmt: skip
        res = hill_climb(cfg)
        for i, v in enumerate(res.trace):
            w.writerow([m.value, i, repr(v)])
        print(f"{m.value}: final {res.trace[-1]:.4g}, best MAP {res.final_fer_map.value:.4g} {res.best_stabilizer}", file=sys.stderr)


if __name__ == "__main__":
    main()
