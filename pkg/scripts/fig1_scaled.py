"""Fraction of random codes whose MAP estimate is certified (bound <= target) versus |E| / 4^n.

Writes CSV rows (channel, error_fraction, certified_fraction) as the error set grows
one tie group of composition classes at a time.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from stabsearch.channel import ChannelSpec, resolve
from stabsearch.errorset import grow_error_sets
from stabsearch.fer import fer_map
from stabsearch.search import Constraint, random_stabilizer


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=7)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--codes", type=int, default=100)
    ap.add_argument("--channel", action="append", default=None)
    ap.add_argument("--bound", type=float, default=0.01)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--max-fraction", type=float, default=0.2)
    args = ap.parse_args()
    channels = args.channel or ["xz:p=0.01,eta=10"]
    rng = np.random.default_rng(args.seed)
    codes = [random_stabilizer(args.n, args.k, Constraint.NONE, rng) for _ in range(args.codes)]
    w = csv.writer(sys.stdout)
    w.writerow(["channel", "error_fraction", "residual", "certified_fraction"])
    for text in channels:
        ch = resolve(ChannelSpec.parse(text))
        done = np.zeros(len(codes), dtype=bool)
        for e in grow_error_sets(args.n, ch):
            frac = len(e) / 4**args.n
            if frac > args.max_fraction:
                break
            for i, s in enumerate(codes):
                if not done[i]:
                    done[i] = fer_map(s, e).bound <= args.bound
            w.writerow([text, f"{frac:.6f}", f"{e.residual:.3e}", f"{done.mean():.3f}"])
            if done.all():
                break


if __name__ == "__main__":
    main()
