#!/usr/bin/env python3
"""Empirical check of the intersection formula for random subsets of B_l.

Two independent Bernoulli subsets at densities d_A, d_B intersect with
density d_A + d_B - 1 when that is positive, and are almost always disjoint
when it is negative.
"""

import argparse
import csv
import sys

from freiheit.density import intersection_experiment


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m", type=int, default=2)
    parser.add_argument("--da", type=float, default=0.7)
    parser.add_argument("--db", type=float, default=0.7)
    parser.add_argument("--lengths", type=str, default="10,12,14")
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--out", type=str, default="intersection.csv")
    args = parser.parse_args()

    lengths = [int(x) for x in args.lengths.split(",")]
    rows = intersection_experiment(args.da, args.db, args.m, lengths,
                                   args.trials, args.seed)
    with open(args.out, "w") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["l", "d_A", "d_B", "trial", "size_A", "size_B",
                         "size_intersection", "density_estimate"])
        for row in rows:
            writer.writerow([row.maxlen, row.d_a, row.d_b, row.trial,
                             row.size_a, row.size_b, row.size_intersection,
                             row.density_est])
    target = args.da + args.db - 1.0
    for maxlen in lengths:
        ests = [r.density_est for r in rows if r.maxlen == maxlen]
        finite = [e for e in ests if e != float("-inf")]
        empty = len(ests) - len(finite)
        mean = sum(finite) / len(finite) if finite else float("nan")
        print(f"l={maxlen:>3}: mean intersection density {mean:.4f} "
              f"(target {target:.4f}), {empty} empty of {len(ests)}",
              file=sys.stderr)
    print(f"wrote {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
