#!/usr/bin/env python3
"""Plot normalized-distance trajectories from one or more run CSVs.

usage: python3 docs/plot_trajectories.py out/sec6.csv [more.csv ...]
"""

import csv
import sys

import matplotlib.pyplot as plt


def load(path):
    with open(path) as f:
        rows = list(csv.DictReader(f))
    k = [int(r["k"]) for r in rows]
    nd = [float(r["normalized_dist"]) for r in rows]
    return k, nd


def main(paths):
    if not paths:
        sys.exit(__doc__)
    for path in paths:
        k, nd = load(path)
        label = path.rsplit("/", 1)[-1].removesuffix(".csv")
        plt.semilogy(k, [max(v, 1e-17) for v in nd], label=label)
    plt.xlabel("iteration k")
    plt.ylabel("normalized distance to consensus on the stable set")
    plt.legend()
    plt.grid(True, which="both", alpha=0.3)
    plt.tight_layout()
    plt.show()


if __name__ == "__main__":
    main(sys.argv[1:])
