#!/usr/bin/env python3
"""Plot trace CSVs produced by `impopt run` (reference script, not part of the API).

Usage: python docs/plot_traces.py results/ [--metric gap] [--out traces.png]
"""

import argparse
import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def load(directory, metric):
    curves = defaultdict(list)
    for path in sorted(Path(directory).glob("*_seed*.csv")):
        algo = path.stem.rsplit("_seed", 1)[0]
        epochs, values = [], []
        with open(path) as fh:
            for row in csv.DictReader(fh):
                if row[metric]:
                    epochs.append(float(row["epoch"]))
                    values.append(float(row[metric]))
        if values:
            curves[algo].append((epochs, values))
    return curves


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("results", help="directory written by `impopt run`")
    parser.add_argument("--metric", default="gap",
                        choices=["primal", "dual", "gap", "variance", "test_error"])
    parser.add_argument("--out", default="traces.png")
    args = parser.parse_args()

    curves = load(args.results, args.metric)
    if not curves:
        raise SystemExit(f"no rows with metric {args.metric!r} under {args.results}")
    fig, ax = plt.subplots(figsize=(6, 4))
    for algo, runs in sorted(curves.items()):
        for k, (epochs, values) in enumerate(runs):
            ax.plot(epochs, values, label=algo if k == 0 else None,
                    alpha=0.7, color=f"C{sorted(curves).index(algo)}")
    if args.metric in ("gap", "variance"):
        ax.set_yscale("log")
    ax.set_xlabel("epoch")
    ax.set_ylabel(args.metric)
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
