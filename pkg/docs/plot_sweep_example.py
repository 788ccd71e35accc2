#!/usr/bin/env python3
"""Example: render sweep curves emitted by `fairpoison table --kind sweep-curves`.

The harness deliberately emits data only; this script shows one way to turn
the CSV into figures. Requires matplotlib (not a package dependency).

Usage:
    fairpoison table --store results.jsonl --kind sweep-curves --out sweeps.csv
    python docs/plot_sweep_example.py sweeps.csv eod out/
"""

import csv
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib.pyplot as plt


def main(csv_path, metric, out_dir):
    series = defaultdict(list)
    with open(csv_path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["metric"] != metric:
                continue
            key = (row["dataset"], row["model"])
            series[key].append((row["method"], float(row["epsilon"]),
                                float(row["mean_delta"])))

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for (dataset, model), points in sorted(series.items()):
        by_method = defaultdict(list)
        for method, eps, value in points:
            by_method[method].append((eps, value))
        fig, ax = plt.subplots(figsize=(4, 3))
        for method, curve in sorted(by_method.items()):
            curve.sort()
            ax.plot([e for e, _ in curve], [v for _, v in curve],
                    marker="o", label=method)
        ax.set_xlabel("poisoning budget (epsilon)")
        ax.set_ylabel(f"mean delta {metric.upper()}")
        ax.set_title(f"{dataset} / {model}")
        ax.legend(fontsize=7)
        fig.tight_layout()
        target = out / f"sweep_{metric}_{dataset}_{model}.png"
        fig.savefig(target, dpi=150)
        plt.close(fig)
        print(f"wrote {target}")


if __name__ == "__main__":
    if len(sys.argv) != 4:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2], sys.argv[3])
