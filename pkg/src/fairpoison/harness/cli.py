"""Command-line experiment driver.

Subcommands::

    fairpoison synth  --out DIR [--seed N]          write stand-in benchmark CSVs + config
    fairpoison attack --config PATH --dataset D --model M --method X --epsilon E [--seed N]
    fairpoison grid   --config PATH [--store PATH] [--jobs N]
    fairpoison ablate --config PATH --kind K [--store PATH]
    fairpoison table  --store PATH --kind K [--format {csv,json}] [--out PATH]
    fairpoison verify-theory [--out DIR] [--seed N]
"""

from __future__ import annotations

import argparse
import csv as _csv
import io
import json
import math
import os
import sys

import numpy as np


def _add_common(parser):
    parser.add_argument("--config", help="harness config file")
    parser.add_argument("--store", help="result store path (overrides config)")
    parser.add_argument("--jobs", type=int, help="parallel worker processes")
    parser.add_argument("--seed", type=int, help="master seed (overrides config)")


def build_parser():
    parser = argparse.ArgumentParser(prog="fairpoison",
                                     description="fairness-poisoning experiment driver")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write stand-in benchmark CSVs and a starter config")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("attack", help="run a single (dataset, model, method, epsilon) cell")
    _add_common(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--method", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--cell-seed", type=int, default=0, dest="cell_seed",
                   help="seed index within the cell")
    p.add_argument("--export", help="write the chosen candidate to PREFIX.csv "
                                    "and its build trace to PREFIX.trace.json")

    p = sub.add_parser("grid", help="run the full experiment grid (resumable)")
    _add_common(p)

    p = sub.add_parser("ablate", help="run one ablation's paired variants")
    _add_common(p)
    p.add_argument("--kind", required=True,
                   choices=("guide-yhat-vs-y", "sample-vs-uniform", "selection-params"))
    p.add_argument("--out", help="write the paired comparison CSV here")

    p = sub.add_parser("table", help="emit tables from a result store")
    p.add_argument("--store", required=True)
    p.add_argument("--kind", required=True,
                   choices=("delta-table", "tradeoff-points", "sweep-curves"))
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("verify-theory", help="run the naive-Bayes convergence oracles")
    p.add_argument("--out", help="directory for convergence-trace CSVs")
    p.add_argument("--seed", type=int, default=0)

    return parser


def _load_config(args):
    from .config import ConfigError, parse_config

    if not args.config:
        raise ConfigError("--config is required for this command")
    config = parse_config(args.config)
    if args.store:
        config.store_path = args.store
    if args.jobs:
        config.jobs = args.jobs
    if args.seed is not None:
        config.master_seed = args.seed
    return config


def cmd_synth(args):
    from ..benchmarks import BENCHMARK_NAMES, write_benchmark_csv
    from .config import default_config_text

    os.makedirs(args.out, exist_ok=True)
    for name in BENCHMARK_NAMES:
        path = os.path.join(args.out, f"{name}.csv")
        write_benchmark_csv(name, path, seed=args.seed)
        print(f"wrote {path}")
    config_path = os.path.join(args.out, "experiment.ini")
    with open(config_path, "w", encoding="utf-8") as fh:
        fh.write(default_config_text())
    print(f"wrote {config_path}")
    return 0


def cmd_attack(args):
    from .runner import prepare_splits, run_cell
    from .store import ResultStore, record_key

    config = _load_config(args)
    attack_record, clean_record, result = run_cell(
        config, args.dataset, args.model, args.method, args.epsilon,
        args.cell_seed, with_result=True)
    store = ResultStore(config.store_path)
    for record in (attack_record, clean_record):
        if record_key(record) not in store:
            store.append(record)
    if args.export:
        train, _, _ = prepare_splits(config, args.dataset, args.cell_seed)
        result.chosen.export(train.schema, f"{args.export}.csv",
                             f"{args.export}.trace.json")
        print(f"wrote {args.export}.csv and {args.export}.trace.json")
    m = attack_record["metrics"]
    print(json.dumps({
        "dataset": args.dataset, "model": args.model, "method": args.method,
        "epsilon": args.epsilon, "seed": args.cell_seed,
        "accuracy": m["accuracy"], "spd": m["spd"], "eod": m["eod"],
        "delta_accuracy": m["delta_accuracy"], "delta_spd": m["delta_spd"],
        "delta_eod": m["delta_eod"], "wall_time": attack_record["wall_time"],
    }, indent=2))
    return 0


def cmd_grid(args):
    from .runner import run_grid

    config = _load_config(args)
    store = run_grid(config, progress=print)
    print(f"store {config.store_path} now holds {len(store)} record(s)")
    return 0


def cmd_ablate(args):
    from .runner import ABLATION_KINDS, run_ablation
    from .tables import emit_ablation

    config = _load_config(args)
    store = run_ablation(args.kind, config, progress=print)
    text = emit_ablation(store, args.kind, ABLATION_KINDS[args.kind])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _csv_to_json(text):
    rows = list(_csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    return json.dumps([dict(zip(header, row)) for row in body], indent=2)


def cmd_table(args):
    from .store import ResultStore
    from .tables import emit_table

    store = ResultStore(args.store)
    text = emit_table(store, args.kind)
    if args.format == "json":
        text = _csv_to_json(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _theory_base(seed):
    """Small categorical base with every (S, Y) cell populated."""
    from ..data import CATEGORICAL, Feature, FeatureSchema, TabularDataset

    rng = np.random.default_rng(seed)
    n = 20
    schema = FeatureSchema(tuple(Feature(f"x{j}", CATEGORICAL, values=(0, 1))
                                 for j in range(3)))
    X = np.empty((n, 3), dtype=object)
    for i in range(n):
        X[i] = tuple(int(v) for v in rng.integers(0, 2, size=3))
    s = rng.integers(0, 2, size=n)
    y = rng.integers(0, 2, size=n)
    s[:4] = [1, 1, 0, 0]
    y[:4] = [1, 0, 1, 0]
    return TabularDataset(X, s, y, schema)


def cmd_verify_theory(args):
    from ..nb_theory import (GroupLabelCounts, divergence_threshold,
                             posterior_ratio_after, trace_to_csv,
                             verify_injection_monotonicity, trace_unfairness_convergence,
                             trace_uniformity_convergence)

    base = _theory_base(args.seed)
    failures = 0

    trace1 = trace_unfairness_convergence(base, step_size=20, steps=100, seed=args.seed)
    ok = trace1[-1].fraction_unfair == 1.0
    failures += not ok
    print(f"[{'PASS' if ok else 'FAIL'}] balanced injection drives predictions to Yhat=S "
          f"(final fraction {trace1[-1].fraction_unfair:.3f} after {trace1[-1].k_total} samples)")

    balanced = [t for t in trace1 if t.balanced]
    ok = bool(balanced) and all(t.prior_ratio == 1 for t in balanced)
    failures += not ok
    print(f"[{'PASS' if ok else 'FAIL'}] class priors are exactly balanced on "
          f"{len(balanced)}/{len(trace1)} steps")

    counts = GroupLabelCounts.from_dataset(base)
    k_star = divergence_threshold(counts, 1, bound=100)
    ratio = posterior_ratio_after(counts, 1, k_star)
    ok = ratio == math.inf or ratio > 100
    failures += not ok
    print(f"[{'PASS' if ok else 'FAIL'}] group posterior ratio exceeds 100 at k={k_star}")

    trace2 = trace_uniformity_convergence(base, s=1, steps=100, seed=args.seed)
    ok = trace2[-1].max_conditional_dev < 0.05
    failures += not ok
    print(f"[{'PASS' if ok else 'FAIL'}] conditional likelihoods within "
          f"{trace2[-1].max_conditional_dev:.4f} of uniform after {trace2[-1].k_total} samples")

    checks = [verify_injection_monotonicity(base, (tuple(base.X[i]), int(base.S[i]), int(base.Y[i])))
              for i in range(len(base))]
    usable = [c for c in checks if not c.skipped]
    ok = all(c.holds for c in usable)
    failures += not ok
    print(f"[{'PASS' if ok else 'FAIL'}] sample injection moves both scores strictly "
          f"({len(usable)}/{len(checks)} rows in the exact-count regime)")

    if args.out:
        os.makedirs(args.out, exist_ok=True)
        trace_to_csv(trace1, os.path.join(args.out, "unfairness_trace.csv"))
        trace_to_csv(trace2, os.path.join(args.out, "uniformity_trace.csv"))
        print(f"wrote traces to {args.out}")
    return 1 if failures else 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    handlers = {
        "synth": cmd_synth,
        "attack": cmd_attack,
        "grid": cmd_grid,
        "ablate": cmd_ablate,
        "table": cmd_table,
        "verify-theory": cmd_verify_theory,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
