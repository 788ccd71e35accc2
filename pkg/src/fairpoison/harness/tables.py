"""Turn a result store into CSV tables and plot-ready series.

Emitted deltas are always recomputed as (poisoned metric - clean metric)
from the raw records, so every number in a table can be audited against
the store.
"""

from __future__ import annotations

import csv
import io
import statistics

from ..selection import tradeoff_score
from .runner import SELECTION_PARAM_GRID

TABLE_FORMATS = ("delta-table", "tradeoff-points", "sweep-curves")

_METRIC_FIELDS = (("acc", "accuracy"), ("spd", "spd"), ("eod", "eod"))


class MissingCleanBaseline(ValueError):
    """An attack record has no matching clean record to difference against."""


def _clean_lookup(store):
    lookup = {}
    for record in store.records(kind="clean"):
        lookup[(record["dataset"], record["model"], record["seed"])] = record["metrics"]
    return lookup


def _usable_attacks(store):
    """Attack records that completed (failure records carry no metrics)."""
    return [r for r in store.records(kind="attack") if not r.get("failed")]


def _clean_for(lookup, record):
    key = (record["dataset"], record["model"], record["seed"])
    if key not in lookup:
        raise MissingCleanBaseline(f"no clean record for {key}")
    return lookup[key]


def _rows_to_csv(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def emit_table(store, fmt: str) -> str:
    """Render one of the supported table formats as CSV text."""
    if fmt == "delta-table":
        return _delta_table(store)
    if fmt == "tradeoff-points":
        return _tradeoff_points(store)
    if fmt == "sweep-curves":
        return _sweep_curves(store)
    raise ValueError(f"unknown table format {fmt!r}; expected one of {TABLE_FORMATS}")


def _delta_table(store) -> str:
    """Mean metric deltas per method at the largest epsilon in the store,
    one column per (dataset, model) pair."""
    attacks = _usable_attacks(store)
    if not attacks:
        raise ValueError("store has no attack records")
    clean = _clean_lookup(store)
    top_eps = max(r["epsilon"] for r in attacks)
    attacks = [r for r in attacks if r["epsilon"] == top_eps]

    columns = sorted({(r["dataset"], r["model"]) for r in attacks})
    methods = sorted({r["method"] for r in attacks})
    cells = {}
    for record in attacks:
        base = _clean_for(clean, record)
        for metric, field in _METRIC_FIELDS:
            delta = record["metrics"][field] - base[field]
            cells.setdefault((metric, record["method"], record["dataset"], record["model"]),
                             []).append(delta)

    header = ["metric", "method"] + [f"{d}/{m}" for d, m in columns]
    rows = []
    for metric, _ in _METRIC_FIELDS:
        for method in methods:
            row = [f"delta_{metric}", method]
            for dataset, model in columns:
                values = cells.get((metric, method, dataset, model))
                row.append(f"{statistics.fmean(values):.4f}" if values else "")
            rows.append(row)
    return _rows_to_csv(header, rows)


def _tradeoff_points(store) -> str:
    """(accuracy, EOD) pairs per record, for trade-off scatter plots."""
    attacks = _usable_attacks(store)
    if not attacks:
        raise ValueError("store has no attack records")
    _clean_lookup(store)
    header = ["dataset", "model", "method", "epsilon", "seed", "accuracy", "eod"]
    rows = [[r["dataset"], r["model"], r["method"], r["epsilon"], r["seed"],
             f"{r['metrics']['accuracy']:.4f}", f"{r['metrics']['eod']:.4f}"]
            for r in sorted(attacks, key=lambda r: (r["dataset"], r["model"],
                                                    r["method"], r["epsilon"], r["seed"]))]
    return _rows_to_csv(header, rows)


def _sweep_curves(store) -> str:
    """Seed-averaged metric deltas per epsilon, one row per curve point."""
    attacks = _usable_attacks(store)
    if not attacks:
        raise ValueError("store has no attack records")
    clean = _clean_lookup(store)
    series = {}
    for record in attacks:
        base = _clean_for(clean, record)
        for metric, field in _METRIC_FIELDS:
            key = (record["dataset"], record["model"], record["method"], metric,
                   record["epsilon"])
            series.setdefault(key, []).append(record["metrics"][field] - base[field])

    header = ["dataset", "model", "method", "metric", "epsilon", "mean_delta", "n_seeds"]
    rows = []
    for key in sorted(series):
        values = series[key]
        rows.append([*key, f"{statistics.fmean(values):.4f}", len(values)])
    return _rows_to_csv(header, rows)


def emit_ablation(store, kind: str, methods) -> str:
    """Paired comparison CSV for one ablation's method variants."""
    if kind == "selection-params":
        return _selection_params_table(store)
    clean = _clean_lookup(store)
    by_key = {}
    for record in _usable_attacks(store):
        if record["method"] not in methods:
            continue
        base = _clean_for(clean, record)
        key = (record["dataset"], record["model"], record["epsilon"], record["seed"])
        deltas = {f"{m}_{record['method']}": record["metrics"][f] - base[f]
                  for m, f in _METRIC_FIELDS}
        by_key.setdefault(key, {}).update(deltas)

    header = ["dataset", "model", "epsilon", "seed"]
    for metric, _ in _METRIC_FIELDS:
        for method in methods:
            header.append(f"delta_{metric}_{method}")
    rows = []
    for key in sorted(by_key):
        row = list(key)
        for metric, _ in _METRIC_FIELDS:
            for method in methods:
                value = by_key[key].get(f"{metric}_{method}")
                row.append("" if value is None else f"{value:.4f}")
        rows.append(row)
    return _rows_to_csv(header, rows)


def reselect_with_params(record, alpha: float, beta: float) -> dict:
    """Re-rank one run's stored candidate pool under different (alpha, beta).

    Selection is a pure function of the per-candidate score components, so
    ablating the trade-off parameters needs no retraining.
    """
    best_index, best_value = None, None
    for i, cand in enumerate(record["candidates"]):
        if i in set(record.get("failed_candidates", ())):
            continue
        value = tradeoff_score(cand["delta_fair"], cand["delta_perf"], alpha, beta)
        if best_value is None or value > best_value:
            best_index, best_value = i, value
    chosen = record["candidates"][best_index]
    return {"chosen_index": best_index, "accuracy": chosen["accuracy"],
            "spd": chosen["spd"], "eod": chosen["eod"]}


def _selection_params_table(store) -> str:
    attacks = [r for r in _usable_attacks(store) if r["method"] == "pfa"]
    if not attacks:
        raise ValueError("selection-params ablation needs stored pfa records")
    header = ["dataset", "model", "epsilon", "seed", "alpha", "beta",
              "chosen_index", "accuracy", "spd", "eod"]
    rows = []
    for record in sorted(attacks, key=lambda r: (r["dataset"], r["model"],
                                                 r["epsilon"], r["seed"])):
        for alpha, beta in SELECTION_PARAM_GRID:
            pick = reselect_with_params(record, alpha, beta)
            rows.append([record["dataset"], record["model"], record["epsilon"],
                         record["seed"], alpha, beta, pick["chosen_index"],
                         f"{pick['accuracy']:.4f}", f"{pick['spd']:.4f}",
                         f"{pick['eod']:.4f}"])
    return _rows_to_csv(header, rows)
