"""Grid execution: seed derivation, split preparation, cell runs, resumption."""

from __future__ import annotations

import hashlib
import time
from concurrent.futures import ProcessPoolExecutor

from ..attacks import AttackConfig, run_attack
from ..benchmarks import load_benchmark
from ..data import load_csv, split
from .config import DatasetSource, HarnessConfig
from .store import ResultStore

ABLATION_KINDS = {
    "guide-yhat-vs-y": ("pfa", "pfa-y"),
    "sample-vs-uniform": ("pfa", "pfa-uniform"),
    "selection-params": ("pfa",),
}

SELECTION_PARAM_GRID = ((0.1, 0.1), (0.5, 0.5), (2.0, 2.0))

_dataset_cache = {}


def derive_seed(master_seed, *parts) -> int:
    """Stable per-cell seed from the master seed and grid coordinates."""
    text = "|".join([str(master_seed), *map(str, parts)])
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def load_source(source: DatasetSource):
    key = (source.name, source.synthetic, source.path, source.generation_seed)
    if key not in _dataset_cache:
        if source.synthetic is not None:
            _dataset_cache[key] = load_benchmark(source.synthetic, seed=source.generation_seed)
        else:
            _dataset_cache[key] = load_csv(source.path, source.roles)
    return _dataset_cache[key]


def prepare_splits(config: HarnessConfig, dataset_name: str, seed: int):
    """(train, eval, test) splits for one dataset and seed index.

    Splits depend on (master seed, dataset, seed index) only, so every
    method sees identical data within a cell and deltas are comparable.
    """
    full = load_source(config.source(dataset_name))
    settings = config.attack
    train_big, test = split(full, settings.train_fraction,
                            derive_seed(config.master_seed, dataset_name, seed, "split"))
    train, eval_data = split(train_big, 1.0 - settings.eval_fraction,
                             derive_seed(config.master_seed, dataset_name, seed, "eval"))
    return train, eval_data, test


def _candidate_payload(score):
    return {
        "accuracy": score.accuracy, "spd": score.spd, "eod": score.eod,
        "delta_perf": score.delta_perf, "delta_fair": score.delta_fair,
        "perf_penalized": bool(score.perf_penalized), "tradeoff": score.tradeoff,
    }


def _provenance_summary(candidate):
    sources = {}
    for src in candidate.provenance:
        sources[src] = sources.get(src, 0) + 1
    groups = {"0": int((candidate.S == 0).sum()), "1": int((candidate.S == 1).sum())}
    return {"n_rows": len(candidate), "sources": sources, "groups": groups,
            "failed": bool(candidate.failed)}


def run_cell(config: HarnessConfig, dataset: str, model: str, method: str,
             epsilon: float, seed: int, with_result: bool = False):
    """Execute one grid cell; returns (attack_record, clean_record).

    With ``with_result`` the raw AttackRunResult is appended to the tuple,
    giving access to the chosen candidate itself (for exports).
    """
    train, eval_data, test = prepare_splits(config, dataset, seed)
    settings = config.attack
    attack_config = AttackConfig(
        epsilon=epsilon,
        n_candidates=config.grid.n_candidates,
        n_batches=settings.n_batches,
        alpha=settings.alpha,
        beta=settings.beta,
        surrogate=settings.surrogate,
        seed=derive_seed(config.master_seed, dataset, model, method, round(epsilon, 9), seed),
    )
    started = time.perf_counter()
    result = run_attack(method, train, eval_data, test, model, attack_config)
    elapsed = time.perf_counter() - started

    attack_record = {
        "kind": "attack", "dataset": dataset, "model": model, "method": method,
        "epsilon": float(epsilon), "seed": seed, "wall_time": elapsed,
        "metrics": result.poisoned_test.as_dict(),
        "clean_eval": result.clean_eval.as_dict(),
        "baseline": {"perf_bar": result.baseline.perf_bar,
                     "fair_bar": result.baseline.fair_bar,
                     "degenerate": result.baseline.degenerate},
        "chosen_index": result.chosen_index,
        "candidates": [_candidate_payload(s) for s in result.candidate_scores],
        "failed_candidates": list(result.failed_candidates),
        "provenance": _provenance_summary(result.chosen),
        "n_train": len(train), "n_eval": len(eval_data), "n_test": len(test),
    }
    clean_record = {
        "kind": "clean", "dataset": dataset, "model": model, "seed": seed,
        "metrics": result.clean_test.as_dict(),
    }
    if with_result:
        return attack_record, clean_record, result
    return attack_record, clean_record


def _failure_record(cell, exc):
    dataset, model, method, epsilon, seed = cell
    return {"kind": "attack", "dataset": dataset, "model": model, "method": method,
            "epsilon": float(epsilon), "seed": seed, "failed": True,
            "error": f"{type(exc).__name__}: {exc}"}


def _execute(args):
    config, cell = args
    try:
        return cell, run_cell(config, *cell), None
    except Exception as exc:  # per-cell failures are recorded, the run continues
        return cell, None, exc


def run_grid(config: HarnessConfig, store: ResultStore | None = None,
             cells=None, progress=None) -> ResultStore:
    """Run every missing grid cell; existing records are never recomputed.

    A clean-model record per (dataset, model, seed) is stored alongside the
    attack records. A cell that raises is persisted as a failure record and
    the run continues. With ``config.jobs > 1`` cells run in worker
    processes; records land in completion order but their contents are
    seed-derived and order-independent.
    """
    if store is None:
        store = ResultStore(config.store_path)
    todo = []
    for cell in (cells if cells is not None else config.grid.cells()):
        dataset, model, method, epsilon, seed = cell
        key = ("attack", dataset, model, method, round(float(epsilon), 9), seed)
        if key not in store:
            todo.append(cell)
    if progress:
        progress(f"{len(todo)} cell(s) to run, {len(store)} record(s) already present")

    def consume(cell, outcome, error):
        if error is not None:
            store.append(_failure_record(cell, error))
            if progress:
                progress(f"FAILED {cell}: {error}")
            return
        attack_record, clean_record = outcome
        store.append(attack_record)
        clean_key = ("clean", clean_record["dataset"], clean_record["model"], clean_record["seed"])
        if clean_key not in store:
            store.append(clean_record)
        if progress:
            m = attack_record["metrics"]
            progress(f"done {cell}: dacc={m.get('delta_accuracy', 0):+.3f} "
                     f"dspd={m.get('delta_spd', 0):+.3f} deod={m.get('delta_eod', 0):+.3f} "
                     f"({attack_record['wall_time']:.1f}s)")

    if config.jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            for cell, outcome, error in pool.map(_execute, [(config, c) for c in todo]):
                consume(cell, outcome, error)
    else:
        for cell in todo:
            cell_result, cell_error = None, None
            try:
                cell_result = run_cell(config, *cell)
            except Exception as exc:
                cell_error = exc
            consume(cell, cell_result, cell_error)
    return store


def ablation_cells(kind: str, config: HarnessConfig):
    """Grid cells for one ablation: paired method variants, shared seeds."""
    if kind not in ABLATION_KINDS:
        raise ValueError(f"unknown ablation {kind!r}; expected one of {sorted(ABLATION_KINDS)}")
    methods = ABLATION_KINDS[kind]
    cells = []
    for dataset in config.grid.datasets:
        for model in config.grid.models:
            for epsilon in config.grid.epsilons:
                for seed in config.grid.seeds:
                    for method in methods:
                        cells.append((dataset, model, method, epsilon, seed))
    return cells


def run_ablation(kind: str, config: HarnessConfig, store: ResultStore | None = None,
                 progress=None) -> ResultStore:
    """Run the paired variants an ablation needs (reusing existing records)."""
    return run_grid(config, store=store, cells=ablation_cells(kind, config),
                    progress=progress)
