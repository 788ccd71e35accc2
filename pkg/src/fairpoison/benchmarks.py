"""Synthetic stand-ins for the German / Drug / COMPAS fairness benchmarks.

The original benchmark files are not redistributable with this package, so
these generators produce datasets matching the published summary statistics
(sample counts, group sizes, positive rates per group, post-encoding
feature counts) with label- and group-correlated feature structure, giving
the attacks and baselines realistic room to move the fairness metrics. Any
conforming CSV can be swapped in through the harness config.

Full-file sizes are chosen so an 80/20 split reproduces the published
train-split sizes (German 800, Drug 1500, COMPAS 5771).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .data import ColumnRoles, TabularDataset, build_dataset

# (s, y) -> row count for the full file; proportions mirror the published
# train-split statistics, scaled by 1/0.8 and rounded to whole samples.
_CELLS = {
    "german": {(1, 1): 116, (1, 0): 203, (0, 1): 182, (0, 0): 499},
    "drug": {(1, 1): 601, (1, 0): 340, (0, 1): 431, (0, 0): 503},
    "compas": {(1, 1): 896, (1, 0): 473, (0, 1): 3075, (0, 0): 2770},
}

# categorical value-set sizes and continuous feature counts chosen so the
# one-hot encoded width matches the published feature counts (58 / 13 / 8)
_SHAPES = {
    "german": {"categorical_sizes": (4, 5, 10, 5, 5, 3, 4, 3, 3, 4, 2, 2), "n_continuous": 8},
    "drug": {"categorical_sizes": (), "n_continuous": 13},
    "compas": {"categorical_sizes": (2, 3), "n_continuous": 3},
}

# feature signal strengths: label separation, group shift, categorical tilts
_SIGNAL = {
    "german": {"wy": (0.5, 1.1), "ws": 0.30, "cat_y": 1.1, "cat_s": 0.35},
    "drug": {"wy": (0.45, 1.0), "ws": 0.25, "cat_y": 1.0, "cat_s": 0.3},
    "compas": {"wy": (0.55, 1.2), "ws": 0.30, "cat_y": 1.2, "cat_s": 0.35},
}

BENCHMARK_NAMES = tuple(sorted(_CELLS))


@dataclass(frozen=True)
class _Params:
    cont_wy: np.ndarray
    cont_ws: np.ndarray
    cont_offset: np.ndarray
    cont_scale: np.ndarray
    cat_y_logits: tuple
    cat_s_logits: tuple


def _param_rng(name):
    digest = hashlib.sha256(name.encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "big"))


def _parameters(name) -> _Params:
    shape = _SHAPES[name]
    signal = _SIGNAL[name]
    rng = _param_rng(name)
    k = shape["n_continuous"]
    lo, hi = signal["wy"]
    signs = rng.choice((-1.0, 1.0), size=k)
    return _Params(
        cont_wy=signs * rng.uniform(lo, hi, size=k),
        cont_ws=rng.uniform(-signal["ws"], signal["ws"], size=k),
        cont_offset=rng.uniform(0.0, 20.0, size=k),
        cont_scale=rng.uniform(0.5, 5.0, size=k),
        cat_y_logits=tuple(rng.uniform(-signal["cat_y"], signal["cat_y"], size=m)
                           for m in shape["categorical_sizes"]),
        cat_s_logits=tuple(rng.uniform(-signal["cat_s"], signal["cat_s"], size=m)
                           for m in shape["categorical_sizes"]),
    )


def benchmark_roles(name: str) -> ColumnRoles:
    shape = _SHAPES[name]
    return ColumnRoles(
        sensitive="group",
        label="outcome",
        categorical=tuple(f"cat{j}" for j in range(len(shape["categorical_sizes"]))),
        continuous=tuple(f"num{j}" for j in range(shape["n_continuous"])),
    )


def _sample_categorical(rng, m, y_logits, s_logits, s, y, count):
    logits = y * y_logits + s * s_logits
    p = np.exp(logits - logits.max())
    p /= p.sum()
    return rng.choice(m, size=count, p=p)


def generate_rows(name: str, seed: int = 0):
    """(header, rows-of-strings) for one stand-in benchmark, deterministically."""
    if name not in _CELLS:
        raise ValueError(f"unknown benchmark {name!r}; expected one of {BENCHMARK_NAMES}")
    cells = _CELLS[name]
    shape = _SHAPES[name]
    params = _parameters(name)
    roles = benchmark_roles(name)
    rng = np.random.default_rng(seed)

    s_all, y_all = [], []
    for (s, y), count in sorted(cells.items()):
        s_all.extend([s] * count)
        y_all.extend([y] * count)
    s_all = np.array(s_all)
    y_all = np.array(y_all)
    n = len(s_all)

    columns = {}
    sizes = shape["categorical_sizes"]
    for j, m in enumerate(sizes):
        # retry until every category appears, so value sets (and the encoded
        # width) are stable across seeds
        for _ in range(100):
            col = np.empty(n, dtype=int)
            for s in (0, 1):
                for y in (0, 1):
                    mask = (s_all == s) & (y_all == y)
                    col[mask] = _sample_categorical(
                        rng, m, params.cat_y_logits[j], params.cat_s_logits[j],
                        s, y, int(mask.sum()))
            if len(np.unique(col)) == m:
                break
        else:
            raise RuntimeError(f"could not realize all {m} categories of cat{j}")
        columns[f"cat{j}"] = [f"v{v}" for v in col]

    for j in range(shape["n_continuous"]):
        raw = (params.cont_wy[j] * (y_all - 0.5)
               + params.cont_ws[j] * (s_all - 0.5)
               + rng.normal(0.0, 1.0, size=n))
        raw = params.cont_offset[j] + params.cont_scale[j] * raw
        columns[f"num{j}"] = [repr(float(v)) for v in raw]

    order = rng.permutation(n)
    header = list(roles.categorical) + list(roles.continuous) + [roles.sensitive, roles.label]
    rows = []
    for i in order:
        row = [columns[c][i] for c in (*roles.categorical, *roles.continuous)]
        row += [str(int(s_all[i])), str(int(y_all[i]))]
        rows.append(row)
    return header, rows


def load_benchmark(name: str, seed: int = 0) -> TabularDataset:
    """Generate a stand-in benchmark directly as a validated dataset."""
    header, rows = generate_rows(name, seed)
    return build_dataset(header, rows, benchmark_roles(name), origin=f"benchmark:{name}")


def write_benchmark_csv(name: str, path, seed: int = 0):
    """Write a stand-in benchmark as a CSV file ``load_csv`` can read back."""
    import csv

    header, rows = generate_rows(name, seed)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
