"""Harness configuration: INI-style sections for datasets, grid, and attack.

Example::

    [dataset:german]
    synthetic = german        ; generate the stand-in benchmark
    ; or point at a CSV with column roles:
    ; path = data/german.csv
    ; sensitive = sex
    ; label = credit
    ; categorical = purpose, housing
    ; continuous = duration, amount

    [grid]
    datasets = german, drug, compas
    models = gnb, lr, dt, knn
    methods = pfa, raa-p, raa-f, nraa-p, nraa-f
    epsilons = 0.1, 0.2, 0.4, 0.6, 0.8, 1.0
    seeds = 5                 ; a count (0..4) or an explicit list
    candidates = 100

    [attack]
    alpha = 0.5
    beta = 0.5
    batches = 10
    train_fraction = 0.8
    eval_fraction = 0.2

    [output]
    store = results.jsonl

``FAIRPOISON_STORE`` and ``FAIRPOISON_JOBS`` override the store path and
parallelism degree.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field

from ..benchmarks import BENCHMARK_NAMES
from ..data import ColumnRoles
from ..models import MODEL_KINDS

DEFAULT_EPSILONS = (0.1, 0.2, 0.4, 0.6, 0.8, 1.0)
DEFAULT_METHODS = ("pfa", "raa-p", "raa-f", "nraa-p", "nraa-f")


class ConfigError(ValueError):
    """The harness config file cannot be used as written."""


@dataclass(frozen=True)
class DatasetSource:
    """Where a named dataset comes from: a synthetic stand-in or a CSV file."""

    name: str
    synthetic: str | None = None
    path: str | None = None
    roles: ColumnRoles | None = None
    generation_seed: int = 0

    def __post_init__(self):
        if (self.synthetic is None) == (self.path is None):
            raise ConfigError(f"dataset {self.name!r} needs exactly one of synthetic/path")
        if self.synthetic is not None and self.synthetic not in BENCHMARK_NAMES:
            raise ConfigError(f"unknown synthetic benchmark {self.synthetic!r}")
        if self.path is not None and self.roles is None:
            raise ConfigError(f"dataset {self.name!r} needs column roles for its CSV")


@dataclass(frozen=True)
class ExperimentGrid:
    datasets: tuple
    models: tuple
    methods: tuple
    epsilons: tuple
    seeds: tuple
    n_candidates: int

    def __post_init__(self):
        for axis, name in ((self.datasets, "datasets"), (self.models, "models"),
                           (self.methods, "methods"), (self.epsilons, "epsilons"),
                           (self.seeds, "seeds")):
            if not axis:
                raise ConfigError(f"grid axis {name!r} is empty")
        if list(self.epsilons) != sorted(self.epsilons):
            raise ConfigError("epsilons must be sorted ascending")
        for model in self.models:
            if model not in MODEL_KINDS:
                raise ConfigError(f"unknown model kind {model!r}")
        if self.n_candidates < 1:
            raise ConfigError("candidates must be >= 1")

    def cells(self):
        for dataset in self.datasets:
            for model in self.models:
                for method in self.methods:
                    for epsilon in self.epsilons:
                        for seed in self.seeds:
                            yield dataset, model, method, epsilon, seed


@dataclass(frozen=True)
class AttackSettings:
    alpha: float = 0.5
    beta: float = 0.5
    n_batches: int = 10
    train_fraction: float = 0.8
    eval_fraction: float = 0.2
    surrogate: str | None = None


@dataclass
class HarnessConfig:
    sources: dict
    grid: ExperimentGrid
    attack: AttackSettings = field(default_factory=AttackSettings)
    store_path: str = "results.jsonl"
    master_seed: int = 0
    jobs: int = 1

    def source(self, name) -> DatasetSource:
        try:
            return self.sources[name]
        except KeyError:
            raise ConfigError(f"grid references dataset {name!r} with no [dataset:{name}] section")


def _split_list(raw):
    return tuple(part.strip() for part in raw.split(",") if part.strip())


def _parse_seeds(raw):
    parts = _split_list(raw)
    if len(parts) == 1 and "," not in raw.strip():
        return tuple(range(int(parts[0])))
    return tuple(int(p) for p in parts)


def parse_config(path) -> HarnessConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    read = parser.read(path, encoding="utf-8")
    if not read:
        raise ConfigError(f"config file {path} not found")

    sources = {}
    for section in parser.sections():
        if not section.startswith("dataset:"):
            continue
        name = section.split(":", 1)[1]
        sec = parser[section]
        if "synthetic" in sec:
            sources[name] = DatasetSource(name=name, synthetic=sec["synthetic"].strip(),
                                          generation_seed=sec.getint("seed", 0))
        else:
            roles = ColumnRoles(
                sensitive=sec.get("sensitive", "").strip(),
                label=sec.get("label", "").strip(),
                categorical=_split_list(sec.get("categorical", "")),
                continuous=_split_list(sec.get("continuous", "")),
            )
            sources[name] = DatasetSource(name=name, path=sec.get("path", "").strip() or None,
                                          roles=roles)

    if not parser.has_section("grid"):
        raise ConfigError("config needs a [grid] section")
    grid_sec = parser["grid"]
    grid = ExperimentGrid(
        datasets=_split_list(grid_sec.get("datasets", "")),
        models=_split_list(grid_sec.get("models", "gnb, lr, dt, knn")),
        methods=_split_list(grid_sec.get("methods", ", ".join(DEFAULT_METHODS))),
        epsilons=tuple(float(e) for e in _split_list(grid_sec.get("epsilons", ""))) or DEFAULT_EPSILONS,
        seeds=_parse_seeds(grid_sec.get("seeds", "5")),
        n_candidates=grid_sec.getint("candidates", 100),
    )
    for name in grid.datasets:
        if name not in sources:
            raise ConfigError(f"grid references dataset {name!r} with no [dataset:{name}] section")

    attack = AttackSettings()
    if parser.has_section("attack"):
        sec = parser["attack"]
        surrogate = sec.get("surrogate", "").strip() or None
        if surrogate is not None and surrogate not in MODEL_KINDS:
            raise ConfigError(f"unknown surrogate {surrogate!r}")
        attack = AttackSettings(
            alpha=sec.getfloat("alpha", 0.5),
            beta=sec.getfloat("beta", 0.5),
            n_batches=sec.getint("batches", 10),
            train_fraction=sec.getfloat("train_fraction", 0.8),
            eval_fraction=sec.getfloat("eval_fraction", 0.2),
            surrogate=surrogate,
        )

    store_path = "results.jsonl"
    master_seed = 0
    if parser.has_section("output"):
        store_path = parser["output"].get("store", store_path).strip()
        master_seed = parser["output"].getint("seed", 0)

    store_path = os.environ.get("FAIRPOISON_STORE", store_path)
    jobs = int(os.environ.get("FAIRPOISON_JOBS", "1"))
    return HarnessConfig(sources=sources, grid=grid, attack=attack,
                         store_path=store_path, master_seed=master_seed, jobs=jobs)


def default_config_text(data_dir="data", store="results.jsonl") -> str:
    """A ready-to-run config covering the three stand-in benchmarks."""
    lines = []
    for name in BENCHMARK_NAMES:
        lines += [f"[dataset:{name}]", f"synthetic = {name}", ""]
    lines += [
        "[grid]",
        f"datasets = {', '.join(BENCHMARK_NAMES)}",
        "models = gnb, lr, dt, knn",
        f"methods = {', '.join(DEFAULT_METHODS)}",
        f"epsilons = {', '.join(str(e) for e in DEFAULT_EPSILONS)}",
        "seeds = 5",
        "candidates = 100",
        "",
        "[attack]",
        "alpha = 0.5",
        "beta = 0.5",
        "batches = 10",
        "train_fraction = 0.8",
        "eval_fraction = 0.2",
        "",
        "[output]",
        f"store = {store}",
        "seed = 0",
        "",
    ]
    return "\n".join(lines)
