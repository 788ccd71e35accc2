"""Experiment driver: config, grid runner, result store, table emission."""

from .config import (AttackSettings, ConfigError, DatasetSource,
                     ExperimentGrid, HarnessConfig, default_config_text,
                     parse_config)
from .runner import (ABLATION_KINDS, ablation_cells, derive_seed,
                     prepare_splits, run_ablation, run_cell, run_grid)
from .store import ResultStore, record_key
from .tables import (MissingCleanBaseline, TABLE_FORMATS, emit_ablation,
                     emit_table, reselect_with_params)

__all__ = [
    "ABLATION_KINDS",
    "AttackSettings",
    "ConfigError",
    "DatasetSource",
    "ExperimentGrid",
    "HarnessConfig",
    "MissingCleanBaseline",
    "ResultStore",
    "TABLE_FORMATS",
    "ablation_cells",
    "default_config_text",
    "derive_seed",
    "emit_ablation",
    "emit_table",
    "parse_config",
    "prepare_splits",
    "record_key",
    "reselect_with_params",
    "run_ablation",
    "run_cell",
    "run_grid",
]
