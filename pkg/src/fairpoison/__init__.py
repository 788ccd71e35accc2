"""Fairness-targeted data poisoning: attack, baselines, metrics, and harness."""

from .data import (ColumnRoles, DatasetStats, Feature, FeatureSchema,
                   TabularDataset, discretize_continuous, load_csv, split,
                   stats, subset, write_csv)
from .metrics import MetricsReport, accuracy, eod, spd
from .attacks import AttackConfig, run_attack, run_pfa

__version__ = "0.1.0"

__all__ = [
    "AttackConfig",
    "ColumnRoles",
    "DatasetStats",
    "Feature",
    "FeatureSchema",
    "MetricsReport",
    "TabularDataset",
    "accuracy",
    "discretize_continuous",
    "eod",
    "load_csv",
    "run_attack",
    "run_pfa",
    "spd",
    "split",
    "stats",
    "subset",
    "write_csv",
]
