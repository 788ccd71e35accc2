"""Poisoning attacks: the surrogate-guided method and the anchoring baselines.

Method identifiers combine a family with option tokens, separated by "-":

- family: ``pfa`` | ``raa`` | ``nraa``
- selection: ``p`` (performance), ``f`` (fairness), ``t`` (trade-off)
- ``y``: guide subset choice by true labels instead of surrogate predictions
- ``uniform``: generate feasible rows uniformly instead of subset sampling

Defaults: ``pfa`` selects by trade-off score, the baselines require an
explicit ``-p``/``-f``/``-t`` suffix. Examples: ``pfa``, ``pfa-y``,
``pfa-uniform``, ``raa-f``, ``nraa-p``.
"""

from __future__ import annotations

import numpy as np

from ..data import TabularDataset
from .anchoring import neighborhood_radius, nraa, project_feasible, raa
from .candidate import (AnchorChoice, BatchRecord, CandidateDataset,
                        score_candidates)
from .pfa import (AttackConfig, AttackRunResult, build_candidate, finish_run,
                  make_batch_schedule, poison_budget, run_pfa,
                  sample_poison_batch, select_target_group,
                  select_target_group_counts)

_SELECTION_TOKENS = {"p": "performance", "f": "fairness", "t": "tradeoff"}


def parse_method(method: str):
    """Split a method identifier into (family, option overrides)."""
    tokens = method.split("-")
    family = tokens[0]
    if family not in ("pfa", "raa", "nraa"):
        raise ValueError(f"unknown attack family in method {method!r}")
    options = {}
    for token in tokens[1:]:
        if token in _SELECTION_TOKENS:
            options["selection"] = _SELECTION_TOKENS[token]
        elif token == "y" and family == "pfa":
            options["guide"] = "true"
        elif token == "uniform" and family == "pfa":
            options["generation"] = "uniform"
        else:
            raise ValueError(f"unknown option {token!r} in method {method!r}")
    if family in ("raa", "nraa") and "selection" not in options:
        raise ValueError(f"method {method!r} needs a selection suffix (-p, -f or -t)")
    return family, options


def run_attack(method: str, train: TabularDataset, eval_data: TabularDataset,
               test: TabularDataset, base_kind: str, config: AttackConfig) -> AttackRunResult:
    """Run any method end to end: build N candidates, select, report on test."""
    family, options = parse_method(method)
    if options:
        config = AttackConfig(**{**config.__dict__, **options})
    if family == "pfa":
        return run_pfa(train, eval_data, test, base_kind, config, method_name=method)

    build = raa if family == "raa" else nraa
    streams = [np.random.default_rng(ss)
               for ss in np.random.SeedSequence(config.seed).spawn(config.n_candidates)]
    candidates = [build(train, config.epsilon, rng) for rng in streams]
    return finish_run(candidates, method, train, eval_data, test, base_kind,
                      config.selection, config.alpha, config.beta, config.epsilon,
                      seed=config.seed)


__all__ = [
    "AnchorChoice",
    "AttackConfig",
    "AttackRunResult",
    "BatchRecord",
    "CandidateDataset",
    "build_candidate",
    "finish_run",
    "make_batch_schedule",
    "neighborhood_radius",
    "nraa",
    "parse_method",
    "poison_budget",
    "project_feasible",
    "raa",
    "run_attack",
    "run_pfa",
    "sample_poison_batch",
    "score_candidates",
    "select_target_group",
    "select_target_group_counts",
]
