"""Candidate poisoned datasets and the shared scoring/selection machinery."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..data import TabularDataset, append_rows, write_csv
from ..selection import CandidateScore, CleanBaseline, score_retrained, select_best


@dataclass(frozen=True)
class BatchRecord:
    """Audit entry for one batch of a candidate build."""

    batch_size: int
    chosen_group: int
    cdm_group1: float
    cdm_group0: float
    subset_size: int
    source: str  # "subset" | "uniform" | "none" (zero-size batch)


@dataclass(frozen=True)
class AnchorChoice:
    """Anchor row picked by an anchoring baseline."""

    row_index: int
    s: int
    y: int
    neighbor_count: int | None = None


@dataclass(frozen=True)
class CandidateDataset:
    """One complete set of poisoned rows, with per-row provenance.

    Every row has Y = S by construction. ``build_trace`` carries the
    per-batch group decisions for the surrogate-guided attack; ``anchors``
    carries the anchor choices for the anchoring baselines.
    """

    X_rows: np.ndarray
    S: np.ndarray
    Y: np.ndarray
    provenance: tuple
    build_trace: tuple = ()
    anchors: tuple = ()
    failed: bool = False

    def __post_init__(self):
        if not self.failed and not (self.S == self.Y).all():
            raise ValueError("poisoned rows must satisfy Y = S")
        if len(self.provenance) != len(self.S):
            raise ValueError("provenance must cover every row")

    def __len__(self):
        return len(self.S)

    def join(self, train: TabularDataset) -> TabularDataset:
        """Training dataset augmented with this candidate's rows."""
        return append_rows(train, self.X_rows, self.S, self.Y)

    def key(self):
        """Hashable identity of the poisoned rows, for score deduplication."""
        return (tuple(tuple(r) for r in self.X_rows),
                tuple(int(v) for v in self.S))

    def export(self, train_schema, csv_path, trace_path=None):
        """Write the poisoned rows as CSV, and optionally the build trace as JSON."""
        if len(self) == 0:
            raise ValueError("cannot export an empty candidate")
        data = TabularDataset(np.asarray(self.X_rows, dtype=object),
                              self.S.copy(), self.Y.copy(), train_schema)
        write_csv(data, csv_path)
        if trace_path is not None:
            payload = {
                "provenance": list(self.provenance),
                "failed": self.failed,
                "batches": [vars(b) for b in self.build_trace],
                "anchors": [vars(a) for a in self.anchors],
            }
            with open(trace_path, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, indent=2)


def empty_candidate(n_features: int, **kwargs) -> CandidateDataset:
    return CandidateDataset(
        X_rows=np.empty((0, n_features), dtype=object),
        S=np.empty(0, dtype=int),
        Y=np.empty(0, dtype=int),
        provenance=(),
        **kwargs,
    )


@dataclass
class ScoredCandidates:
    """Scores for a pool of candidates under one clean baseline."""

    scores: list
    failed_indices: list = field(default_factory=list)

    def best(self, rule: str) -> int:
        return select_best(self.scores, rule)


def score_candidates(candidates, base_kind: str, train: TabularDataset,
                     eval_data: TabularDataset, baseline: CleanBaseline,
                     alpha: float, beta: float, seed: int = 0) -> ScoredCandidates:
    """Retrain the base model per candidate and score each on the eval split.

    Identical candidates (the non-random baseline emits N copies) are
    scored once. Failed candidates receive a sentinel score that never
    wins selection.
    """
    cache = {}
    scores = []
    failed = []
    sentinel = CandidateScore(accuracy=-1.0, spd=-1.0, eod=-1.0, delta_perf=-np.inf,
                              delta_fair=-np.inf, perf_penalized=True, tradeoff=-np.inf)
    for i, cand in enumerate(candidates):
        if cand.failed:
            failed.append(i)
            scores.append(sentinel)
            continue
        key = cand.key()
        if key not in cache:
            cache[key] = score_retrained(base_kind, cand.join(train), eval_data,
                                         baseline, alpha, beta, seed)
        scores.append(cache[key])
    if len(failed) == len(scores):
        raise RuntimeError("every candidate build failed")
    return ScoredCandidates(scores=scores, failed_indices=failed)
