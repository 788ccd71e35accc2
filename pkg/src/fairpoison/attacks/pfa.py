"""Surrogate-guided proportional fairness attack.

Each candidate poisoned dataset is built over a batch schedule: per batch,
retrain the surrogate on the partially poisoned data, pick the sensitive
group whose hypothetical injection yields the larger disparity margin,
draw feature vectors from the training rows of that group the surrogate
currently predicts against it (uniform feasible rows if none exist), and
append them labeled Y = S. The best of N such candidates is selected by
the trade-off score against a clean baseline on a held-out evaluation
split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..data import TabularDataset, encode_dataset, encode_rows, uniform_rows
from ..errors import DegenerateDataError
from ..metrics import MetricsReport
from ..models import MODEL_KINDS, make_classifier, train_model
from ..nb_theory import GroupLabelCounts
from ..selection import SELECTION_RULES, CleanBaseline, compute_clean_baseline
from .candidate import BatchRecord, CandidateDataset, score_candidates

GUIDE_MODES = ("predicted", "true")
GENERATION_MODES = ("subset", "uniform")


def poison_budget(epsilon: float, n_train: int) -> int:
    """round(epsilon * n), rounding half up."""
    return int(math.floor(epsilon * n_train + 0.5))


def make_batch_schedule(budget: int, n_batches: int = 10):
    """Equal batches of budget // n_batches, remainder folded into the last."""
    if n_batches < 1:
        raise ValueError("n_batches must be >= 1")
    base = budget // n_batches
    schedule = [base] * n_batches
    schedule[-1] += budget - base * n_batches
    return tuple(schedule)


@dataclass(frozen=True)
class AttackConfig:
    """Knobs of one attack run; the defaults are the headline configuration."""

    epsilon: float
    n_candidates: int = 100
    n_batches: int = 10
    batch_schedule: tuple | None = None
    alpha: float = 0.5
    beta: float = 0.5
    surrogate: str | None = None
    seed: int = 0
    guide: str = "predicted"
    generation: str = "subset"
    selection: str = "tradeoff"

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must be in [0, 1]")
        if self.n_candidates < 1:
            raise ValueError("n_candidates must be >= 1")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be >= 0")
        if self.guide not in GUIDE_MODES:
            raise ValueError(f"guide must be one of {GUIDE_MODES}")
        if self.generation not in GENERATION_MODES:
            raise ValueError(f"generation must be one of {GENERATION_MODES}")
        if self.selection not in SELECTION_RULES:
            raise ValueError(f"selection must be one of {SELECTION_RULES}")
        if self.surrogate is not None and self.surrogate not in MODEL_KINDS:
            raise ValueError(f"unknown surrogate kind {self.surrogate!r}")
        if self.batch_schedule is not None and any(b < 0 for b in self.batch_schedule):
            raise ValueError("batch sizes must be >= 0")

    def schedule_for(self, n_train: int):
        budget = poison_budget(self.epsilon, n_train)
        if self.batch_schedule is not None:
            if sum(self.batch_schedule) != budget:
                raise ValueError(
                    f"batch schedule sums to {sum(self.batch_schedule)}, budget is {budget}"
                )
            return tuple(self.batch_schedule)
        return make_batch_schedule(budget, self.n_batches)


def select_target_group_counts(counts: GroupLabelCounts, batch: int):
    """Group whose hypothetical (S=s, Y=s) injection yields the larger CDM.

    The margin difference moves identically for the two hypotheticals, so
    under exact arithmetic the comparison ties; the tie-break then targets
    class-prior balance (inject positives into group 1 when the positive
    class is the smaller one), which is the regime the naive-Bayes
    unfairness guarantee is stated for. Exact balance falls back to group 1.
    """
    cdm1 = counts.with_added(batch, 1).cdm()
    cdm0 = counts.with_added(batch, 0).cdm()
    if cdm1 > cdm0:
        chosen = 1
    elif cdm0 > cdm1:
        chosen = 0
    else:
        chosen = 1 if counts.class_count(1) <= counts.class_count(0) else 0
    return chosen, cdm1, cdm0


def select_target_group(data: TabularDataset, batch: int) -> int:
    """Dataset-level wrapper over the count-based group selection."""
    chosen, _, _ = select_target_group_counts(GroupLabelCounts.from_dataset(data), batch)
    return chosen


def sample_poison_batch(train: TabularDataset, y_hat, s: int, batch: int, schema, rng):
    """Feature vectors for one batch of (x, S=s, Y=s) rows.

    Drawn with replacement from the train rows with S=s predicted as 1-s;
    if that subset is empty, each feature is drawn uniformly from its value
    set (continuous: its schema range). Returns (rows, source, subset_size).
    """
    y_hat = np.asarray(y_hat)
    if y_hat.shape != (len(train),):
        raise ValueError("predictions do not align with the training data")
    pool = np.flatnonzero((train.S == s) & (y_hat == 1 - s))
    if batch == 0:
        return np.empty((0, len(schema)), dtype=object), "none", len(pool)
    if len(pool) == 0:
        return uniform_rows(schema, batch, rng), "uniform", 0
    picks = pool[rng.integers(0, len(pool), size=batch)]
    return train.X[picks].copy(), "subset", len(pool)


def build_candidate(train: TabularDataset, config: AttackConfig, base_kind: str,
                    rng) -> CandidateDataset:
    """Build one candidate poisoned dataset over the batch schedule.

    The pure uniform-generation variant never consults the surrogate (group
    selection is count-based and rows are drawn from the schema), so its
    batches skip the refit.
    """
    schedule = config.schedule_for(len(train))
    surrogate_kind = config.surrogate or base_kind
    schema = train.schema
    needs_surrogate = config.guide == "predicted" and config.generation == "subset"
    M_train, y_train = encode_dataset(train)

    counts = GroupLabelCounts.from_dataset(train)
    rows_blocks, s_blocks = [], []
    M_blocks, y_blocks = [M_train], [y_train]
    provenance = []
    trace = []

    for batch in schedule:
        chosen, cdm1, cdm0 = select_target_group_counts(counts, batch)
        if config.generation == "uniform":
            rows = uniform_rows(schema, batch, rng)
            source, subset_size = "uniform", 0
        else:
            if needs_surrogate:
                clf = make_classifier(surrogate_kind)
                try:
                    clf.fit(np.concatenate(M_blocks), np.concatenate(y_blocks))
                except DegenerateDataError:
                    return _assemble_candidate(schema, rows_blocks, s_blocks,
                                               provenance, trace, failed=True)
                y_hat = clf.predict(M_train)
            else:
                y_hat = train.Y
            rows, source, subset_size = sample_poison_batch(
                train, y_hat, chosen, batch, schema, rng)
        if batch == 0:
            trace.append(BatchRecord(batch_size=0, chosen_group=chosen,
                                     cdm_group1=float(cdm1), cdm_group0=float(cdm0),
                                     subset_size=subset_size, source="none"))
            continue
        trace.append(BatchRecord(batch_size=batch, chosen_group=chosen,
                                 cdm_group1=float(cdm1), cdm_group0=float(cdm0),
                                 subset_size=subset_size, source=source))
        s_vals = np.full(batch, chosen)
        rows_blocks.append(rows)
        s_blocks.append(s_vals)
        provenance.extend([source] * batch)
        counts = counts.with_added(batch, chosen)
        M_blocks.append(encode_rows(schema, rows, s_vals))
        y_blocks.append(s_vals)

    return _assemble_candidate(schema, rows_blocks, s_blocks, provenance, trace)


def _assemble_candidate(schema, rows_blocks, s_blocks, provenance, trace, failed=False):
    if rows_blocks:
        X_rows = np.concatenate(rows_blocks)
        S = np.concatenate(s_blocks).astype(int)
    else:
        X_rows = np.empty((0, len(schema)), dtype=object)
        S = np.empty(0, dtype=int)
    return CandidateDataset(X_rows=X_rows, S=S, Y=S.copy(),
                            provenance=tuple(provenance), build_trace=tuple(trace),
                            failed=failed)


@dataclass
class AttackRunResult:
    """Everything one attack run produced, ready for persistence."""

    method: str
    base_kind: str
    epsilon: float
    chosen_index: int
    chosen: CandidateDataset
    candidate_scores: list
    baseline: CleanBaseline
    clean_eval: MetricsReport
    clean_test: MetricsReport
    poisoned_test: MetricsReport
    failed_candidates: list = field(default_factory=list)


def run_pfa(train: TabularDataset, eval_data: TabularDataset, test: TabularDataset,
            base_kind: str, config: AttackConfig, method_name: str = "pfa") -> AttackRunResult:
    """Full attack: build N candidates, select by the configured rule, report on test.

    Candidate builds draw from independent seeded streams spawned from
    ``config.seed``, so runs are reproducible and candidates are
    order-independent.
    """
    streams = [np.random.default_rng(ss)
               for ss in np.random.SeedSequence(config.seed).spawn(config.n_candidates)]
    candidates = [build_candidate(train, config, base_kind, rng) for rng in streams]
    return finish_run(candidates, method_name, train, eval_data, test, base_kind,
                      config.selection, config.alpha, config.beta, config.epsilon,
                      seed=config.seed)


def finish_run(candidates, method: str, train, eval_data, test, base_kind: str,
               selection: str, alpha: float, beta: float, epsilon: float,
               seed: int = 0) -> AttackRunResult:
    """Score a candidate pool, pick the winner, and evaluate it on the test split."""
    baseline, clean_eval, clean_model = compute_clean_baseline(base_kind, train, eval_data, seed)
    scored = score_candidates(candidates, base_kind, train, eval_data, baseline,
                              alpha, beta, seed)
    best = scored.best(selection)
    chosen = candidates[best]

    clean_test = MetricsReport.from_predictions(clean_model.predict(test), test.Y, test.S)
    poisoned_model = train_model(base_kind, chosen.join(train), seed)
    poisoned_test = MetricsReport.from_predictions(
        poisoned_model.predict(test), test.Y, test.S).with_baseline(clean_test)

    return AttackRunResult(
        method=method, base_kind=base_kind, epsilon=epsilon,
        chosen_index=best, chosen=chosen, candidate_scores=scored.scores,
        baseline=baseline, clean_eval=clean_eval, clean_test=clean_test,
        poisoned_test=poisoned_test, failed_candidates=scored.failed_indices,
    )
