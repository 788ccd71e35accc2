"""Candidate-dataset scoring: percentage-change transform and trade-off rule.

A candidate poisoned dataset is judged by the predictions of the base model
retrained on train + candidate, evaluated on a held-out evaluation split.
Scores compare those predictions against a clean-model baseline measured on
the same split: the performance set is {accuracy}, the fairness set is
{SPD, EOD}, each aggregated by its mean, and both oriented so that higher
favors the attacker.
"""

from __future__ import annotations

from dataclasses import dataclass

from .data import TabularDataset
from .metrics import MetricsReport
from .models import train_model

DENOMINATOR_FLOOR = 1e-6

SELECTION_RULES = ("performance", "fairness", "tradeoff")


def pct_change(current: float, baseline: float) -> float:
    """(current - baseline) / baseline, with the denominator floored at 1e-6."""
    if baseline < 0:
        raise ValueError("baseline must be >= 0")
    return (current - baseline) / max(baseline, DENOMINATOR_FLOOR)


def tradeoff_score(delta_fair: float, delta_perf: float, alpha: float, beta: float) -> float:
    """delta_fair + alpha*delta_perf, plus beta*delta_perf when performance dropped."""
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be >= 0")
    score = delta_fair + alpha * delta_perf
    if delta_perf < 0:
        score += beta * delta_perf
    return score


@dataclass(frozen=True)
class CleanBaseline:
    """Clean-model metric means on the evaluation split, cached per run."""

    perf_bar: float
    fair_bar: float
    degenerate: bool

    @classmethod
    def from_report(cls, report: MetricsReport):
        perf_bar = report.accuracy
        fair_bar = (report.spd + report.eod) / 2.0
        return cls(perf_bar=perf_bar, fair_bar=fair_bar,
                   degenerate=fair_bar <= DENOMINATOR_FLOOR or perf_bar <= DENOMINATOR_FLOOR)


def compute_clean_baseline(kind: str, train: TabularDataset, eval_data: TabularDataset,
                           seed: int = 0):
    """Train the clean model and measure it on the evaluation split.

    Returns (baseline, eval_report, model) so callers can reuse the model
    for reporting on other splits.
    """
    model = train_model(kind, train, seed)
    report = MetricsReport.from_predictions(model.predict(eval_data), eval_data.Y, eval_data.S)
    return CleanBaseline.from_report(report), report, model


@dataclass(frozen=True)
class CandidateScore:
    """Audit record for one candidate: raw eval metrics and score components."""

    accuracy: float
    spd: float
    eod: float
    delta_perf: float
    delta_fair: float
    perf_penalized: bool
    tradeoff: float

    @classmethod
    def from_predictions(cls, y_hat, eval_data: TabularDataset,
                         baseline: CleanBaseline, alpha: float, beta: float):
        report = MetricsReport.from_predictions(y_hat, eval_data.Y, eval_data.S)
        delta_perf = pct_change(report.accuracy, baseline.perf_bar)
        delta_fair = pct_change((report.spd + report.eod) / 2.0, baseline.fair_bar)
        return cls(
            accuracy=report.accuracy,
            spd=report.spd,
            eod=report.eod,
            delta_perf=delta_perf,
            delta_fair=delta_fair,
            perf_penalized=delta_perf < 0,
            tradeoff=tradeoff_score(delta_fair, delta_perf, alpha, beta),
        )

    def rule_value(self, rule: str) -> float:
        if rule == "performance":
            return self.accuracy
        if rule == "fairness":
            return self.spd + self.eod
        if rule == "tradeoff":
            return self.tradeoff
        raise ValueError(f"unknown selection rule {rule!r}; expected one of {SELECTION_RULES}")

    def as_dict(self):
        return dict(self.__dict__)


def select_best(scores, rule: str) -> int:
    """Index of the argmax under the rule; ties keep the lowest index."""
    if not scores:
        raise ValueError("no candidate scores to select from")
    values = [s.rule_value(rule) for s in scores]
    best = 0
    for i, v in enumerate(values):
        if v > values[best]:
            best = i
    return best


def score_retrained(kind: str, train: TabularDataset, eval_data: TabularDataset,
                    baseline: CleanBaseline, alpha: float, beta: float,
                    seed: int = 0) -> CandidateScore:
    """Train kind on ``train`` (already including the candidate) and score on eval."""
    model = train_model(kind, train, seed)
    return CandidateScore.from_predictions(model.predict(eval_data), eval_data, baseline, alpha, beta)
