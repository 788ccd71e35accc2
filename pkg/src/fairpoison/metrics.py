"""Group-fairness and performance metrics over binary predictions.

Statistical parity difference (SPD) is the absolute gap in positive-
prediction rates between the two sensitive groups; equalized odds
difference (EOD) is the larger of the absolute true-positive-rate and
false-positive-rate gaps. Both are 0 at parity and 1 at maximal disparity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UndefinedMetricError


def _check_aligned(*vectors):
    arrays = [np.asarray(v) for v in vectors]
    n = len(arrays[0])
    if n == 0 or any(len(a) != n for a in arrays[1:]):
        raise ValueError("metric inputs must be non-empty and equally sized")
    return arrays


def accuracy(y_hat, y) -> float:
    """Fraction of matching entries."""
    y_hat, y = _check_aligned(y_hat, y)
    return float((y_hat == y).mean())


def spd(y_hat, s) -> float:
    """|P(Yhat=1 | S=1) - P(Yhat=1 | S=0)| from empirical frequencies."""
    y_hat, s = _check_aligned(y_hat, s)
    g1 = s == 1
    if not g1.any() or g1.all():
        raise UndefinedMetricError("SPD needs both sensitive groups present")
    return float(abs(y_hat[g1].mean() - y_hat[~g1].mean()))


def eod_components(y_hat, y, s):
    """Per-label positive-rate gaps behind EOD.

    Returns (gaps, degenerate) where gaps maps label y in {0, 1} to the
    absolute gap |P(Yhat=1|Y=y,S=1) - P(Yhat=1|Y=y,S=0)|, omitting labels
    for which either group has no example. ``degenerate`` is True when both
    labels are omitted, in which case EOD is reported as 0 by convention.
    """
    y_hat, y, s = _check_aligned(y_hat, y, s)
    gaps = {}
    for label in (0, 1):
        cell1 = (y == label) & (s == 1)
        cell0 = (y == label) & (s == 0)
        if not cell1.any() or not cell0.any():
            continue
        gaps[label] = float(abs(y_hat[cell1].mean() - y_hat[cell0].mean()))
    return gaps, not gaps


def eod(y_hat, y, s) -> float:
    """max over y of |P(Yhat=1|Y=y,S=1) - P(Yhat=1|Y=y,S=0)|.

    Labels with an empty (y, s) cell are skipped; if both are empty the
    result is 0 (flagged by ``eod_components``).
    """
    gaps, degenerate = eod_components(y_hat, y, s)
    return 0.0 if degenerate else max(gaps.values())


@dataclass(frozen=True)
class MetricsReport:
    """Accuracy/SPD/EOD for one evaluation, with optional clean-baseline deltas."""

    accuracy: float
    spd: float
    eod: float
    eod_degenerate: bool = False
    delta_accuracy: float | None = None
    delta_spd: float | None = None
    delta_eod: float | None = None

    @classmethod
    def from_predictions(cls, y_hat, y, s, clean: "MetricsReport | None" = None):
        gaps, degenerate = eod_components(y_hat, y, s)
        report = cls(
            accuracy=accuracy(y_hat, y),
            spd=spd(y_hat, s),
            eod=0.0 if degenerate else max(gaps.values()),
            eod_degenerate=degenerate,
        )
        if clean is not None:
            report = report.with_baseline(clean)
        return report

    def with_baseline(self, clean: "MetricsReport") -> "MetricsReport":
        """Attach deltas (this report minus the clean baseline), exactly."""
        return MetricsReport(
            accuracy=self.accuracy,
            spd=self.spd,
            eod=self.eod,
            eod_degenerate=self.eod_degenerate,
            delta_accuracy=self.accuracy - clean.accuracy,
            delta_spd=self.spd - clean.spd,
            delta_eod=self.eod - clean.eod,
        )

    def as_dict(self):
        out = {"accuracy": self.accuracy, "spd": self.spd, "eod": self.eod,
               "eod_degenerate": self.eod_degenerate}
        if self.delta_accuracy is not None:
            out.update(delta_accuracy=self.delta_accuracy,
                       delta_spd=self.delta_spd,
                       delta_eod=self.delta_eod)
        return out
