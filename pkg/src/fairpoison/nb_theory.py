"""Exact categorical naive-Bayes scoring and the numerical convergence oracles.

Everything here works on integer counts and ``fractions.Fraction`` so the
counting arguments behind the unfairness guarantees can be checked without
tolerances: class priors, group posteriors (P[S=s|Y=y]), per-feature
likelihoods, the group margin of preference, and the continuous disparity
margin (CDM) that steers the attack's group selection.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .data import CATEGORICAL, TabularDataset, append_rows, uniform_rows
from .errors import DegenerateDataError, SchemaError


@dataclass(frozen=True)
class GroupLabelCounts:
    """The 2x2 (S, Y) contingency table; all margin math reduces to it."""

    n11: int
    n10: int
    n01: int
    n00: int

    @classmethod
    def from_dataset(cls, data: TabularDataset):
        s = np.asarray(data.S)
        y = np.asarray(data.Y)
        return cls(
            n11=int(((s == 1) & (y == 1)).sum()),
            n10=int(((s == 1) & (y == 0)).sum()),
            n01=int(((s == 0) & (y == 1)).sum()),
            n00=int(((s == 0) & (y == 0)).sum()),
        )

    @property
    def total(self):
        return self.n11 + self.n10 + self.n01 + self.n00

    def count(self, s, y):
        return getattr(self, f"n{s}{y}")

    def class_count(self, y):
        return self.count(1, y) + self.count(0, y)

    def with_added(self, n, s) -> "GroupLabelCounts":
        """Counts after injecting n samples with S=s and Y=s."""
        if s == 1:
            return GroupLabelCounts(self.n11 + n, self.n10, self.n01, self.n00)
        return GroupLabelCounts(self.n11, self.n10, self.n01, self.n00 + n)

    def margin(self, s) -> Fraction:
        """P[Y=1] P[S=s|Y=1] - P[Y=0] P[S=s|Y=0], which is (n_{s,1} - n_{s,0})/N."""
        return Fraction(self.count(s, 1) - self.count(s, 0), self.total)

    def cdm(self) -> Fraction:
        return abs(self.margin(1) - self.margin(0))


@dataclass(frozen=True)
class CategoricalNBTables:
    """Count-backed naive-Bayes tables over a finite feature value space."""

    counts: GroupLabelCounts
    feature_counts: tuple  # per feature: {(value, y): int}
    value_sets: tuple
    smoothing: Fraction

    @property
    def n(self):
        return self.counts.total

    def prior(self, y) -> Fraction:
        return Fraction(self.counts.class_count(y), self.n)

    def group_posterior(self, s, y) -> Fraction:
        num = self.counts.count(s, y) + self.smoothing
        den = self.counts.class_count(y) + 2 * self.smoothing
        return Fraction(num, den)

    def likelihood(self, j, value, y) -> Fraction:
        if value not in self.value_sets[j]:
            raise SchemaError(f"value {value!r} outside the support of feature {j}")
        num = self.feature_counts[j].get((value, y), 0) + self.smoothing
        den = self.counts.class_count(y) + self.smoothing * len(self.value_sets[j])
        return Fraction(num, den)


def fit_tables(data: TabularDataset, smoothing=0) -> CategoricalNBTables:
    """Exact empirical count ratios with optional additive smoothing.

    Requires an all-categorical schema (use ``discretize_continuous`` first)
    and, under zero smoothing, both classes present.
    """
    for feat in data.schema.features:
        if feat.kind != CATEGORICAL:
            raise SchemaError(
                f"feature {feat.name!r} is continuous; discretize before fitting exact tables"
            )
    smoothing = Fraction(smoothing)
    if smoothing < 0:
        raise ValueError("smoothing must be >= 0")
    counts = GroupLabelCounts.from_dataset(data)
    if smoothing == 0 and (counts.class_count(0) == 0 or counts.class_count(1) == 0):
        raise DegenerateDataError("a class is empty and smoothing is 0")
    feature_counts = []
    for j in range(len(data.schema)):
        col = {}
        for value, y in zip(data.X[:, j], data.Y):
            key = (value, int(y))
            col[key] = col.get(key, 0) + 1
        feature_counts.append(col)
    value_sets = tuple(feat.values for feat in data.schema.features)
    return CategoricalNBTables(counts, tuple(feature_counts), value_sets, smoothing)


def score_nb(tables: CategoricalNBTables, x, s, y) -> Fraction:
    """P[Y=y] P[S=s|Y=y] prod_i P[X_i=x_i|Y=y], exactly."""
    score = tables.prior(y) * tables.group_posterior(s, y)
    for j, value in enumerate(x):
        score *= tables.likelihood(j, value, y)
    return score


def predict_tables(tables: CategoricalNBTables, x, s) -> int:
    """argmax over y of the naive-Bayes score; exact ties go to class 0."""
    return 1 if score_nb(tables, x, s, 1) > score_nb(tables, x, s, 0) else 0


def margin(tables: CategoricalNBTables, s) -> Fraction:
    """Margin of preference for the positive class within group s."""
    return (tables.prior(1) * tables.group_posterior(s, 1)
            - tables.prior(0) * tables.group_posterior(s, 0))


def cdm(tables: CategoricalNBTables) -> Fraction:
    """Continuous disparity margin |M_1 - M_0|."""
    return abs(margin(tables, 1) - margin(tables, 0))


def simplified_prediction(tables: CategoricalNBTables, s) -> int:
    """Group-s prediction when features carry no label signal: sign of the margin."""
    return 1 if margin(tables, s) > 0 else 0


def cdm_after_hypothetical(data: TabularDataset, n: int, s: int) -> Fraction:
    """CDM after adding n samples with S=s, Y=s.

    Margins carry no feature terms, so only the (S, Y) counts matter; the
    hypothetical is O(1) on the contingency table.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    return GroupLabelCounts.from_dataset(data).with_added(n, s).cdm()


# --- balanced-injection machinery --------------------------------------------

def _allocate_balanced(n1, n0, m, prefer_one=True):
    """Split m new samples between groups so class counts stay balanced.

    Injected samples have Y equal to their group, so giving a_1 to group 1
    and a_0 to group 0 moves the class counts to (n1+a1, n0+a0). The split
    minimizes the resulting imbalance; when the residual is odd, the extra
    sample goes to group 1 when ``prefer_one`` else group 0.
    """
    target = Fraction(m - (n1 - n0), 2)
    if target.denominator == 1:
        a1 = int(target)
    else:
        a1 = math.floor(target) + (1 if prefer_one else 0)
    a1 = min(max(a1, 0), m)
    return a1, m - a1


def inject_uniform(data: TabularDataset, k1: int, k0: int, rng) -> TabularDataset:
    """Dataset augmented with uniform-feature rows: k1 of (S=1,Y=1), k0 of (S=0,Y=0)."""
    rows = []
    s_vals = []
    if k1:
        rows.append(uniform_rows(data.schema, k1, rng))
        s_vals.extend([1] * k1)
    if k0:
        rows.append(uniform_rows(data.schema, k0, rng))
        s_vals.extend([0] * k0)
    if not rows:
        return data
    X_rows = np.concatenate(rows)
    return append_rows(data, X_rows, s_vals, s_vals)


def posterior_ratio(counts: GroupLabelCounts, s):
    """P[S=s|Y=s] / P[S=s|Y=1-s]; math.inf when the denominator posterior is 0."""
    if counts.class_count(s) == 0:
        return Fraction(0)
    num = Fraction(counts.count(s, s), counts.class_count(s))
    c_other = counts.count(s, 1 - s)
    if c_other == 0:
        return math.inf
    den = Fraction(c_other, counts.class_count(1 - s))
    return num / den


def posterior_ratio_after(counts: GroupLabelCounts, s, m: int):
    """Posterior ratio after m balanced-injection samples (closed-form counts)."""
    k1, k0 = _allocate_balanced(counts.class_count(1), counts.class_count(0), m)
    return posterior_ratio(counts.with_added(k1, 1).with_added(k0, 0), s)


def divergence_threshold(counts: GroupLabelCounts, s, bound=100, cap=10**12) -> int:
    """Smallest balanced-injection size m with posterior ratio > bound.

    Pure count arithmetic: the ratio is evaluated exactly and is
    non-decreasing in m, so doubling plus bisection finds the threshold.
    """
    if posterior_ratio_after(counts, s, 0) > bound:
        return 0
    hi = 1
    while posterior_ratio_after(counts, s, hi) <= bound:
        hi *= 2
        if hi > cap:
            raise ValueError(f"ratio did not exceed {bound} within {cap} injections")
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if posterior_ratio_after(counts, s, mid) > bound:
            hi = mid
        else:
            lo = mid
    return hi


# --- convergence verification traces ----------------------------------------------

@dataclass(frozen=True)
class UnfairnessStep:
    """One step of the balanced-injection convergence trace."""

    k_total: int
    fraction_unfair: float
    prior_ratio: Fraction | None
    posterior_ratio_min: object  # Fraction or math.inf
    max_likelihood_ratio_dev: float
    balanced: bool


def _evaluation_grid(schema, rng, cap=4096):
    sizes = [len(f.values) for f in schema.features]
    total = 2 * int(np.prod(sizes))
    if total <= cap:
        grid = [(x, s) for x in itertools.product(*(f.values for f in schema.features))
                for s in (0, 1)]
        return grid
    picks = []
    for _ in range(cap):
        x = tuple(f.values[rng.integers(0, len(f.values))] for f in schema.features)
        picks.append((x, int(rng.integers(0, 2))))
    return picks


def _max_likelihood_ratio_dev(tables):
    worst = 0.0
    for j, values in enumerate(tables.value_sets):
        for v in values:
            num = tables.likelihood(j, v, 1)
            den = tables.likelihood(j, v, 0)
            if num == 0 and den == 0:
                continue
            if den == 0:
                return math.inf
            worst = max(worst, abs(float(num / den) - 1.0))
    return worst


def trace_unfairness_convergence(base: TabularDataset, step_size: int, steps: int, seed: int = 0):
    """Trace the balanced uniform-injection recipe driving predictions to Yhat=S.

    Each step injects ``step_size`` uniform-feature rows of the form
    (x, S=s, Y=s), allocated between the groups to keep class counts
    balanced. The trace records, per step, the fraction of a fixed
    evaluation grid predicted as its group, the exact prior ratio, the
    smaller of the two group posterior ratios, and the worst feature
    likelihood-ratio deviation from 1.
    """
    rng = np.random.default_rng(seed)
    grid = _evaluation_grid(base.schema, rng)
    current = base
    trace = []
    prefer_one = True
    k_total = 0
    for _ in range(steps):
        counts = GroupLabelCounts.from_dataset(current)
        k1, k0 = _allocate_balanced(counts.class_count(1), counts.class_count(0),
                                    step_size, prefer_one)
        prefer_one = not prefer_one
        current = inject_uniform(current, k1, k0, rng)
        k_total += step_size
        tables = fit_tables(current, smoothing=0)
        unfair = sum(predict_tables(tables, x, s) == s for x, s in grid)
        n1, n0 = tables.counts.class_count(1), tables.counts.class_count(0)
        trace.append(UnfairnessStep(
            k_total=k_total,
            fraction_unfair=unfair / len(grid),
            prior_ratio=Fraction(n1, n0) if n0 else None,
            posterior_ratio_min=min(posterior_ratio(tables.counts, 1),
                                    posterior_ratio(tables.counts, 0)),
            max_likelihood_ratio_dev=_max_likelihood_ratio_dev(tables),
            balanced=n1 == n0,
        ))
    return trace


@dataclass(frozen=True)
class UniformityStep:
    """One step of the feature-label independence convergence trace."""

    k_total: int
    max_conditional_dev: float
    max_marginal_dev: float


def trace_uniformity_convergence(base: TabularDataset, s: int, steps: int,
                    step_size: int | None = None, seed: int = 0):
    """Trace uniform-feature injection into group s toward per-feature uniformity.

    Records, per step, the worst absolute deviation of the empirical
    conditional P[X_j=v | Y=s] from 1/|V_j| and the same for the marginal
    P[X_j=v]; both must tend to 0 as k grows.
    """
    if step_size is None:
        step_size = max(1, len(base))
    rng = np.random.default_rng(seed)
    current = base
    trace = []
    for step in range(1, steps + 1):
        k1 = step_size if s == 1 else 0
        k0 = step_size if s == 0 else 0
        current = inject_uniform(current, k1, k0, rng)
        tables = fit_tables(current, smoothing=0)
        cond_dev = 0.0
        marg_dev = 0.0
        n_s = tables.counts.class_count(s)
        for j, values in enumerate(tables.value_sets):
            uniform = Fraction(1, len(values))
            for v in values:
                count_sv = tables.feature_counts[j].get((v, s), 0)
                cond_dev = max(cond_dev, abs(float(Fraction(count_sv, n_s) - uniform)))
                count_v = count_sv + tables.feature_counts[j].get((v, 1 - s), 0)
                marg_dev = max(marg_dev, abs(float(Fraction(count_v, tables.n) - uniform)))
        trace.append(UniformityStep(step * step_size, cond_dev, marg_dev))
    return trace


@dataclass(frozen=True)
class InjectionCheck:
    """Before/after naive-Bayes scores around a single sample injection."""

    before_same: Fraction
    after_same: Fraction
    before_other: Fraction
    after_other: Fraction
    skipped: bool

    @property
    def holds(self):
        return (not self.skipped
                and self.after_same > self.before_same
                and self.after_other < self.before_other)


def verify_injection_monotonicity(data: TabularDataset, sample) -> InjectionCheck:
    """Check that injecting (x, s, y) raises score(x,s,y) and lowers score(x,s,1-y).

    The strict-decrease side needs every factor of the opposite-label score
    positive (the exact-count regime); when the score is already 0
    the check is skipped with a flag.
    """
    x, s, y = sample
    tables = fit_tables(data, smoothing=0)
    before_same = score_nb(tables, x, s, y)
    before_other = score_nb(tables, x, s, 1 - y)
    augmented = append_rows(data, np.array([list(x)], dtype=object), [s], [y])
    after = fit_tables(augmented, smoothing=0)
    return InjectionCheck(
        before_same=before_same,
        after_same=score_nb(after, x, s, y),
        before_other=before_other,
        after_other=score_nb(after, x, s, 1 - y),
        skipped=before_other == 0,
    )


def trace_to_csv(trace, path):
    """Export a convergence trace (list of dataclass rows) as CSV."""
    if not trace:
        raise ValueError("empty trace")
    fields = list(trace[0].__dataclass_fields__)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for row in trace:
            writer.writerow([_csv_cell(getattr(row, name)) for name in fields])


def _csv_cell(value):
    if isinstance(value, Fraction):
        return float(value)
    if value is None:
        return ""
    return value
