"""Random and non-random anchoring attacks (comparison baselines).

Both pick a positive anchor from the disadvantaged group and a negative
anchor from the advantaged group, flip the anchors' labels, project the
feature vectors onto the feasible set, and duplicate the two flipped rows
so the poisoned set keeps the clean data's positive/negative proportions.
RAA picks anchors uniformly at random; NRAA picks the rows with the most
same-(S, Y) neighbors and is deterministic given the data.
"""

from __future__ import annotations

import math

import numpy as np

from ..data import CATEGORICAL, FeatureSchema, TabularDataset, encode_features
from ..errors import DegenerateDataError, SchemaError
from .candidate import AnchorChoice, CandidateDataset
from .pfa import poison_budget

RADIUS_SAMPLE_ROWS = 200


def project_feasible(x, schema: FeatureSchema):
    """Project a feature vector onto the schema's feasible set.

    Continuous entries are clamped to the schema bounds; categorical
    entries are snapped to the nearest member of the value set (numeric
    value sets only; ties go to the smaller value).
    """
    x = list(x)
    if len(x) != len(schema):
        raise ValueError(f"expected {len(schema)} features, got {len(x)}")
    out = []
    for value, feat in zip(x, schema.features):
        if feat.kind == CATEGORICAL:
            if value in feat.values:
                out.append(value)
                continue
            try:
                target = float(value)
                candidates = [(abs(float(v) - target), float(v)) for v in feat.values]
            except (TypeError, ValueError):
                raise SchemaError(
                    f"cannot project value {value!r} onto non-numeric value set of {feat.name!r}"
                )
            out.append(min(candidates)[1])
        else:
            lo, hi = feat.bounds
            out.append(min(max(float(value), lo), hi))
    return out


def _duplication_counts(budget: int, positive_fraction: float):
    """Split the budget so poisoned label proportions mirror the clean data."""
    n_positive = int(math.floor(budget * positive_fraction + 0.5))
    return n_positive, budget - n_positive


def _anchor_pools(train: TabularDataset):
    positive_pool = np.flatnonzero((train.S == 0) & (train.Y == 1))
    negative_pool = np.flatnonzero((train.S == 1) & (train.Y == 0))
    if len(positive_pool) == 0 or len(negative_pool) == 0:
        raise DegenerateDataError(
            "anchoring needs a disadvantaged-positive and an advantaged-negative pool"
        )
    return positive_pool, negative_pool


def _assemble(train, pos_idx, neg_idx, budget, pos_neighbors=None, neg_neighbors=None):
    schema = train.schema
    # flipping aligns each anchor's label with its group: Y = S on every row
    flipped_negative = project_feasible(train.X[pos_idx], schema)  # (x, S=0, Y=0)
    flipped_positive = project_feasible(train.X[neg_idx], schema)  # (x, S=1, Y=1)
    n_positive, n_negative = _duplication_counts(budget, float(train.Y.mean()))

    X_rows = np.empty((budget, len(schema)), dtype=object)
    for i in range(n_positive):
        X_rows[i] = flipped_positive
    for i in range(n_positive, budget):
        X_rows[i] = flipped_negative
    S = np.concatenate([np.ones(n_positive, dtype=int), np.zeros(n_negative, dtype=int)])
    anchors = (
        AnchorChoice(row_index=int(neg_idx), s=1, y=0, neighbor_count=neg_neighbors),
        AnchorChoice(row_index=int(pos_idx), s=0, y=1, neighbor_count=pos_neighbors),
    )
    return CandidateDataset(X_rows=X_rows, S=S, Y=S.copy(),
                            provenance=("anchor",) * budget, anchors=anchors)


def raa(train: TabularDataset, epsilon: float, rng) -> CandidateDataset:
    """Random anchoring attack: one candidate with uniformly chosen anchors."""
    budget = poison_budget(epsilon, len(train))
    positive_pool, negative_pool = _anchor_pools(train)
    pos_idx = positive_pool[rng.integers(0, len(positive_pool))]
    neg_idx = negative_pool[rng.integers(0, len(negative_pool))]
    if budget == 0:
        return _empty(train)
    return _assemble(train, pos_idx, neg_idx, budget)


def neighborhood_radius(train: TabularDataset) -> float:
    """Mean pairwise distance over a deterministic <=200-row subsample."""
    n = len(train)
    take = min(RADIUS_SAMPLE_ROWS, n)
    idx = np.unique(np.linspace(0, n - 1, take).astype(int))
    M = encode_features(train.schema, train.X[idx])
    sq = (M * M).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (M @ M.T)
    np.fill_diagonal(d2, 0.0)
    d = np.sqrt(np.maximum(d2, 0.0))
    m = len(idx)
    if m < 2:
        return 0.0
    return float(d.sum() / (m * (m - 1)))


def _densest_row(train, pool, radius):
    """Pool row with the most same-pool rows within the radius; ties take the
    lowest training-set index (self counts, a constant offset)."""
    M = encode_features(train.schema, train.X[pool])
    sq = (M * M).sum(axis=1)
    best_idx, best_count = None, -1
    r2 = radius * radius
    for i in range(len(pool)):
        d2 = sq + sq[i] - 2.0 * (M @ M[i])
        count = int((d2 <= r2 + 1e-12).sum())
        if count > best_count:
            best_idx, best_count = pool[i], count
    return int(best_idx), best_count


def nraa(train: TabularDataset, epsilon: float, rng=None) -> CandidateDataset:
    """Non-random anchoring attack: density-maximal anchors, data-deterministic.

    ``rng`` is accepted for signature parity with ``raa`` but unused; every
    candidate this method produces for a given dataset is identical.
    """
    budget = poison_budget(epsilon, len(train))
    positive_pool, negative_pool = _anchor_pools(train)
    radius = neighborhood_radius(train)
    pos_idx, pos_count = _densest_row(train, positive_pool, radius)
    neg_idx, neg_count = _densest_row(train, negative_pool, radius)
    if budget == 0:
        return _empty(train)
    return _assemble(train, pos_idx, neg_idx, budget,
                     pos_neighbors=pos_count, neg_neighbors=neg_count)


def _empty(train):
    return CandidateDataset(
        X_rows=np.empty((0, len(train.schema)), dtype=object),
        S=np.empty(0, dtype=int), Y=np.empty(0, dtype=int), provenance=())
