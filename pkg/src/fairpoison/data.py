"""Tabular fairness datasets: loading, validation, splitting, encoding.

A dataset couples a feature matrix X with a binary sensitive attribute S,
binary labels Y, and a schema describing each feature as categorical (a
finite value set) or continuous (a bounded range in post-normalization
units). The schema defines the feasible set that poisoning attacks sample
from and project onto.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace

import numpy as np

from .errors import IngestionError, SchemaError, ValidationError

CATEGORICAL = "categorical"
CONTINUOUS = "continuous"


@dataclass(frozen=True)
class Feature:
    """One column of the schema.

    Categorical features carry their full value set; continuous features
    carry observed bounds in post-normalization units (typically [0, 1]).
    """

    name: str
    kind: str
    values: tuple = ()
    bounds: tuple = (0.0, 1.0)

    def __post_init__(self):
        if self.kind not in (CATEGORICAL, CONTINUOUS):
            raise SchemaError(f"unknown feature kind {self.kind!r}")
        if self.kind == CATEGORICAL:
            if len(self.values) == 0:
                raise SchemaError(f"feature {self.name!r} has an empty value set")
        else:
            lo, hi = self.bounds
            if not lo <= hi:
                raise SchemaError(f"feature {self.name!r} has bounds {self.bounds} with min > max")

    @property
    def width(self):
        """Number of columns this feature occupies after one-hot encoding."""
        return len(self.values) if self.kind == CATEGORICAL else 1


@dataclass(frozen=True)
class FeatureSchema:
    """Ordered feature descriptions plus the sensitive/label column names."""

    features: tuple
    sensitive_name: str = "S"
    label_name: str = "Y"

    def __len__(self):
        return len(self.features)

    @property
    def encoded_width(self):
        return sum(f.width for f in self.features)

    def feature_names(self):
        return [f.name for f in self.features]


@dataclass(frozen=True)
class TabularDataset:
    """Immutable rows of (features, sensitive flag, label).

    X holds raw feature values (one column per schema feature, categorical
    values unencoded); S and Y are 0/1 integer vectors.
    """

    X: np.ndarray
    S: np.ndarray
    Y: np.ndarray
    schema: FeatureSchema
    orientation_flipped: bool = False

    def __post_init__(self):
        n = len(self.S)
        if len(self.X) != n or len(self.Y) != n:
            raise ValidationError("X, S, Y must have the same number of rows")
        if self.X.ndim != 2 or (n > 0 and self.X.shape[1] != len(self.schema)):
            raise ValidationError(
                f"expected {len(self.schema)} feature columns, got {self.X.shape}"
            )
        for vec, name in ((self.S, "S"), (self.Y, "Y")):
            if not np.isin(vec, (0, 1)).all():
                raise ValidationError(f"{name} must be binary 0/1")
        for arr in (self.X, self.S, self.Y):
            arr.setflags(write=False)

    def __len__(self):
        return len(self.S)

    @property
    def n_features(self):
        return len(self.schema)


@dataclass(frozen=True)
class DatasetStats:
    """Summary counts and positive-label proportions, overall and per group."""

    n_features: int
    n_overall: int
    n_s1: int
    n_s0: int
    pct_y1_overall: float
    pct_y1_s1: float
    pct_y1_s0: float

    def as_dict(self):
        return dict(self.__dict__)


@dataclass(frozen=True)
class ColumnRoles:
    """Column-role mapping for ``load_csv``: which CSV column plays which part."""

    sensitive: str
    label: str
    categorical: tuple = ()
    continuous: tuple = ()

    def __post_init__(self):
        names = [self.sensitive, self.label, *self.categorical, *self.continuous]
        if len(set(names)) != len(names):
            raise SchemaError("column roles assign the same column twice")
        if not self.categorical and not self.continuous:
            raise SchemaError("at least one feature column is required")


def _parse_binary(value, column, line):
    try:
        x = float(value)
    except ValueError:
        raise ValidationError(f"non-binary value {value!r} in column {column!r} (line {line})")
    if x not in (0.0, 1.0):
        raise ValidationError(f"non-binary value {value!r} in column {column!r} (line {line})")
    return int(x)


def load_csv(path, roles: ColumnRoles, schema: FeatureSchema | None = None) -> TabularDataset:
    """Load and validate a dataset from a comma-separated file with header.

    Continuous columns are min-max normalized to [0, 1] using the loaded
    file's observed bounds; categorical value sets are the distinct observed
    values. Passing a ``schema`` from a previously loaded dataset reuses its
    bounds (values are clamped) and value sets instead, so held-out files are
    expressed in the training data's units.

    If the positive rate of group S=1 is below that of S=0, S is relabeled
    as 1-S at load time so that S=1 is always the advantaged group.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise IngestionError(f"{path}: empty file")
            rows = list(reader)
    except OSError as exc:
        raise IngestionError(f"{path}: {exc}") from exc
    return build_dataset(header, rows, roles, schema, origin=str(path))


def build_dataset(header, rows, roles: ColumnRoles, schema: FeatureSchema | None = None,
                  origin: str = "<memory>") -> TabularDataset:
    """Parse already-read CSV cells (lists of strings) into a dataset.

    This is the whole of ``load_csv`` minus the file I/O, shared with
    generators that materialize rows in memory.
    """
    path = origin
    if not rows:
        raise IngestionError(f"{path}: no data rows")
    if len(set(header)) != len(header):
        raise IngestionError(f"{path}: duplicate column names in header")

    col_index = {name: i for i, name in enumerate(header)}
    feature_names = list(roles.categorical) + list(roles.continuous)
    for name in (roles.sensitive, roles.label, *feature_names):
        if name not in col_index:
            raise SchemaError(f"{path}: column {name!r} not found in header")

    n = len(rows)
    expected_width = len(header)
    for i, row in enumerate(rows):
        if len(row) != expected_width:
            raise IngestionError(f"{path}: line {i + 2} has {len(row)} fields, expected {expected_width}")
        for name in (roles.sensitive, roles.label, *feature_names):
            if row[col_index[name]] == "":
                raise ValidationError(f"{path}: missing value in column {name!r} (line {i + 2})")

    S = np.array([_parse_binary(r[col_index[roles.sensitive]], roles.sensitive, i + 2)
                  for i, r in enumerate(rows)])
    Y = np.array([_parse_binary(r[col_index[roles.label]], roles.label, i + 2)
                  for i, r in enumerate(rows)])

    if schema is not None:
        expected = list(roles.categorical) + list(roles.continuous)
        if schema.feature_names() != expected:
            raise SchemaError("supplied schema does not match the column roles")

    features = []
    columns = []
    schema_by_name = {f.name: f for f in schema.features} if schema is not None else {}

    for name in roles.categorical:
        raw = [r[col_index[name]] for r in rows]
        distinct = sorted(set(raw))
        numeric = _all_numeric(distinct)
        if numeric:
            raw = [float(v) for v in raw]
            distinct = sorted(float(v) for v in distinct)
        if name in schema_by_name:
            feat = schema_by_name[name]
            known = set(feat.values)
            unknown = sorted({v for v in raw if v not in known}, key=str)
            if unknown:
                raise ValidationError(f"{path}: column {name!r} has values {unknown} outside the schema value set")
        else:
            feat = Feature(name, CATEGORICAL, values=tuple(distinct))
        features.append(feat)
        columns.append(raw)

    for name in roles.continuous:
        try:
            raw = np.array([float(r[col_index[name]]) for r in rows])
        except ValueError as exc:
            raise IngestionError(f"{path}: column {name!r} is not numeric ({exc})")
        if name in schema_by_name:
            feat = schema_by_name[name]
            lo, hi = feat.bounds
            span = hi - lo
            scaled = (raw - lo) / span if span > 0 else np.zeros(n)
            scaled = np.clip(scaled, 0.0, 1.0)
        else:
            lo, hi = raw.min(), raw.max()
            span = hi - lo
            scaled = (raw - lo) / span if span > 0 else np.zeros(n)
            feat = Feature(name, CONTINUOUS, bounds=(0.0, 1.0 if span > 0 else 0.0))
        features.append(feat)
        columns.append(scaled)

    X = np.empty((n, len(features)), dtype=object)
    for j, col in enumerate(columns):
        X[:, j] = col

    flipped = False
    if S.any() and (S == 0).any():
        p1 = Y[S == 1].mean()
        p0 = Y[S == 0].mean()
        if p1 < p0:
            S = 1 - S
            flipped = True

    out_schema = FeatureSchema(tuple(features), sensitive_name=roles.sensitive, label_name=roles.label)
    return TabularDataset(X, S, Y, out_schema, orientation_flipped=flipped)


def _all_numeric(values):
    try:
        for v in values:
            float(v)
    except (TypeError, ValueError):
        return False
    return True


def write_csv(data: TabularDataset, path):
    """Export a dataset in the same format ``load_csv`` reads."""
    schema = data.schema
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(schema.feature_names() + [schema.sensitive_name, schema.label_name])
        for i in range(len(data)):
            row = [_format_cell(v) for v in data.X[i]]
            writer.writerow(row + [int(data.S[i]), int(data.Y[i])])


def _format_cell(value):
    if isinstance(value, float):
        return repr(value)
    return value


def take(data: TabularDataset, indices) -> TabularDataset:
    """New dataset holding the given rows, schema preserved."""
    idx = np.asarray(indices, dtype=int)
    return TabularDataset(
        data.X[idx].copy(), data.S[idx].copy(), data.Y[idx].copy(),
        data.schema, orientation_flipped=data.orientation_flipped,
    )


def split(data: TabularDataset, train_fraction: float, seed: int):
    """Deterministic disjoint row partition into (train, test)."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = len(data)
    n_train = int(n * train_fraction)
    if n_train == 0 or n_train == n:
        raise ValueError(f"split {train_fraction} of {n} rows empties one side")
    order = np.random.default_rng(seed).permutation(n)
    return take(data, np.sort(order[:n_train])), take(data, np.sort(order[n_train:]))


def subset(data: TabularDataset, s=None, y=None, predictions=None, predicted=None):
    """Rows matching the given (S, Y, prediction) conditions; may be empty."""
    mask = np.ones(len(data), dtype=bool)
    if s is not None:
        mask &= data.S == s
    if y is not None:
        mask &= data.Y == y
    if (predictions is None) != (predicted is None):
        raise ValueError("predictions and predicted must be supplied together")
    if predictions is not None:
        predictions = np.asarray(predictions)
        if predictions.shape != (len(data),):
            raise ValidationError(
                f"prediction vector of length {len(predictions)} does not align with {len(data)} rows"
            )
        mask &= predictions == predicted
    return take(data, np.flatnonzero(mask))


def stats(data: TabularDataset) -> DatasetStats:
    """Counts and positive-label proportions; feature count is post-encoding."""
    if len(data) == 0:
        raise ValidationError("stats of an empty dataset are undefined")
    s1 = data.S == 1
    n_s1 = int(s1.sum())
    n_s0 = len(data) - n_s1
    return DatasetStats(
        n_features=data.schema.encoded_width,
        n_overall=len(data),
        n_s1=n_s1,
        n_s0=n_s0,
        pct_y1_overall=float(data.Y.mean()),
        pct_y1_s1=float(data.Y[s1].mean()) if n_s1 else 0.0,
        pct_y1_s0=float(data.Y[~s1].mean()) if n_s0 else 0.0,
    )


def append_rows(data: TabularDataset, X_rows, s_values, y_values) -> TabularDataset:
    """Dataset extended with extra rows (used to join poisoned samples)."""
    X_rows = np.asarray(X_rows, dtype=object)
    if X_rows.ndim == 1:
        X_rows = X_rows.reshape(0, len(data.schema)) if X_rows.size == 0 else X_rows.reshape(1, -1)
    if X_rows.shape[0] == 0:
        return data
    X = np.concatenate([data.X, X_rows])
    S = np.concatenate([data.S, np.asarray(s_values, dtype=data.S.dtype)])
    Y = np.concatenate([data.Y, np.asarray(y_values, dtype=data.Y.dtype)])
    return TabularDataset(X, S, Y, data.schema, orientation_flipped=data.orientation_flipped)


# --- model-boundary encoding -------------------------------------------------

def encode_features(schema: FeatureSchema, X) -> np.ndarray:
    """Raw feature rows -> float matrix (categorical one-hot, continuous as-is)."""
    X = np.asarray(X, dtype=object)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    n = X.shape[0]
    out = np.zeros((n, schema.encoded_width))
    col = 0
    for j, feat in enumerate(schema.features):
        if feat.kind == CATEGORICAL:
            index = {v: k for k, v in enumerate(feat.values)}
            for i in range(n):
                v = X[i, j]
                if v not in index:
                    raise SchemaError(f"value {v!r} not in value set of feature {feat.name!r}")
                out[i, col + index[v]] = 1.0
            col += len(feat.values)
        else:
            out[:, col] = X[:, j].astype(float)
            col += 1
    return out


def encode_dataset(data: TabularDataset):
    """Dataset -> (model input matrix with S appended as the last column, y)."""
    Xf = encode_features(data.schema, data.X)
    return np.column_stack([Xf, data.S.astype(float)]), data.Y.copy()


def encode_rows(schema: FeatureSchema, X_rows, s_values):
    """Raw poisoned rows -> model input matrix, matching ``encode_dataset`` layout."""
    Xf = encode_features(schema, X_rows)
    return np.column_stack([Xf, np.asarray(s_values, dtype=float)])


def uniform_rows(schema: FeatureSchema, count: int, rng) -> np.ndarray:
    """Feasible rows with each feature drawn uniformly from its value set/range."""
    out = np.empty((count, len(schema)), dtype=object)
    for j, feat in enumerate(schema.features):
        if feat.kind == CATEGORICAL:
            picks = rng.integers(0, len(feat.values), size=count)
            out[:, j] = [feat.values[k] for k in picks]
        else:
            lo, hi = feat.bounds
            out[:, j] = rng.uniform(lo, hi, size=count)
    return out


def discretize_continuous(data: TabularDataset, bins: int = 10) -> TabularDataset:
    """Equal-width binning of continuous features over their schema bounds.

    Produces an all-categorical dataset (bin indices 0..bins-1 as values) for
    the exact counting oracles, which are defined over finite value sets.
    """
    features = []
    X = data.X.copy()
    for j, feat in enumerate(data.schema.features):
        if feat.kind == CATEGORICAL:
            features.append(feat)
            continue
        lo, hi = feat.bounds
        span = hi - lo
        col = X[:, j].astype(float)
        if span > 0:
            binned = np.minimum((bins * (col - lo) / span).astype(int), bins - 1)
        else:
            binned = np.zeros(len(col), dtype=int)
        X[:, j] = [int(b) for b in binned]
        features.append(Feature(feat.name, CATEGORICAL, values=tuple(range(bins))))
    schema = replace(data.schema, features=tuple(features))
    return TabularDataset(X, data.S.copy(), data.Y.copy(), schema,
                          orientation_flipped=data.orientation_flipped)
