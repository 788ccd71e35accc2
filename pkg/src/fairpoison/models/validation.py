"""Input checks shared by the classifiers."""

import numpy as np

from ..errors import DegenerateDataError


def check_matrix(X, n_features=None):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-d feature matrix, got shape {X.shape}")
    if n_features is not None and X.shape[1] != n_features:
        raise ValueError(f"expected {n_features} input columns, got {X.shape[1]}")
    return X


def check_X_y(X, y):
    X = check_matrix(X)
    y = np.asarray(y)
    if y.shape != (X.shape[0],):
        raise ValueError(f"X has {X.shape[0]} rows but y has shape {y.shape}")
    if X.shape[0] == 0:
        raise DegenerateDataError("cannot fit on an empty dataset")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be binary 0/1")
    return X, y.astype(int)


def require_both_classes(y):
    if y.min() == y.max():
        raise DegenerateDataError("training data contains a single class")
