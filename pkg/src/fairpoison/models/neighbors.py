"""K-nearest-neighbors with exact lowest-index tie resolution."""

import numpy as np

from .base import BaseClassifier
from .validation import check_X_y, check_matrix


class KNeighborsClassifier(BaseClassifier):
    """Majority vote over the k nearest training rows (Euclidean distance).

    Rows at equal distance are ranked by training-set index, lowest first,
    so predictions are independent of float noise in partial sorts. Vote
    ties resolve to class 0.
    """

    def __init__(self, n_neighbors=5, chunk_size=256):
        self.n_neighbors = n_neighbors
        self.chunk_size = chunk_size

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        if self.n_neighbors < 1:
            raise ValueError("n_neighbors must be >= 1")
        self._X = X
        self._y = y
        self._sq_norms = (X * X).sum(axis=1)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        self._check_fitted("_X")
        X = check_matrix(X, self.n_features_in_)
        k = min(self.n_neighbors, len(self._y))
        out = np.empty(X.shape[0], dtype=int)
        for start in range(0, X.shape[0], self.chunk_size):
            block = X[start:start + self.chunk_size]
            # squared distances; ordering matches Euclidean distance
            d = self._sq_norms - 2.0 * (block @ self._X.T)
            d += (block * block).sum(axis=1)[:, None]
            out[start:start + self.chunk_size] = self._vote_block(d, k)
        return out

    def _vote_block(self, d, k):
        n = d.shape[1]
        if k == n:
            kth = np.full(d.shape[0], np.inf)
        else:
            kth = np.partition(d, k - 1, axis=1)[:, k - 1]
        votes = np.empty(d.shape[0], dtype=int)
        for i in range(d.shape[0]):
            if np.isinf(kth[i]):
                chosen_ones = int(self._y.sum())
                votes[i] = 1 if 2 * chosen_ones > n else 0
                continue
            strictly = d[i] < kth[i]
            n_less = int(strictly.sum())
            ones = int(self._y[strictly].sum())
            need = k - n_less
            if need > 0:
                # equal-distance candidates enter by ascending training index
                eq_idx = np.flatnonzero(d[i] == kth[i])[:need]
                ones += int(self._y[eq_idx].sum())
            votes[i] = 1 if 2 * ones > k else 0
        return votes
