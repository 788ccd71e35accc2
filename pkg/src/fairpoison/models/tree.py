"""CART-style decision tree with Gini impurity, grown without a depth cap."""

import numpy as np

from .base import BaseClassifier
from .validation import check_X_y, check_matrix

_LEAF = -1


def _gini(ones, total):
    p = ones / total
    return 2.0 * p * (1.0 - p)


class DecisionTreeClassifier(BaseClassifier):
    """Binary decision tree.

    Splits maximize Gini gain; ties keep the first candidate in (feature
    index, threshold) order, leaves predict the majority label with ties
    toward 0. Nodes stop splitting when pure, smaller than
    ``min_samples_split``, or when no split has positive gain.
    """

    def __init__(self, min_samples_split=2):
        self.min_samples_split = min_samples_split

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        self.n_features_in_ = X.shape[1]
        self.feature_, self.threshold_ = [], []
        self.left_, self.right_, self.value_ = [], [], []

        stack = [(self._new_node(), np.arange(len(y)))]
        while stack:
            node, idx = stack.pop()
            ones = int(y[idx].sum())
            n = len(idx)
            if n < self.min_samples_split or ones == 0 or ones == n:
                self._make_leaf(node, ones, n)
                continue
            feat, thr = self._best_split(X, y, idx, ones)
            if feat is None:
                self._make_leaf(node, ones, n)
                continue
            go_left = X[idx, feat] <= thr
            self.feature_[node] = feat
            self.threshold_[node] = thr
            self.left_[node] = self._new_node()
            self.right_[node] = self._new_node()
            stack.append((self.left_[node], idx[go_left]))
            stack.append((self.right_[node], idx[~go_left]))
        return self

    def _new_node(self):
        self.feature_.append(_LEAF)
        self.threshold_.append(0.0)
        self.left_.append(_LEAF)
        self.right_.append(_LEAF)
        self.value_.append(0)
        return len(self.feature_) - 1

    def _make_leaf(self, node, ones, n):
        self.value_[node] = 1 if ones * 2 > n else 0

    def _best_split(self, X, y, idx, ones):
        n = len(idx)
        parent = _gini(ones, n)
        best_gain = 0.0
        best = (None, None)
        for feat in range(self.n_features_in_):
            col = X[idx, feat]
            order = np.argsort(col, kind="stable")
            vals = col[order]
            cut = np.flatnonzero(vals[:-1] < vals[1:])
            if cut.size == 0:
                continue
            ones_left = np.cumsum(y[idx][order])[cut]
            n_left = cut + 1.0
            n_right = n - n_left
            weighted = (n_left * _gini(ones_left, n_left)
                        + n_right * _gini(ones - ones_left, n_right)) / n
            gains = parent - weighted
            pos = int(np.argmax(gains))
            if gains[pos] > best_gain:
                best_gain = float(gains[pos])
                i = cut[pos]
                best = (feat, float((vals[i] + vals[i + 1]) / 2.0))
        return best

    def predict(self, X):
        self._check_fitted("feature_")
        X = check_matrix(X, self.n_features_in_)
        out = np.zeros(X.shape[0], dtype=int)
        stack = [(0, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if idx.size == 0:
                continue
            feat = self.feature_[node]
            if feat == _LEAF:
                out[idx] = self.value_[node]
                continue
            go_left = X[idx, feat] <= self.threshold_[node]
            stack.append((self.left_[node], idx[go_left]))
            stack.append((self.right_[node], idx[~go_left]))
        return out

    @property
    def node_count_(self):
        self._check_fitted("feature_")
        return len(self.feature_)
