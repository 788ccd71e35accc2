"""Gaussian naive Bayes for binary classification."""

import numpy as np

from .base import BaseClassifier
from .validation import check_X_y, check_matrix, require_both_classes

LOG_2PI = float(np.log(2.0 * np.pi))


class GaussianNaiveBayes(BaseClassifier):
    """Per-class, per-feature Gaussians with a variance floor.

    Prediction is the argmax of log prior + summed log densities; exact
    ties break toward class 0.
    """

    def __init__(self, var_floor=1e-9):
        self.var_floor = var_floor

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        require_both_classes(y)
        n, d = X.shape
        self.theta_ = np.zeros((2, d))
        self.var_ = np.zeros((2, d))
        self.class_count_ = np.zeros(2)
        for c in (0, 1):
            Xc = X[y == c]
            self.class_count_[c] = len(Xc)
            self.theta_[c] = Xc.mean(axis=0)
            self.var_[c] = np.maximum(Xc.var(axis=0), self.var_floor)
        self.log_prior_ = np.log(self.class_count_ / n)
        self.n_features_in_ = d
        return self

    def _joint_log_likelihood(self, X):
        jll = np.empty((X.shape[0], 2))
        for c in (0, 1):
            quad = ((X - self.theta_[c]) ** 2) / self.var_[c]
            jll[:, c] = self.log_prior_[c] - 0.5 * np.sum(LOG_2PI + np.log(self.var_[c]) + quad, axis=1)
        return jll

    def predict(self, X):
        self._check_fitted("theta_")
        X = check_matrix(X, self.n_features_in_)
        jll = self._joint_log_likelihood(X)
        # strict inequality: ties stay at class 0
        return (jll[:, 1] > jll[:, 0]).astype(int)
