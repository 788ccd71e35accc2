"""Binary logistic regression trained by fixed-rate gradient descent."""

import warnings

import numpy as np

from .base import BaseClassifier
from .validation import check_X_y, check_matrix, require_both_classes


def _sigmoid(z):
    # saturates beyond |z| = 35, below float64 resolution of the result
    return 1.0 / (1.0 + np.exp(-np.clip(z, -35.0, 35.0)))


class LogisticRegressionGD(BaseClassifier):
    """L2-penalized logistic regression, deterministic full-batch descent.

    The step size is fixed at 1/L where L bounds the loss curvature from
    the data, so the recorded loss curve is non-increasing without any line
    search. The intercept is unpenalized. Decision threshold is probability
    0.5 with ties toward class 0.
    """

    def __init__(self, l2=1.0, max_iter=1000, tol=1e-6, checkpoint_every=10):
        self.l2 = l2
        self.max_iter = max_iter
        self.tol = tol
        self.checkpoint_every = checkpoint_every

    def _loss(self, Xb, y, w):
        z = Xb @ w
        # log(1 + exp(-margin)) computed stably via logaddexp
        margins = np.where(y == 1, z, -z)
        ce = np.logaddexp(0.0, -margins).mean()
        return ce + 0.5 * self.l2 * np.dot(w[:-1], w[:-1]) / len(y)

    def fit(self, X, y):
        X, y = check_X_y(X, y)
        require_both_classes(y)
        n, d = X.shape
        Xb = np.column_stack([X, np.ones(n)])
        w = np.zeros(d + 1)

        # curvature bound: sigmoid'' <= 1/4, plus the ridge term
        lipschitz = 0.25 * float((Xb * Xb).sum(axis=1).mean()) + self.l2 / n
        step = 1.0 / lipschitz

        self.loss_curve_ = [self._loss(Xb, y, w)]
        converged = False
        iteration = 0
        for iteration in range(1, self.max_iter + 1):
            p = _sigmoid(Xb @ w)
            grad = Xb.T @ (p - y) / n
            grad[:-1] += self.l2 * w[:-1] / n
            w -= step * grad
            if iteration % self.checkpoint_every == 0:
                self.loss_curve_.append(self._loss(Xb, y, w))
            if np.abs(grad).max() < self.tol:
                converged = True
                break
        if iteration % self.checkpoint_every != 0:
            self.loss_curve_.append(self._loss(Xb, y, w))
        if not converged:
            warnings.warn(
                f"gradient descent did not reach tol={self.tol} within "
                f"{self.max_iter} iterations; returning the last iterate",
                RuntimeWarning,
            )
        self.coef_ = w[:-1]
        self.intercept_ = float(w[-1])
        self.n_iter_ = iteration
        self.n_features_in_ = d
        return self

    def decision_function(self, X):
        self._check_fitted("coef_")
        X = check_matrix(X, self.n_features_in_)
        return X @ self.coef_ + self.intercept_

    def predict(self, X):
        # P(y=1) > 0.5 is equivalent to a positive margin
        return (self.decision_function(X) > 0).astype(int)
