"""Four from-scratch binary classifiers behind one train/predict interface.

All four consume the encoded model space (one-hot categoricals, normalized
continuous features, sensitive attribute appended as the last input column)
and emit 0/1 predictions. Training is deterministic given (kind, data,
seed); prediction ties break toward class 0.
"""

import json
from dataclasses import dataclass

import numpy as np

from ..data import TabularDataset, encode_dataset
from ..errors import DegenerateDataError
from .base import BaseClassifier
from .logistic import LogisticRegressionGD
from .naive_bayes import GaussianNaiveBayes
from .neighbors import KNeighborsClassifier
from .tree import DecisionTreeClassifier

MODEL_KINDS = {
    "gnb": GaussianNaiveBayes,
    "lr": LogisticRegressionGD,
    "dt": DecisionTreeClassifier,
    "knn": KNeighborsClassifier,
}


def make_classifier(kind: str) -> BaseClassifier:
    """Fresh classifier of the given kind with the fixed hyperparameters."""
    try:
        return MODEL_KINDS[kind]()
    except KeyError:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {sorted(MODEL_KINDS)}")


@dataclass(frozen=True)
class TrainedModel:
    """A fitted classifier bound to the schema it was trained against."""

    kind: str
    classifier: BaseClassifier
    input_width: int
    seed: int

    def predict(self, data: TabularDataset) -> np.ndarray:
        M, _ = encode_dataset(data)
        return self.predict_encoded(M)

    def predict_encoded(self, M: np.ndarray) -> np.ndarray:
        if M.shape[1] != self.input_width:
            raise ValueError(f"model expects {self.input_width} input columns, got {M.shape[1]}")
        return self.classifier.predict(M)

    def params_summary(self) -> dict:
        """JSON-able view of the learned parameters, for debugging dumps."""
        clf = self.classifier
        out = {"kind": self.kind, "input_width": self.input_width, "seed": self.seed,
               "hyperparameters": clf.get_params()}
        if isinstance(clf, GaussianNaiveBayes):
            out["class_prior"] = list(np.exp(clf.log_prior_))
            out["mean"] = clf.theta_.tolist()
            out["variance"] = clf.var_.tolist()
        elif isinstance(clf, LogisticRegressionGD):
            out["coef"] = clf.coef_.tolist()
            out["intercept"] = clf.intercept_
            out["n_iter"] = clf.n_iter_
        elif isinstance(clf, DecisionTreeClassifier):
            out["n_nodes"] = clf.node_count_
        elif isinstance(clf, KNeighborsClassifier):
            out["n_train"] = len(clf._y)
        return out


def train_model(kind: str, data: TabularDataset, seed: int = 0) -> TrainedModel:
    """Fit a classifier of the given kind on a dataset.

    GNB and LR reject single-class training data; the tree and KNN accept
    it (they degenerate to a constant predictor).
    """
    if len(data) == 0:
        raise DegenerateDataError("cannot train on an empty dataset")
    M, y = encode_dataset(data)
    clf = make_classifier(kind)
    clf.fit(M, y)
    return TrainedModel(kind=kind, classifier=clf, input_width=M.shape[1], seed=seed)


def dump_params(model: TrainedModel, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.params_summary(), fh, indent=2)


__all__ = [
    "MODEL_KINDS",
    "BaseClassifier",
    "GaussianNaiveBayes",
    "LogisticRegressionGD",
    "DecisionTreeClassifier",
    "KNeighborsClassifier",
    "TrainedModel",
    "make_classifier",
    "train_model",
    "dump_params",
]
