import numpy as np

from ..errors import EmptyTrainingSet
from .base import Classifier, encode


class ZeroR(Classifier):
    """Predicts the training plurality class for every row."""

    majority = None

    def fit(self, x, y):
        y = np.asarray(y)
        if y.size == 0:
            raise EmptyTrainingSet("ZeroR needs at least one label")
        self.classes_, codes = encode(y)
        self.counts_ = np.bincount(codes, minlength=self.classes_.size)
        self.majority = self.classes_[int(np.argmax(self.counts_))]
        return self

    def predict_proba(self, x):
        self._check_fitted()
        n = len(x) if not hasattr(x, "shape") else x.shape[0]
        p = self.counts_ / self.counts_.sum()
        return np.tile(p, (n, 1))

    def predict(self, x):
        self._check_fitted()
        n = len(x) if not hasattr(x, "shape") else x.shape[0]
        return np.full(n, self.majority, dtype=self.classes_.dtype)
