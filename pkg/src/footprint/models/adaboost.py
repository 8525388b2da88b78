"""SAMME multi-class AdaBoost over weighted-Gini decision stumps."""

import math

import numpy as np

from ..errors import SingleClass
from .base import Classifier, check_xy, encode
from .tree import DecisionTree


def samme_alpha(error, n_classes, eta=1.0):
    """Stage weight ``eta * log((1 - err) / err) + log(K - 1)``."""
    return eta * math.log((1.0 - error) / error) + math.log(n_classes - 1)


class AdaBoost(Classifier):
    """SAMME boosting.

    Each round fits a stump on the current weights, computes its weighted
    error ``err``, then multiplies misclassified weights by ``exp(alpha)`` and
    renormalizes. Fitting stops early when ``err >= 1 - 1/K`` (the round is
    discarded) or when ``err == 0`` (the perfect stump is kept with weight 1).
    """

    def __init__(self, n_rounds=50, eta=1.0, seed=0):
        if n_rounds < 1:
            raise ValueError("n_rounds must be >= 1")
        if not 0 < eta <= 1:
            raise ValueError("eta must lie in (0, 1]")
        self.n_rounds = n_rounds
        self.eta = eta
        self.seed = seed

    def fit(self, x, y):
        x, y = check_xy(x, y)
        self.classes_, codes = encode(y)
        k = self.classes_.size
        if k < 2:
            raise SingleClass("AdaBoost needs at least 2 classes")
        n = x.shape[0]
        w = np.full(n, 1.0 / n)
        self.stumps_, self.alphas_, self.errors_, self.weight_sums_ = [], [], [], []
        self.fallback_ = self.classes_[int(np.argmax(np.bincount(codes, minlength=k)))]
        for _ in range(self.n_rounds):
            stump = DecisionTree(max_depth=1, seed=self.seed).fit(x, y, sample_weight=w,
                                                                  classes=self.classes_)
            miss = stump.predict(x) != y
            err = float(np.sum(w[miss]) / np.sum(w))
            self.errors_.append(err)
            if err <= 0.0:
                self.stumps_.append(stump)
                self.alphas_.append(1.0)
                break
            if err >= 1.0 - 1.0 / k:
                break
            alpha = samme_alpha(err, k, self.eta)
            self.stumps_.append(stump)
            self.alphas_.append(alpha)
            w = w * np.exp(alpha * miss)
            w = w / np.sum(w)
            self.weight_sums_.append(float(np.sum(w)))
        self.alphas_ = np.array(self.alphas_)
        return self

    def decision_scores(self, x):
        """Alpha-weighted vote totals per class."""
        self._check_fitted()
        x = check_xy(x)
        scores = np.zeros((x.shape[0], self.classes_.size))
        rows = np.arange(x.shape[0])
        for stump, alpha in zip(self.stumps_, self.alphas_):
            pred = np.argmax(stump.value_[stump.apply(x)], axis=1)
            scores[rows, pred] += alpha
        return scores

    def predict(self, x):
        if not self.stumps_:
            return np.full(np.asarray(x).shape[0], self.fallback_, dtype=self.classes_.dtype)
        return super().predict(x)

    def predict_proba(self, x):
        """Vote shares (alpha-weighted votes over total alpha)."""
        s = self.decision_scores(x)
        total = float(np.sum(self.alphas_))
        if total <= 0:
            out = np.zeros_like(s)
            out[:, int(np.searchsorted(self.classes_, self.fallback_))] = 1.0
            return out
        return s / total
