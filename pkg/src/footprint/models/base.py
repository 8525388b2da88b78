"""Shared classifier plumbing: label encoding, weighting, tie-breaking."""

import numpy as np

from ..errors import DimensionError, EmptyTrainingSet, LengthMismatch, NonFinite, NotFittedError

WEIGHTINGS = ("uniform", "balanced")


def check_xy(x, y=None):
    x = np.asarray(getattr(x, "data", x), dtype=np.float64)
    if x.ndim != 2:
        raise DimensionError("features must be a 2-D array")
    if not np.all(np.isfinite(x)):
        raise NonFinite("features contain NaN or inf")
    if y is None:
        return x
    y = np.asarray(y)
    if y.ndim != 1:
        raise DimensionError("labels must be 1-D")
    if y.shape[0] != x.shape[0]:
        raise LengthMismatch(f"{x.shape[0]} rows but {y.shape[0]} labels")
    if y.shape[0] == 0:
        raise EmptyTrainingSet("no training rows")
    return x, y


def encode(y):
    """Sorted class array and integer codes; sorted order makes argmax ties
    resolve to the lexicographically smallest class."""
    classes, codes = np.unique(y, return_inverse=True)
    return classes, codes


def class_weights(codes, mode, n_classes=None, counts=None):
    """Per-row weights. ``balanced`` gives ``n / n_k`` for a row of class k.

    ``counts`` are row multiplicities (bootstrap draws); class sizes and ``n``
    are counted with multiplicity.
    """
    if mode not in WEIGHTINGS:
        raise ValueError(f"weighting must be one of {WEIGHTINGS}")
    codes = np.asarray(codes)
    mult = np.ones(codes.shape[0]) if counts is None else np.asarray(counts, dtype=np.float64)
    if mode == "uniform":
        return np.ones(codes.shape[0])
    k = int(codes.max()) + 1 if n_classes is None else n_classes
    per_class = np.bincount(codes, weights=mult, minlength=k)
    n = mult.sum()
    with np.errstate(divide="ignore"):
        w = np.where(per_class > 0, n / np.where(per_class > 0, per_class, 1.0), 0.0)
    return w[codes]


def argmax_rows(scores):
    """Row-wise argmax; the first (lexicographically smallest) class wins ties."""
    return np.argmax(scores, axis=1)


def add_intercept(x):
    return np.hstack([np.ones((x.shape[0], 1)), x])


class Classifier:
    """Minimal fit/predict contract shared by every model."""

    classes_ = None

    def _check_fitted(self):
        if self.classes_ is None:
            raise NotFittedError(f"{type(self).__name__} is not fitted")

    def predict(self, x):
        scores = self.decision_scores(x)
        return self.classes_[argmax_rows(scores)]

    def decision_scores(self, x):
        """n x K matrix whose row argmax is the prediction."""
        return self.predict_proba(x)

    @property
    def has_proba(self):
        return True

    def score(self, x, y):
        return float(np.mean(self.predict(x) == np.asarray(y)))
