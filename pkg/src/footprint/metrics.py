"""Accuracy, ROC/AUC, confusion matrices and term-ideology correlation."""

import csv
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateLabels, LengthMismatch, MissingClass, SingleClass, UnknownLabel
from .sparsela import CsrMatrix

AXIS_VALUE = {"left": -1.0, "lib": -1.0, "center": 0.0, "right": 1.0, "auth": 1.0}


def accuracy(y, yhat):
    y, yhat = np.asarray(y), np.asarray(yhat)
    if y.shape != yhat.shape:
        raise LengthMismatch(f"{y.shape[0]} labels vs {yhat.shape[0]} predictions")
    if y.size == 0:
        raise LengthMismatch("accuracy of an empty set")
    return float(np.mean(y == yhat))


@dataclass(frozen=True)
class RocCurve:
    thresholds: np.ndarray
    tpr: np.ndarray
    fpr: np.ndarray


def _roc_counts(scores, positive):
    scores = np.asarray(scores, dtype=np.float64)
    positive = np.asarray(positive, dtype=bool)
    if scores.shape != positive.shape:
        raise LengthMismatch("scores and labels differ in length")
    n_pos = int(positive.sum())
    n_neg = positive.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("ROC needs both positive and negative examples")
    order = np.argsort(-scores, kind="stable")
    s, pos = scores[order], positive[order]
    last_of_group = np.r_[s[1:] != s[:-1], True]
    tp = np.cumsum(pos)[last_of_group]
    fp = np.cumsum(~pos)[last_of_group]
    tp = np.r_[0, tp].astype(np.int64)
    fp = np.r_[0, fp].astype(np.int64)
    # a row is called positive when its score is strictly above the threshold
    thresholds = np.r_[s[last_of_group], -np.inf]
    return thresholds, tp, fp, n_pos, n_neg


def roc_curve(scores, positive):
    thresholds, tp, fp, n_pos, n_neg = _roc_counts(scores, positive)
    return RocCurve(thresholds, tp / n_pos, fp / n_neg)


def binary_auc(scores, positive):
    """Trapezoidal area under the ROC curve.

    The trapezoids are summed in integer counts, so the result is exactly
    the Mann-Whitney statistic with ties counted as one half.
    """
    _, tp, fp, n_pos, n_neg = _roc_counts(scores, positive)
    twice_area = int(np.sum(np.diff(fp) * (tp[1:] + tp[:-1])))
    return twice_area / (2 * n_pos * n_neg)


def weighted_ovr_auc(proba, y, classes):
    """Prevalence-weighted one-vs-rest AUC.

    Column k of ``proba`` scores ``classes[k]``; returns the overall value
    and the per-class AUCs.
    """
    proba = np.asarray(proba, dtype=np.float64)
    y = np.asarray(y)
    classes = list(classes)
    if proba.shape != (y.shape[0], len(classes)):
        raise LengthMismatch("proba must be n x K with K = len(classes)")
    missing = [c for c in classes if not np.any(y == c)]
    if missing:
        raise MissingClass(f"classes absent from y: {missing}")
    per_class, prevalence = {}, {}
    overall = 0.0
    for k, c in enumerate(classes):
        pos = y == c
        auc = binary_auc(proba[:, k], pos)
        p = float(np.mean(pos))
        per_class[str(c)] = auc
        prevalence[str(c)] = p
        overall += p * auc
    return overall, per_class, prevalence


def confusion(y, yhat, class_order):
    """Counts with true class on rows and predicted class on columns."""
    index = {c: i for i, c in enumerate(class_order)}
    y, yhat = list(y), list(yhat)
    if len(y) != len(yhat):
        raise LengthMismatch("labels and predictions differ in length")
    out = np.zeros((len(index), len(index)), dtype=np.int64)
    for a, b in zip(y, yhat):
        if a not in index or b not in index:
            raise UnknownLabel(f"label {a if a not in index else b!r} not in class order")
        out[index[a], index[b]] += 1
    return out


def term_ideology_correlation(tfidf, labels):
    """Pearson r between each tf-idf column and the numeric axis label.

    Labels recode left/lib to -1, center to 0, right/auth to +1. Columns
    with zero variance get r = 0.
    """
    try:
        yv = np.array([AXIS_VALUE[v] for v in labels])
    except KeyError as exc:
        raise UnknownLabel(f"not a three-class label: {exc.args[0]!r}") from None
    if not isinstance(tfidf, CsrMatrix):
        tfidf = CsrMatrix.from_dense(tfidf)
    n = tfidf.shape[0]
    if yv.shape[0] != n:
        raise LengthMismatch("tf-idf rows and labels differ in length")
    yc = yv - yv.mean()
    syy = float(yc @ yc)
    if syy == 0:
        raise DegenerateLabels("label variance is zero")
    sxy = tfidf.tdot(yc)
    mean = tfidf.col_sums() / n
    sxx = tfidf.T.with_values(tfidf.T.values ** 2).row_sums() - n * mean * mean
    sxx = np.maximum(sxx, 0.0)
    r = np.zeros(tfidf.shape[1])
    live = sxx > 0
    r[live] = sxy[live] / np.sqrt(sxx[live] * syy)
    return r


def write_correlations(path, terms, r):
    order = sorted(range(len(terms)), key=lambda j: (-abs(r[j]), terms[j]))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["term", "r"])
        for j in order:
            w.writerow([terms[j], repr(float(r[j]))])


@dataclass
class EvalReport:
    accuracy: float
    confusion: list
    class_order: list
    n_test: int
    auc: Optional[float] = None
    per_class_auc: Optional[dict] = None
    class_prevalence: dict = field(default_factory=dict)
    n_train: int = 0
    n_val: int = 0
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        extra = d.pop("extra")
        d.update(extra)
        return d


def evaluate(model, x, y, n_train=0, n_val=0):
    """Accuracy, confusion and (when the model yields probabilities) AUC."""
    y = np.asarray(y)
    yhat = model.predict(x)
    classes = [c for c in model.classes_.tolist()]
    cm = confusion(y.tolist(), yhat.tolist(), classes)
    prevalence = {str(c): float(np.mean(y == c)) for c in classes}
    report = EvalReport(accuracy=accuracy(y, yhat), confusion=cm.tolist(),
                        class_order=[str(c) for c in classes], n_test=int(y.size),
                        class_prevalence=prevalence, n_train=n_train, n_val=n_val)
    if getattr(model, "has_proba", False) and all(np.any(y == c) for c in classes):
        proba = model.predict_proba(x)
        if len(classes) == 2:
            auc = binary_auc(proba[:, 1], y == classes[1])
            report.auc = auc
            report.per_class_auc = {str(classes[1]): auc}
        else:
            report.auc, report.per_class_auc, _ = weighted_ovr_auc(proba, y, classes)
    return report
