"""Binary and multinomial logistic regression, optionally l1-penalized.

Both maximize the weighted mean log-likelihood ``(1/n) sum_i w_i log P(y_i)``
minus ``lam`` times the l1 norm of the non-intercept coefficients, solved as
the equivalent minimization. Coefficients are capped at ``|beta_j| <= 30``
so separable data yields finite estimates (with a warning).
"""

import warnings

import numpy as np
from scipy.special import expit, log_softmax, softmax

from ..errors import DimensionError, MissingClass, SingleClass
from .base import Classifier, add_intercept, check_xy, class_weights, encode
from .optim import newton_box, proximal_gradient

COEF_CAP = 30.0


class SeparableWarning(UserWarning):
    pass


# binary ---------------------------------------------------------------------

def logistic_objective(beta, x1, y, w, lam=0.0):
    """Negative weighted mean log-likelihood plus the l1 penalty."""
    z = x1 @ beta
    loss = np.logaddexp(0.0, z) - y * z
    return float(np.mean(w * loss)) + lam * float(np.sum(np.abs(beta[1:])))


def logistic_gradient(beta, x1, y, w):
    """Gradient of the smooth part of ``logistic_objective``."""
    r = w * (expit(x1 @ beta) - y)
    return x1.T @ r / x1.shape[0]


def logistic_hessian(beta, x1, y, w):
    p = expit(x1 @ beta)
    d = w * p * (1.0 - p) / x1.shape[0]
    return (x1 * d[:, None]).T @ x1


def _warn_if_capped(info, name):
    if info["capped"]:
        warnings.warn(f"{name}: coefficients hit the +-{COEF_CAP:g} cap; "
                      "the training data is (quasi-)separable", SeparableWarning, stacklevel=3)


class LogisticRegression(Classifier):
    """Two-class logistic regression; ``classes_[1]`` is the positive class."""

    def __init__(self, lam=0.0, weighting="uniform", tol=1e-8, max_iter=1000):
        self.lam = float(lam)
        self.weighting = weighting
        self.tol = tol
        self.max_iter = max_iter
        self.coef_ = None

    def fit(self, x, y, sample_weight=None):
        x, y = check_xy(x, y)
        classes, codes = encode(y)
        if classes.size != 2:
            raise SingleClass(f"logistic regression needs exactly 2 classes, got {classes.size}")
        self.classes_ = classes
        w = class_weights(codes, self.weighting, 2)
        if sample_weight is not None:
            w = w * np.asarray(sample_weight, dtype=np.float64)
        x1 = add_intercept(x)
        yf = codes.astype(np.float64)
        beta0 = np.zeros(x1.shape[1])
        fun = lambda b: logistic_objective(b, x1, yf, w)
        grad = lambda b: logistic_gradient(b, x1, yf, w)
        if self.lam > 0:
            penalty = np.full(x1.shape[1], self.lam)
            penalty[0] = 0.0
            beta, info = proximal_gradient(fun, grad, beta0, penalty, COEF_CAP,
                                           self.tol, self.max_iter)
        else:
            hess = lambda b: logistic_hessian(b, x1, yf, w)
            beta, info = newton_box(fun, grad, hess, beta0, COEF_CAP, self.tol, self.max_iter)
        _warn_if_capped(info, "LogisticRegression")
        self.coef_ = beta
        self.fit_info_ = info
        return self

    def decision_function(self, x):
        self._check_fitted()
        x = check_xy(x)
        if x.shape[1] != self.coef_.shape[0] - 1:
            raise DimensionError(f"expected {self.coef_.shape[0] - 1} features, got {x.shape[1]}")
        return self.coef_[0] + x @ self.coef_[1:]

    def predict_proba(self, x):
        p = expit(self.decision_function(x))
        return np.column_stack([1.0 - p, p])

    def objective(self, x, y):
        x, y = check_xy(x, y)
        codes = np.searchsorted(self.classes_, y)
        w = class_weights(codes, self.weighting, 2)
        return logistic_objective(self.coef_, add_intercept(x), codes.astype(float), w, self.lam)


# multinomial ----------------------------------------------------------------

def _full_logits(b, x1, k):
    z = x1 @ b.reshape(x1.shape[1], k - 1)
    return np.hstack([np.zeros((x1.shape[0], 1)), z])


def multinomial_objective(b, x1, onehot, w, lam=0.0):
    """Negative weighted mean log-likelihood; ``b`` is the flattened
    ``(p+1) x (K-1)`` matrix of non-reference coefficients."""
    k = onehot.shape[1]
    lp = log_softmax(_full_logits(b, x1, k), axis=1)
    nll = -np.mean(w * np.sum(onehot * lp, axis=1))
    pen = lam * float(np.sum(np.abs(b.reshape(x1.shape[1], k - 1)[1:])))
    return float(nll) + pen


def multinomial_gradient(b, x1, onehot, w):
    k = onehot.shape[1]
    p = softmax(_full_logits(b, x1, k), axis=1)
    r = (w[:, None] * (p - onehot))[:, 1:]
    return (x1.T @ r / x1.shape[0]).ravel()


def multinomial_hessian(b, x1, onehot, w):
    n, d = x1.shape
    k = onehot.shape[1]
    p = softmax(_full_logits(b, x1, k), axis=1)[:, 1:]
    m = k - 1
    h = np.empty((d, m, d, m))
    for a in range(m):
        for c in range(m):
            coef = p[:, a] * ((a == c) - p[:, c]) * w / n
            h[:, a, :, c] = (x1 * coef[:, None]).T @ x1
    return h.reshape(d * m, d * m)


class MultinomialLogisticRegression(Classifier):
    """Softmax regression with ``classes_[0]`` as the zero-coefficient reference."""

    def __init__(self, lam=0.0, weighting="uniform", tol=1e-8, max_iter=1000):
        self.lam = float(lam)
        self.weighting = weighting
        self.tol = tol
        self.max_iter = max_iter
        self.coef_ = None

    def fit(self, x, y, classes=None):
        x, y = check_xy(x, y)
        found, codes = encode(y)
        if classes is not None:
            classes = np.asarray(sorted(classes))
            missing = sorted(set(classes.tolist()) - set(found.tolist()))
            if missing:
                raise MissingClass(f"classes absent from training data: {missing}")
        if found.size < 2:
            raise MissingClass("multinomial regression needs at least 2 classes")
        self.classes_ = found
        k = found.size
        onehot = np.eye(k)[codes]
        w = class_weights(codes, self.weighting, k)
        x1 = add_intercept(x)
        b0 = np.zeros(x1.shape[1] * (k - 1))
        fun = lambda b: multinomial_objective(b, x1, onehot, w)
        grad = lambda b: multinomial_gradient(b, x1, onehot, w)
        if self.lam > 0:
            penalty = np.full((x1.shape[1], k - 1), self.lam)
            penalty[0] = 0.0
            b, info = proximal_gradient(fun, grad, b0, penalty.ravel(), COEF_CAP,
                                        self.tol, self.max_iter)
        else:
            hess = lambda b: multinomial_hessian(b, x1, onehot, w)
            b, info = newton_box(fun, grad, hess, b0, COEF_CAP, self.tol, self.max_iter)
        _warn_if_capped(info, "MultinomialLogisticRegression")
        self.coef_ = b.reshape(x1.shape[1], k - 1)
        self.fit_info_ = info
        return self

    @property
    def betas(self):
        """All K coefficient vectors as columns, reference column all zero."""
        self._check_fitted()
        return np.hstack([np.zeros((self.coef_.shape[0], 1)), self.coef_])

    def predict_proba(self, x):
        self._check_fitted()
        x = check_xy(x)
        if x.shape[1] != self.coef_.shape[0] - 1:
            raise DimensionError(f"expected {self.coef_.shape[0] - 1} features, got {x.shape[1]}")
        return softmax(_full_logits(self.coef_.ravel(), add_intercept(x), self.classes_.size), axis=1)

    def objective(self, x, y):
        x, y = check_xy(x, y)
        codes = np.searchsorted(self.classes_, y)
        onehot = np.eye(self.classes_.size)[codes]
        w = class_weights(codes, self.weighting, self.classes_.size)
        return multinomial_objective(self.coef_.ravel(), add_intercept(x), onehot, w, self.lam)
