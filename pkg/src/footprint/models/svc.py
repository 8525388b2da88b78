"""Linear support vector classifier.

Minimizes ``0.5 * |beta|^2 + C * sum_i w_i * max(0, 1 - y_i (beta.x_i + beta0))``
with an unpenalized intercept. Solved in the dual by sequential minimal
optimization (second-order working-set selection); the primal weights are
kept explicitly since the kernel is linear.
"""

import numpy as np

from ..errors import DimensionError, SingleClass
from .base import Classifier, check_xy, class_weights, encode

_TAU = 1e-12


def svc_objective(beta0, beta, x, y_pm, c, w=None):
    """Primal objective for labels in {-1, +1}."""
    margin = 1.0 - y_pm * (x @ beta + beta0)
    hinge = np.maximum(0.0, margin)
    if w is not None:
        hinge = hinge * w
    return 0.5 * float(beta @ beta) + c * float(np.sum(hinge))


def smo_linear(x, y_pm, cvec, tol=1e-6, max_iter=200_000):
    """Dual SMO for a linear kernel. Returns ``(beta, beta0, alpha, info)``."""
    n = x.shape[0]
    alpha = np.zeros(n)
    w = np.zeros(x.shape[1])
    grad = -np.ones(n)
    sqnorm = np.einsum("ij,ij->i", x, x)
    pos = y_pm > 0
    it = 0
    converged = False
    for it in range(max_iter):
        below_c = alpha < cvec
        above_0 = alpha > 0
        up = np.where(pos, below_c, above_0)
        low = np.where(pos, above_0, below_c)
        yg = y_pm * grad
        if not up.any() or not low.any():
            converged = True
            break
        v_up = np.where(up, -yg, -np.inf)
        i = int(np.argmax(v_up))
        gmax = v_up[i]
        gmax2 = np.max(np.where(low, yg, -np.inf))
        if gmax + gmax2 < tol:
            converged = True
            break
        kx = x @ x[i]
        diff = gmax + yg
        quad = sqnorm[i] + sqnorm - 2.0 * kx
        quad = np.where(quad > 0, quad, _TAU)
        cand = low & (diff > 0)
        if not cand.any():
            converged = True
            break
        score = np.where(cand, -(diff * diff) / quad, np.inf)
        j = int(np.argmin(score))

        ci, cj = cvec[i], cvec[j]
        ai, aj = alpha[i], alpha[j]
        q = max(sqnorm[i] + sqnorm[j] - 2.0 * kx[j], _TAU)
        if y_pm[i] != y_pm[j]:
            delta = (-grad[i] - grad[j]) / q
            d = ai - aj
            ai += delta
            aj += delta
            if d > 0:
                if aj < 0:
                    aj, ai = 0.0, d
            elif ai < 0:
                ai, aj = 0.0, -d
            if d > ci - cj:
                if ai > ci:
                    ai, aj = ci, ci - d
            elif aj > cj:
                aj, ai = cj, cj + d
        else:
            delta = (grad[i] - grad[j]) / q
            s = ai + aj
            ai -= delta
            aj += delta
            if s > ci:
                if ai > ci:
                    ai, aj = ci, s - ci
            elif aj < 0:
                aj, ai = 0.0, s
            if s > cj:
                if aj > cj:
                    aj, ai = cj, s - cj
            elif ai < 0:
                ai, aj = 0.0, s
        dw = y_pm[i] * (ai - alpha[i]) * x[i] + y_pm[j] * (aj - alpha[j]) * x[j]
        alpha[i], alpha[j] = ai, aj
        w += dw
        grad += y_pm * (x @ dw)

    # intercept from the KKT conditions
    yg = y_pm * grad
    at_ub = alpha >= cvec
    at_lb = alpha <= 0
    free = ~at_ub & ~at_lb
    if free.any():
        rho = float(np.mean(yg[free]))
    else:
        ub_mask = (at_ub & ~pos) | (at_lb & pos)
        lb_mask = (at_ub & pos) | (at_lb & ~pos)
        ub = np.min(yg[ub_mask]) if ub_mask.any() else np.inf
        lb = np.max(yg[lb_mask]) if lb_mask.any() else -np.inf
        rho = (ub + lb) / 2.0 if np.isfinite(ub) and np.isfinite(lb) else 0.0
    return w, -rho, alpha, {"iterations": it, "converged": converged}


class LinearSVC(Classifier):
    """Binary linear SVC; ``classes_[1]`` is the +1 side."""

    has_proba = False

    def __init__(self, c=1.0, weighting="uniform", tol=1e-6, max_iter=200_000):
        if c <= 0:
            raise ValueError("c must be positive")
        self.c = float(c)
        self.weighting = weighting
        self.tol = tol
        self.max_iter = max_iter
        self.coef_ = None
        self.intercept_ = None

    def fit(self, x, y):
        x, y = check_xy(x, y)
        classes, codes = encode(y)
        if classes.size != 2:
            raise SingleClass(f"linear SVC needs exactly 2 classes, got {classes.size}")
        self.classes_ = classes
        y_pm = np.where(codes == 1, 1.0, -1.0)
        cvec = self.c * class_weights(codes, self.weighting, 2)
        self.coef_, self.intercept_, self.dual_coef_, self.fit_info_ = smo_linear(
            x, y_pm, cvec, self.tol, self.max_iter)
        return self

    def decision_function(self, x):
        self._check_fitted()
        x = check_xy(x)
        if x.shape[1] != self.coef_.shape[0]:
            raise DimensionError(f"expected {self.coef_.shape[0]} features, got {x.shape[1]}")
        return x @ self.coef_ + self.intercept_

    def decision_scores(self, x):
        f = self.decision_function(x)
        return np.column_stack([-f, f])

    def predict_proba(self, x):
        raise AttributeError("LinearSVC does not produce probabilities")

    def objective(self, x, y):
        x, y = check_xy(x, y)
        codes = np.searchsorted(self.classes_, y)
        y_pm = np.where(codes == 1, 1.0, -1.0)
        w = class_weights(codes, self.weighting, 2)
        return svc_objective(self.intercept_, self.coef_, x, y_pm, self.c, w)
