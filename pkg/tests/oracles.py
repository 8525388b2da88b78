"""Slow, obviously-correct reference implementations used by the tests.

None of these share code with the package under test.
"""

import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize


def jacobi_singular_values(a, tol=1e-15, max_sweeps=100):
    """One-sided (Hestenes) Jacobi SVD; returns singular values, descending."""
    u = np.array(a, dtype=np.float64, copy=True)
    if u.shape[0] < u.shape[1]:
        u = u.T.copy()
    n = u.shape[1]
    for _ in range(max_sweeps):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                alpha = u[:, i] @ u[:, i]
                beta = u[:, j] @ u[:, j]
                gamma = u[:, i] @ u[:, j]
                if abs(gamma) <= tol * math.sqrt(alpha * beta) or gamma == 0.0:
                    continue
                rotated = True
                if abs(beta - alpha) > 1e150 * abs(2.0 * gamma):
                    t = gamma / (beta - alpha)  # 1 / (2 zeta) without overflow
                else:
                    zeta = (beta - alpha) / (2.0 * gamma)
                    t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                ui = u[:, i].copy()
                u[:, i] = c * ui - s * u[:, j]
                u[:, j] = s * ui + c * u[:, j]
        if not rotated:
            break
    return np.sort(np.linalg.norm(u, axis=0))[::-1]


def tfidf_dense(docs, vocab_terms):
    """Brute-force tf-idf for token-list docs over a given vocabulary."""
    n = len(docs)
    out = np.zeros((n, len(vocab_terms)))
    for j, w in enumerate(vocab_terms):
        d_w = sum(1 for d in docs if w in d)
        idf = math.log((n + 1) / (d_w + 1)) + 1.0
        for i, d in enumerate(docs):
            if d:
                out[i, j] = d.count(w) / len(d) * idf
    for i in range(n):
        norm = math.sqrt(sum(v * v for v in out[i]))
        if norm > 0:
            out[i] /= norm
    return out


def tfidf_vocab(docs, min_df, max_df):
    """Terms whose document count lies in [min_df, max_df] (counts or fractions)."""
    n = len(docs)
    lo = min_df * n if isinstance(min_df, float) and min_df <= 1 else min_df
    hi = max_df * n if isinstance(max_df, float) and max_df <= 1 else max_df
    terms = sorted({w for d in docs for w in d})
    return [w for w in terms if lo <= sum(1 for d in docs if w in d) <= hi]


def mann_whitney(scores, positive):
    """Exact pairwise statistic as a Fraction; ties count one half."""
    pos = [s for s, p in zip(scores, positive) if p]
    neg = [s for s, p in zip(scores, positive) if not p]
    wins = Fraction(0)
    for a in pos:
        for b in neg:
            if a > b:
                wins += 1
            elif a == b:
                wins += Fraction(1, 2)
    return wins / (len(pos) * len(neg))


def central_diff(f, x, h=1e-6):
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def logistic_oracle(x, y01, lam, grid=np.linspace(-4, 4, 17)):
    """Grid search then Nelder-Mead on the mean negative log-likelihood."""
    x1 = np.column_stack([np.ones(len(x)), x])

    def f(b):
        z = x1 @ b
        nll = np.mean([math.log1p(math.exp(-abs(t))) + max(t, 0.0) - yy * t
                       for t, yy in zip(z, y01)])
        return nll + lam * sum(abs(v) for v in b[1:])

    start = min((np.array(p) for p in itertools.product(grid, repeat=x1.shape[1])), key=f)
    res = minimize(f, start, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 20000, "maxfev": 40000})
    return res.fun


def svc_oracle(x, ypm, c, grid=np.linspace(-3, 3, 61)):
    """Primal minimum: exact intercept over hinge breakpoints, grid plus
    Nelder-Mead over the weights."""

    def inner(beta):
        proj = x @ beta
        best = math.inf
        for b0 in ypm - proj:
            h = np.maximum(0.0, 1.0 - ypm * (proj + b0))
            best = min(best, 0.5 * beta @ beta + c * h.sum())
        return best

    start = min((np.array(p) for p in itertools.product(grid, repeat=x.shape[1])), key=inner)
    res = minimize(inner, start, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 20000})
    return res.fun


def gini_cost(labels, weights, classes):
    mass = [sum(w for l, w in zip(labels, weights) if l == k) for k in classes]
    tot = sum(mass)
    if tot == 0:
        return 0.0
    return tot * sum((m / tot) * (1 - m / tot) for m in mass)


def exhaustive_split(x, y, weights=None, min_bucket=1):
    """Best (feature, threshold, cost): lowest cost, then feature, then threshold."""
    n, p = x.shape
    weights = np.ones(n) if weights is None else weights
    classes = sorted(set(y.tolist()))
    best = None
    for f in range(p):
        vals = sorted(set(x[:, f].tolist()))
        for a, b in zip(vals[:-1], vals[1:]):
            t = (a + b) / 2
            left = x[:, f] < t
            if left.sum() < min_bucket or (~left).sum() < min_bucket:
                continue
            cost = (gini_cost(y[left], weights[left], classes)
                    + gini_cost(y[~left], weights[~left], classes))
            if best is None or cost < best[2] - 1e-12:
                best = (f, t, cost)
    return best


def trim_core(dense, min_user, min_sub):
    """Remove one violating row or column at a time until none remain."""
    rows = list(range(dense.shape[0]))
    cols = list(range(dense.shape[1]))
    changed = True
    while changed:
        changed = False
        for r in list(rows):
            if dense[r, cols].sum() < min_user:
                rows.remove(r)
                changed = True
                break
        if changed:
            continue
        for c in list(cols):
            if dense[rows, c].sum() < min_sub:
                cols.remove(c)
                changed = True
                break
    return rows, cols
