"""Classification tree grown greedily on weighted Gini impurity.

A node's impurity mass is ``W * G`` with ``W`` its total sample weight and
``G = sum_k p_k (1 - p_k)`` over weighted class proportions. A split on
feature ``f`` at threshold ``a`` sends ``x_f < a`` left and ``x_f >= a``
right, and is chosen to minimize ``W_left * G_left + W_right * G_right``.
Thresholds sit at midpoints between consecutive distinct values.
"""

import numpy as np

from ..errors import EmptyTrainingSet
from .base import Classifier, check_xy, class_weights, encode

LEAF = -1


def gini(class_mass):
    """Gini impurity of a vector of (weighted) class totals."""
    class_mass = np.asarray(class_mass, dtype=np.float64)
    total = class_mass.sum()
    if total <= 0:
        return 0.0
    p = class_mass / total
    return float(np.sum(p * (1.0 - p)))


def best_split(x, mass, counts, features, min_bucket):
    """Best (feature, threshold, cost) for one node, or None.

    ``mass`` is the n x K matrix of per-row class weights, ``counts`` the
    per-row multiplicities used for the ``min_bucket`` rule. Ties go to the
    earliest feature in ``features`` and then the lowest threshold.
    """
    n = x.shape[0]
    if n < 2 or len(features) == 0:
        return None
    xs = x[:, features]
    order = np.argsort(xs, axis=0, kind="stable")
    vals = np.take_along_axis(xs, order, axis=0)
    left = np.cumsum(mass[order], axis=0)[:-1]  # (n-1, m, K)
    total = mass.sum(axis=0)
    right = total - left
    nleft = np.cumsum(counts[order], axis=0)[:-1]
    nright = counts.sum() - nleft
    wl = left.sum(axis=2)
    wr = right.sum(axis=2)
    with np.errstate(divide="ignore", invalid="ignore"):
        cost = (wl - np.where(wl > 0, (left * left).sum(axis=2) / wl, 0.0)) + \
               (wr - np.where(wr > 0, (right * right).sum(axis=2) / wr, 0.0))
    valid = (vals[1:] > vals[:-1]) & (nleft >= min_bucket) & (nright >= min_bucket)
    if not valid.any():
        return None
    cost = np.where(valid, cost, np.inf)
    # costs equal up to rounding count as ties; scan feature-major so ties
    # resolve to the first feature, then the lowest threshold
    tol = 1e-12 * max(float(total.sum()), 1e-300)
    flat = np.argmax(cost.T <= cost.min() + tol)
    fi, pos = divmod(int(flat), n - 1)
    threshold = (vals[pos, fi] + vals[pos + 1, fi]) / 2.0
    return features[fi], float(threshold), float(cost[pos, fi])


class DecisionTree(Classifier):
    """Weighted-Gini classification tree.

    ``m_try`` features are drawn without replacement at every node (all
    features when ``None``); ``max_depth=1`` gives a stump. Split ties go to
    the lowest feature index when all features are scanned, and to the
    earliest drawn feature otherwise.
    """

    def __init__(self, min_bucket=1, min_samples=2, m_try=None, max_depth=None,
                 weighting="uniform", seed=None):
        if min_bucket < 1:
            raise ValueError("min_bucket must be >= 1")
        if min_samples < 2 * min_bucket:
            raise ValueError("min_samples must be >= 2 * min_bucket")
        self.min_bucket = min_bucket
        self.min_samples = min_samples
        self.m_try = m_try
        self.max_depth = max_depth
        self.weighting = weighting
        self.seed = seed

    def fit(self, x, y, sample_weight=None, counts=None, classes=None):
        """Fit on rows with optional per-row weights and integer multiplicities.

        Rows with zero multiplicity are ignored. ``classes`` fixes the class
        list (forests pass the full list so bootstrap trees agree on it).
        """
        x, y = check_xy(x, y)
        if classes is None:
            self.classes_, codes = encode(y)
        else:
            self.classes_ = np.asarray(classes)
            codes = np.searchsorted(self.classes_, y)
        counts = np.ones(x.shape[0]) if counts is None else np.asarray(counts, dtype=np.float64)
        keep = counts > 0
        if not keep.any():
            raise EmptyTrainingSet("no rows with positive multiplicity")
        x, codes, counts = x[keep], codes[keep], counts[keep]
        k = self.classes_.size
        w = class_weights(codes, self.weighting, k, counts)
        if sample_weight is not None:
            w = w * np.asarray(sample_weight, dtype=np.float64)[keep]
        mass = np.zeros((x.shape[0], k))
        mass[np.arange(x.shape[0]), codes] = w * counts
        rng = np.random.default_rng(self.seed)
        p = x.shape[1]
        m_try = p if self.m_try is None else max(1, min(int(self.m_try), p))

        feature, threshold, left, right, value, impurity = [], [], [], [], [], []
        self.n_features_ = p
        self.feature_importances_ = np.zeros(p)

        def new_node(node_mass):
            feature.append(LEAF)
            threshold.append(0.0)
            left.append(LEAF)
            right.append(LEAF)
            value.append(node_mass)
            impurity.append(gini(node_mass))
            return len(feature) - 1

        root = new_node(mass.sum(axis=0))
        stack = [(root, np.arange(x.shape[0]), 0)]
        while stack:
            node, idx, depth = stack.pop()
            node_mass = value[node]
            if impurity[node] <= 0.0 or counts[idx].sum() < self.min_samples:
                continue
            if self.max_depth is not None and depth >= self.max_depth:
                continue
            if m_try < p:
                # draw order, not index order, so exact ties break at random
                feats = rng.choice(p, size=m_try, replace=False)
            else:
                feats = np.arange(p)
            found = best_split(x[idx], mass[idx], counts[idx], feats, self.min_bucket)
            if found is None:
                continue
            f, a, cost = found
            parent = float(node_mass.sum()) * impurity[node]
            decrease = parent - cost
            if decrease < -1e-12 * max(parent, 1.0):
                continue
            go_left = x[idx, f] < a
            li, ri = idx[go_left], idx[~go_left]
            feature[node] = int(f)
            threshold[node] = a
            self.feature_importances_[f] += max(decrease, 0.0)
            left[node] = new_node(mass[li].sum(axis=0))
            right[node] = new_node(mass[ri].sum(axis=0))
            # right pushed first so the left subtree is numbered first
            stack.append((right[node], ri, depth + 1))
            stack.append((left[node], li, depth + 1))

        self.feature_ = np.array(feature, dtype=np.int64)
        self.threshold_ = np.array(threshold)
        self.left_ = np.array(left, dtype=np.int64)
        self.right_ = np.array(right, dtype=np.int64)
        self.value_ = np.array(value).reshape(-1, k)
        self.impurity_ = np.array(impurity)
        return self

    @property
    def node_count(self):
        return self.feature_.size

    def total_impurity_decrease(self):
        """Root impurity mass minus the leaves' total (telescopes over splits)."""
        w = self.value_.sum(axis=1)
        leaves = self.feature_ == LEAF
        return float(w[0] * self.impurity_[0] - np.sum(w[leaves] * self.impurity_[leaves]))

    def apply(self, x):
        """Leaf index reached by each row."""
        self._check_fitted()
        x = check_xy(x)
        node = np.zeros(x.shape[0], dtype=np.int64)
        active = self.feature_[node] != LEAF
        while active.any():
            rows = np.flatnonzero(active)
            cur = node[rows]
            go_left = x[rows, self.feature_[cur]] < self.threshold_[cur]
            node[rows] = np.where(go_left, self.left_[cur], self.right_[cur])
            active[rows] = self.feature_[node[rows]] != LEAF
        return node

    def predict_proba(self, x):
        v = self.value_[self.apply(x)]
        s = v.sum(axis=1, keepdims=True)
        return np.divide(v, s, out=np.zeros_like(v), where=s > 0)

    def predict(self, x):
        # weighted plurality in the leaf; lowest class index wins ties
        return self.classes_[np.argmax(self.value_[self.apply(x)], axis=1)]
