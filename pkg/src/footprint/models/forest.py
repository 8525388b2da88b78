import math

import numpy as np

from ..errors import SingleClass
from .base import Classifier, check_xy, encode
from .parallel import parallel_map
from .tree import DecisionTree


class RandomForest(Classifier):
    """Bagged weighted-Gini trees with ``m_try`` candidate features per split.

    Each tree sees a bootstrap sample of size n (as row multiplicities) and
    gets its own RNG stream spawned from ``seed``, so the fitted forest is
    the same for any ``n_jobs``. ``bootstrap=False`` trains every tree on the
    full data.
    """

    def __init__(self, n_trees=100, m_try="sqrt", min_bucket=1, min_samples=2,
                 weighting="uniform", seed=0, bootstrap=True, n_jobs=1):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        self.n_trees = n_trees
        self.m_try = m_try
        self.min_bucket = min_bucket
        self.min_samples = min_samples
        self.weighting = weighting
        self.seed = seed
        self.bootstrap = bootstrap
        self.n_jobs = n_jobs
        self.trees_ = None

    def _resolve_m_try(self, p):
        if self.m_try is None:
            return p
        if self.m_try == "sqrt":
            return max(1, int(math.floor(math.sqrt(p))))
        return max(1, min(int(self.m_try), p))

    def fit(self, x, y):
        x, y = check_xy(x, y)
        self.classes_, _ = encode(y)
        if self.classes_.size < 2:
            raise SingleClass("random forest needs at least 2 classes")
        n, p = x.shape
        m_try = self._resolve_m_try(p)
        streams = np.random.SeedSequence(self.seed).spawn(self.n_trees)

        def grow(t):
            rng = np.random.default_rng(streams[t])
            if self.bootstrap:
                counts = np.bincount(rng.integers(0, n, size=n), minlength=n)
            else:
                counts = None
            tree_seed = int(rng.integers(0, 2**63 - 1))
            tree = DecisionTree(min_bucket=self.min_bucket, min_samples=self.min_samples,
                                m_try=m_try, weighting=self.weighting, seed=tree_seed)
            return tree.fit(x, y, counts=counts, classes=self.classes_)

        self.trees_ = parallel_map(grow, range(self.n_trees), self.n_jobs)
        self.n_features_ = p
        return self

    @property
    def feature_importances_(self):
        """Mean over trees of the summed weighted Gini decrease per feature."""
        self._check_fitted()
        return np.mean([t.feature_importances_ for t in self.trees_], axis=0)

    def total_impurity_decrease(self):
        return float(np.mean([t.total_impurity_decrease() for t in self.trees_]))

    def votes(self, x):
        self._check_fitted()
        x = check_xy(x)
        k = self.classes_.size
        out = np.zeros((x.shape[0], k))
        rows = np.arange(x.shape[0])
        for t in self.trees_:
            pred = np.argmax(t.value_[t.apply(x)], axis=1)
            out[rows, pred] += 1.0
        return out

    def predict_proba(self, x):
        """Fraction of trees voting for each class."""
        return self.votes(x) / len(self.trees_)
