import numpy as np

from ..errors import SingleClass
from .base import Classifier, check_xy, encode
from .parallel import parallel_map


class OneVsRest(Classifier):
    """One binary model per class, trained as class-vs-rest.

    ``make_base`` returns a fresh unfitted binary model. Per-class scores are
    the positive-class probability when the base model has one, else its
    decision value; they are not renormalized across classes.
    """

    def __init__(self, make_base, n_jobs=1):
        self.make_base = make_base
        self.n_jobs = n_jobs
        self.estimators_ = None

    def fit(self, x, y):
        x, y = check_xy(x, y)
        self.classes_, codes = encode(y)
        if self.classes_.size < 2:
            raise SingleClass("one-vs-rest needs at least 2 classes")

        def fit_one(k):
            return self.make_base(k).fit(x, (codes == k).astype(np.int64))

        self.estimators_ = parallel_map(fit_one, range(self.classes_.size), self.n_jobs)
        return self

    @property
    def has_proba(self):
        return all(getattr(e, "has_proba", True) for e in self.estimators_)

    def decision_scores(self, x):
        self._check_fitted()
        cols = []
        for e in self.estimators_:
            if getattr(e, "has_proba", True):
                cols.append(e.predict_proba(x)[:, 1])
            else:
                cols.append(e.decision_function(x))
        return np.column_stack(cols)

    def predict_proba(self, x):
        if not self.has_proba:
            raise AttributeError("base model does not produce probabilities")
        return self.decision_scores(x)
