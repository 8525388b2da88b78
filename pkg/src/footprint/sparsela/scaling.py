"""Dense feature blocks and min-max scaling onto a common range."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionError, NonFinite, NotFittedError, RefitError

PROVENANCES = ("svd", "tfidf", "embedding", "combined", "raw")


@dataclass
class FeatureBlock:
    data: np.ndarray
    column_names: list = None
    provenance: str = "raw"

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 2:
            raise DimensionError("feature block must be 2-D")
        if not np.all(np.isfinite(self.data)):
            raise NonFinite("feature block contains non-finite entries")
        if self.column_names is None:
            self.column_names = [f"f{j}" for j in range(self.data.shape[1])]
        if len(self.column_names) != self.data.shape[1]:
            raise DimensionError("column_names length differs from width")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def shape(self):
        return self.data.shape

    def take_rows(self, idx):
        return FeatureBlock(self.data[np.asarray(idx, dtype=np.int64)],
                            list(self.column_names), self.provenance)


class FrozenTransform:
    """Base for transforms whose statistics come from one fixed row set.

    ``fit_rows`` records which rows were used; fitting twice raises so a
    transform cannot silently absorb validation or test rows.
    """

    fit_rows = None

    def _mark_fitted(self, rows):
        if self.fit_rows is not None:
            raise RefitError(f"{type(self).__name__} is already fitted")
        self.fit_rows = tuple(int(r) for r in rows)

    def _check_fitted(self):
        if self.fit_rows is None:
            raise NotFittedError(f"{type(self).__name__} is not fitted")


def _hstack(blocks):
    if not blocks:
        raise DimensionError("no blocks to combine")
    n = blocks[0].data.shape[0]
    for b in blocks:
        if b.data.shape[0] != n:
            raise DimensionError("blocks do not share a row count")
    data = np.hstack([b.data for b in blocks])
    names = []
    for b in blocks:
        names.extend(f"{b.provenance}:{c}" for c in b.column_names)
    return data, names


@dataclass
class CommonRangeScaler(FrozenTransform):
    lo: np.ndarray = None
    span: np.ndarray = None
    fit_rows: tuple = field(default=None)

    def fit(self, blocks, rows=None):
        data, _ = _hstack(blocks)
        rows = np.arange(data.shape[0]) if rows is None else np.asarray(rows, dtype=np.int64)
        self._mark_fitted(rows)
        sub = data[rows]
        self.lo = sub.min(axis=0)
        self.span = sub.max(axis=0) - self.lo
        return self

    def transform(self, blocks):
        self._check_fitted()
        data, names = _hstack(blocks)
        if data.shape[1] != self.lo.shape[0]:
            raise DimensionError("width differs from the fitted blocks")
        out = np.zeros_like(data)
        live = self.span > 0
        out[:, live] = (data[:, live] - self.lo[live]) / self.span[live]
        return FeatureBlock(out, names, "combined")


def scale_to_common_range(blocks, fit_rows=None):
    """Concatenate blocks and min-max scale each column to [0, 1].

    Column statistics come from ``fit_rows`` (all rows when omitted); constant
    columns map to 0.
    """
    return CommonRangeScaler().fit(blocks, fit_rows).transform(blocks)
