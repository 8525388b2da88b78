"""Experiment orchestration.

Feature transforms (vocabulary and idf, SVD factors, scaling ranges) are
fitted on training rows only and then frozen; hyperparameters are picked by
validation accuracy; the chosen configuration is refitted on train plus
validation and scored once on the test rows.
"""

import itertools
import logging
import warnings
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import labels as lab
from .errors import DataError, TooFewRows, TooFewUsers
from .ingest import InteractionMatrix
from .metrics import accuracy, evaluate
from .models import ZeroR, build_model
from .models.logistic import SeparableWarning
from .sparsela import CommonRangeScaler, CsrMatrix, FeatureBlock, FrozenTransform
from .sparsela import project, truncated_svd
from .textfeat import TfidfModel, clean, embedding_block

log = logging.getLogger(__name__)

SOURCES = ("interaction", "text_tfidf", "text_embedding", "text_combined", "combined")

DEFAULT_GRID = [
    {"kind": "logistic", "params": {"lam": [0.0, 0.01, 0.1, 1.0],
                                    "weighting": ["uniform", "balanced"]}},
]

FULL_GRID = [
    {"kind": "logistic", "params": {"lam": [0.0, 0.01, 0.1, 1.0],
                                    "weighting": ["uniform", "balanced"]}},
    {"kind": "multinomial", "params": {"lam": [0.0, 0.01, 0.1, 1.0],
                                       "weighting": ["uniform", "balanced"]}},
    {"kind": "svc", "params": {"c": [0.01, 0.1, 1.0], "weighting": ["uniform", "balanced"]}},
    {"kind": "forest", "params": {"n_trees": [100], "weighting": ["uniform", "balanced"]}},
    {"kind": "ovr_forest", "params": {"n_trees": [100], "weighting": ["uniform", "balanced"]}},
    {"kind": "adaboost", "params": {"n_rounds": [50], "eta": [0.5, 1.0]}},
]


# data -------------------------------------------------------------------------

@dataclass
class Dataset:
    """Row-aligned users, nine-class labels, interactions and texts."""

    users: list
    nine_labels: list
    interactions: Optional[InteractionMatrix] = None
    texts: Optional[list] = None

    def __post_init__(self):
        n = len(self.users)
        if len(self.nine_labels) != n:
            raise DataError("labels are not aligned with users")
        if self.interactions is not None and list(self.interactions.users) != list(self.users):
            raise DataError("interaction rows are not aligned with users")
        if self.texts is not None and len(self.texts) != n:
            raise DataError("texts are not aligned with users")

    @classmethod
    def align(cls, label_col, interactions=None, texts=None):
        """Keep users present in every supplied source, in sorted order."""
        users = set(label_col.user_ids)
        if interactions is not None:
            users &= set(interactions.users)
        if texts is not None:
            users &= set(texts)
        users = sorted(users)
        lbl = label_col.as_dict()
        inter = None
        if interactions is not None:
            pos = {u: i for i, u in enumerate(interactions.users)}
            inter = interactions.take_rows([pos[u] for u in users])
        txt = [texts[u] for u in users] if texts is not None else None
        return cls(users, [lbl[u] for u in users], inter, txt)


# splitting --------------------------------------------------------------------

@dataclass(frozen=True)
class SplitSpec:
    ratios: tuple = (0.64, 0.16, 0.20)
    seed: int = 42


def split_sizes(n, ratios):
    """Largest-remainder rounding of ``n * ratios`` (ties go to earlier parts)."""
    exact = [n * r for r in ratios]
    sizes = [int(np.floor(e)) for e in exact]
    rest = n - sum(sizes)
    order = sorted(range(len(ratios)), key=lambda i: (-(exact[i] - sizes[i]), i))
    for i in order[:rest]:
        sizes[i] += 1
    return tuple(sizes)


def split(n, spec=SplitSpec()):
    """Uniform random (unstratified) train/val/test partition of ``range(n)``."""
    if n < 5:
        raise TooFewRows(f"need at least 5 rows to split, got {n}")
    a, b, _ = split_sizes(n, spec.ratios)
    perm = np.random.default_rng(spec.seed).permutation(n)
    return np.sort(perm[:a]), np.sort(perm[a:a + b]), np.sort(perm[a + b:])


# features ---------------------------------------------------------------------

@dataclass(frozen=True)
class FeatureSpec:
    source: str = "interaction"
    binarize: bool = False
    svd_q: Optional[int] = None
    max_features: Optional[int] = None
    min_df: float = 2
    max_df: float = 0.95
    svd_power_iters: int = 4
    svd_oversample: int = 10

    def __post_init__(self):
        if self.source not in SOURCES:
            raise DataError(f"unknown feature source {self.source!r}; expected one of {SOURCES}")


class SvdProjector(FrozenTransform):
    def __init__(self, q, seed, n_power_iters=4, oversample=10):
        self.q = q
        self.seed = seed
        self.n_power_iters = n_power_iters
        self.oversample = oversample
        self.factors = None

    def fit(self, x, rows):
        self._mark_fitted(rows)
        sub = x.take_rows(rows)
        q = min(self.q, *sub.shape)
        self.factors = truncated_svd(sub, q, self.n_power_iters, self.oversample, self.seed)
        return self

    def transform(self, x):
        self._check_fitted()
        return project(x, self.factors)


class FeatureBuilder:
    """Fits every feature transform on the training rows, then freezes them."""

    def __init__(self, spec, seed=0, embeddings=None):
        self.spec = spec
        self.seed = seed
        self.embeddings = embeddings
        self.transforms = []
        self._block = None

    def _interaction(self, ds):
        if ds.interactions is None:
            raise DataError("feature source needs an interaction matrix")
        m = ds.interactions.matrix
        return m.binarize() if self.spec.binarize else m

    def _tfidf(self, ds, rows):
        if ds.texts is None:
            raise DataError("feature source needs comment texts")
        tokens = [clean(t) for t in ds.texts]
        model = TfidfModel(max_df=self.spec.max_df, min_df=self.spec.min_df,
                           max_features=self.spec.max_features)
        model.fit([tokens[i] for i in rows], rows)
        self.transforms.append(model)
        self.tfidf_model = model
        return model.transform(tokens)

    def _embedding(self, ds):
        if ds.texts is None or self.embeddings is None:
            raise DataError("embedding features need texts and an embedding table")
        return embedding_block(ds.texts, self.embeddings)

    def _scaled(self, blocks, rows):
        scaler = CommonRangeScaler().fit(blocks, rows)
        self.transforms.append(scaler)
        return scaler.transform(blocks)

    def _maybe_svd(self, x, rows):
        if not self.spec.svd_q:
            if isinstance(x, CsrMatrix):
                return FeatureBlock(x.to_dense(), None, "raw")
            return x
        if isinstance(x, FeatureBlock):
            x = CsrMatrix.from_dense(x.data)
        proj = SvdProjector(self.spec.svd_q, self.seed, self.spec.svd_power_iters,
                            self.spec.svd_oversample).fit(x, rows)
        self.transforms.append(proj)
        return proj.transform(x)

    def fit_transform(self, ds, rows):
        """Feature block for all dataset rows, with transforms fitted on ``rows``."""
        rows = np.asarray(rows, dtype=np.int64)
        src = self.spec.source
        if src == "interaction":
            block = self._maybe_svd(self._interaction(ds), rows)
        elif src == "text_tfidf":
            block = self._maybe_svd(self._tfidf(ds, rows), rows)
        elif src == "text_embedding":
            block = self._embedding(ds)
        elif src == "text_combined":
            t = FeatureBlock(self._tfidf(ds, rows).to_dense(), None, "tfidf")
            block = self._maybe_svd(self._scaled([t, self._embedding(ds)], rows), rows)
        else:
            inter = FeatureBlock(self._interaction(ds).to_dense(), None, "raw")
            t = FeatureBlock(self._tfidf(ds, rows).to_dense(), None, "tfidf")
            block = self._maybe_svd(self._scaled([inter, t], rows), rows)
        self._block = block
        return block


# model selection ----------------------------------------------------------------

def expand_grid(grid):
    """Expand ``[{"kind", "params": {name: value-or-list}}]`` in declared order."""
    configs = []
    for entry in grid:
        params = entry.get("params", {})
        names = list(params)
        values = [v if isinstance(v, list) else [v] for v in params.values()]
        for combo in itertools.product(*values):
            configs.append({"kind": entry["kind"], "params": dict(zip(names, combo))})
    return configs


def select_hyperparams(configs, fit_and_score):
    """Pick the config with the best validation score.

    ``fit_and_score(config)`` returns a validation accuracy; configs that raise
    are recorded and skipped. Ties keep the earliest config.
    """
    if not configs:
        raise DataError("empty hyperparameter grid")
    results = []
    best, best_score = None, -np.inf
    for cfg in configs:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", SeparableWarning)
                score = float(fit_and_score(cfg))
        except Exception as exc:  # noqa: BLE001 - every fit failure skips the config
            log.info("config %s failed: %s", cfg, exc)
            results.append({"config": cfg, "error": f"{type(exc).__name__}: {exc}"})
            continue
        results.append({"config": cfg, "val_accuracy": score})
        if score > best_score:
            best, best_score = cfg, score
    if best is None:
        raise DataError("every configuration in the grid failed to fit")
    return best, results


def _model_name(cfg):
    params = ",".join(f"{k}={v}" for k, v in cfg["params"].items())
    return f"{cfg['kind']}({params})" if params else cfg["kind"]


@dataclass
class ExperimentResult:
    report: dict
    model: object
    x_test: np.ndarray
    y_test: np.ndarray
    builder: FeatureBuilder
    rows: dict = field(default_factory=dict)

    def summary_row(self):
        t = self.report["test"]
        return {"Model": self.report["model_name"], "Accuracy": t["accuracy"],
                "AUC": t["auc"], "N": self.report["n_users"]}


def run_experiment(ds, target, features, grid=None, split_spec=SplitSpec(), seed=42,
                   n_jobs=1, embeddings=None):
    """Full protocol for one task and feature set; returns ``ExperimentResult``."""
    if isinstance(features, dict):
        features = FeatureSpec(**features)
    keep, y_all = lab.target_labels(ds.nine_labels, target)
    keep = np.asarray(keep, dtype=np.int64)
    y_all = np.asarray(y_all)
    train, val, test = split(keep.size, split_spec)
    builder = FeatureBuilder(features, seed=seed, embeddings=embeddings)
    sub = Dataset(
        [ds.users[i] for i in keep],
        [ds.nine_labels[i] for i in keep],
        ds.interactions.take_rows(keep.tolist()) if ds.interactions is not None else None,
        [ds.texts[i] for i in keep] if ds.texts is not None else None,
    )
    x = builder.fit_transform(sub, train).data
    n_classes = np.unique(y_all).size
    configs = expand_grid(grid or DEFAULT_GRID)

    def fit_and_score(cfg):
        m = build_model(cfg["kind"], cfg["params"], n_classes, seed, n_jobs)
        m.fit(x[train], y_all[train])
        return accuracy(y_all[val], m.predict(x[val]))

    best, results = select_hyperparams(configs, fit_and_score)
    trval = np.sort(np.concatenate([train, val]))
    model = build_model(best["kind"], best["params"], n_classes, seed, n_jobs)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SeparableWarning)
        model.fit(x[trval], y_all[trval])
    test_report = evaluate(model, x[test], y_all[test], n_train=int(train.size),
                           n_val=int(val.size))
    zeror = ZeroR().fit(None, y_all[trval])
    zeror_acc = accuracy(y_all[test], zeror.predict(x[test]))
    report = {
        "task": target,
        "features": asdict(features),
        "seed": seed,
        "split": {"ratios": list(split_spec.ratios), "seed": split_spec.seed,
                  "n_train": int(train.size), "n_val": int(val.size), "n_test": int(test.size)},
        "n_users": int(keep.size),
        "grid": results,
        "selected": best,
        "model_name": _model_name(best),
        "test": test_report.to_dict(),
        "zeror": {"class": str(zeror.majority), "accuracy": zeror_acc},
        "margin_over_zeror": test_report.accuracy - zeror_acc,
    }
    return ExperimentResult(report, model, x[test], y_all[test], builder,
                            {"train": train, "val": val, "test": test, "keep": keep})


# restricted sampling ----------------------------------------------------------------

@dataclass(frozen=True)
class SamplingStudySpec:
    sizes: tuple = (10, 25, 50, 100, 200)
    min_unique: int = 200
    seed: int = 42
    target: str = "econ_binary"
    svd_q: Optional[int] = 20
    lam: float = 0.0
    split_seed: int = 42


def sample_user_subreddits(matrix, k, seed):
    """Keep ``k`` distinct nonzero cells per row, chosen uniformly without
    replacement and independently per row, as a binary matrix."""
    streams = np.random.SeedSequence(seed).spawn(matrix.shape[0])
    rows, cols = [], []
    for i in range(matrix.shape[0]):
        lo, hi = matrix.row_ptr[i], matrix.row_ptr[i + 1]
        nz = matrix.col_idx[lo:hi][matrix.values[lo:hi] > 0]
        take = min(k, nz.size)
        chosen = np.random.default_rng(streams[i]).choice(nz, size=take, replace=False)
        rows.extend([i] * take)
        cols.extend(chosen.tolist())
    return CsrMatrix.from_triplets(rows, cols, np.ones(len(rows)), matrix.shape)


def restricted_sampling_study(m, nine_labels, spec=SamplingStudySpec()):
    """Test accuracy of a logistic model when only ``k`` subreddits per user
    are visible, for each ``k`` in ``spec.sizes``."""
    keep, y = lab.target_labels(nine_labels, spec.target)
    keep = np.asarray(keep, dtype=np.int64)
    y = np.asarray(y)
    unique = m.matrix.take_rows(keep).binarize().row_sums()
    power = unique >= spec.min_unique
    rows = keep[power]
    y = y[power]
    if rows.size < 5 or np.unique(y).size < 2:
        raise TooFewUsers(f"{rows.size} users with >= {spec.min_unique} unique subreddits "
                          "and both classes present are required")
    base = m.matrix.take_rows(rows)
    train, val, test = split(rows.size, SplitSpec(seed=spec.split_seed))
    fit_rows = np.sort(np.concatenate([train, val]))
    out = {}
    for k in spec.sizes:
        sampled = sample_user_subreddits(base, k, [spec.seed, k])
        if spec.svd_q:
            proj = SvdProjector(spec.svd_q, spec.seed).fit(sampled, fit_rows)
            x = proj.transform(sampled).data
        else:
            x = sampled.to_dense()
        model = build_model("logistic", {"lam": spec.lam}, 2)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SeparableWarning)
            model.fit(x[fit_rows], y[fit_rows])
        out[int(k)] = accuracy(y[test], model.predict(x[test]))
    return {"accuracy": out, "n_users": int(rows.size), "n_test": int(test.size),
            "spec": asdict(spec)}
