"""JSON model container. Float arrays are stored as hex strings so they
round-trip bit-exactly."""

import json

import numpy as np

from ..errors import DataError
from .adaboost import AdaBoost
from .forest import RandomForest
from .logistic import LogisticRegression, MultinomialLogisticRegression
from .ovr import OneVsRest
from .svc import LinearSVC
from .tree import DecisionTree
from .zeror import ZeroR


def _enc(a):
    a = np.asarray(a, dtype=np.float64)
    return {"shape": list(a.shape), "hex": [float(v).hex() for v in a.ravel()]}


def _dec(d):
    vals = np.array([float.fromhex(h) for h in d["hex"]], dtype=np.float64)
    return vals.reshape(d["shape"])


def _classes(c):
    return np.asarray(c).tolist()


def _tree_dict(t):
    return {
        "kind": "tree", "classes": _classes(t.classes_), "n_features": t.n_features_,
        "params": {"min_bucket": t.min_bucket, "min_samples": t.min_samples,
                   "m_try": t.m_try, "max_depth": t.max_depth, "weighting": t.weighting},
        "feature": t.feature_.tolist(), "threshold": _enc(t.threshold_),
        "left": t.left_.tolist(), "right": t.right_.tolist(), "value": _enc(t.value_),
        "impurity": _enc(t.impurity_), "importances": _enc(t.feature_importances_),
    }


def _tree_from(d):
    t = DecisionTree(**d["params"])
    t.classes_ = np.asarray(d["classes"])
    t.n_features_ = d["n_features"]
    t.feature_ = np.asarray(d["feature"], dtype=np.int64)
    t.threshold_ = _dec(d["threshold"])
    t.left_ = np.asarray(d["left"], dtype=np.int64)
    t.right_ = np.asarray(d["right"], dtype=np.int64)
    t.value_ = _dec(d["value"])
    t.impurity_ = _dec(d["impurity"])
    t.feature_importances_ = _dec(d["importances"])
    return t


def model_to_dict(m):
    if isinstance(m, ZeroR):
        return {"kind": "zeror", "classes": _classes(m.classes_), "counts": m.counts_.tolist()}
    if isinstance(m, LogisticRegression):
        return {"kind": "logistic", "classes": _classes(m.classes_),
                "params": {"lam": m.lam, "weighting": m.weighting, "tol": m.tol,
                           "max_iter": m.max_iter},
                "coef": _enc(m.coef_)}
    if isinstance(m, MultinomialLogisticRegression):
        return {"kind": "multinomial", "classes": _classes(m.classes_),
                "params": {"lam": m.lam, "weighting": m.weighting, "tol": m.tol,
                           "max_iter": m.max_iter},
                "coef": _enc(m.coef_)}
    if isinstance(m, LinearSVC):
        return {"kind": "svc", "classes": _classes(m.classes_),
                "params": {"c": m.c, "weighting": m.weighting, "tol": m.tol,
                           "max_iter": m.max_iter},
                "coef": _enc(m.coef_), "intercept": _enc(m.intercept_)}
    if isinstance(m, DecisionTree):
        return _tree_dict(m)
    if isinstance(m, RandomForest):
        return {"kind": "forest", "classes": _classes(m.classes_), "n_features": m.n_features_,
                "params": {"n_trees": m.n_trees, "m_try": m.m_try, "min_bucket": m.min_bucket,
                           "min_samples": m.min_samples, "weighting": m.weighting,
                           "seed": m.seed, "bootstrap": m.bootstrap},
                "trees": [_tree_dict(t) for t in m.trees_]}
    if isinstance(m, AdaBoost):
        return {"kind": "adaboost", "classes": _classes(m.classes_),
                "params": {"n_rounds": m.n_rounds, "eta": m.eta, "seed": m.seed},
                "fallback": np.asarray(m.fallback_).tolist(),
                "alphas": _enc(m.alphas_), "errors": _enc(m.errors_),
                "stumps": [_tree_dict(t) for t in m.stumps_]}
    if isinstance(m, OneVsRest):
        return {"kind": "ovr", "classes": _classes(m.classes_),
                "estimators": [model_to_dict(e) for e in m.estimators_]}
    raise TypeError(f"cannot serialize {type(m).__name__}")


def model_from_dict(d):
    kind = d.get("kind")
    classes = np.asarray(d.get("classes", []))
    if kind == "zeror":
        m = ZeroR()
        m.classes_ = classes
        m.counts_ = np.asarray(d["counts"])
        m.majority = classes[int(np.argmax(m.counts_))]
        return m
    if kind in ("logistic", "multinomial"):
        cls = LogisticRegression if kind == "logistic" else MultinomialLogisticRegression
        m = cls(**d["params"])
        m.classes_ = classes
        m.coef_ = _dec(d["coef"])
        return m
    if kind == "svc":
        m = LinearSVC(**d["params"])
        m.classes_ = classes
        m.coef_ = _dec(d["coef"])
        m.intercept_ = float(_dec(d["intercept"]))
        return m
    if kind == "tree":
        return _tree_from(d)
    if kind == "forest":
        m = RandomForest(**d["params"])
        m.classes_ = classes
        m.n_features_ = d["n_features"]
        m.trees_ = [_tree_from(t) for t in d["trees"]]
        return m
    if kind == "adaboost":
        m = AdaBoost(**d["params"])
        m.classes_ = classes
        m.fallback_ = np.asarray(d["fallback"])[()]
        m.alphas_ = _dec(d["alphas"])
        m.errors_ = _dec(d["errors"]).tolist()
        m.stumps_ = [_tree_from(t) for t in d["stumps"]]
        return m
    if kind == "ovr":
        m = OneVsRest(make_base=None)
        m.classes_ = classes
        m.estimators_ = [model_from_dict(e) for e in d["estimators"]]
        return m
    raise DataError(f"unknown model kind {kind!r}")


def dumps(model, **meta):
    return json.dumps({"model": model_to_dict(model), "meta": meta}, sort_keys=True)


def loads(text):
    try:
        d = json.loads(text)
    except ValueError as exc:
        raise DataError(f"model file is not valid JSON: {exc}") from None
    if "model" not in d:
        raise DataError("model file lacks a 'model' entry")
    return model_from_dict(d["model"]), d.get("meta", {})
