from .adaboost import AdaBoost, samme_alpha
from .base import Classifier, class_weights
from .forest import RandomForest
from .logistic import LogisticRegression, MultinomialLogisticRegression, SeparableWarning
from .ovr import OneVsRest
from .svc import LinearSVC
from .tree import DecisionTree, gini
from .zeror import ZeroR

MODEL_KINDS = ("zeror", "logistic", "multinomial", "svc", "tree", "forest", "ovr_forest",
               "adaboost")


def build_model(kind, params=None, n_classes=2, seed=0, n_jobs=1):
    """Instantiate an unfitted model from a grid entry.

    ``logistic`` and ``svc`` are binary models and become one-vs-rest when
    the task has more than two classes; ``ovr_forest`` forces the
    one-vs-rest scheme on forests.
    """
    params = dict(params or {})
    if kind == "zeror":
        return ZeroR()
    if kind == "logistic":
        if n_classes > 2:
            return OneVsRest(lambda k: LogisticRegression(**params), n_jobs=n_jobs)
        return LogisticRegression(**params)
    if kind == "multinomial":
        return MultinomialLogisticRegression(**params)
    if kind == "svc":
        if n_classes > 2:
            return OneVsRest(lambda k: LinearSVC(**params), n_jobs=n_jobs)
        return LinearSVC(**params)
    if kind == "tree":
        return DecisionTree(seed=seed, **params)
    if kind == "forest":
        return RandomForest(seed=seed, n_jobs=n_jobs, **params)
    if kind == "ovr_forest":
        return OneVsRest(lambda k: RandomForest(seed=seed + 7919 * (k + 1), n_jobs=n_jobs,
                                                **params))
    if kind == "adaboost":
        return AdaBoost(seed=seed, **params)
    raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")


__all__ = [
    "AdaBoost",
    "Classifier",
    "DecisionTree",
    "LinearSVC",
    "LogisticRegression",
    "MODEL_KINDS",
    "MultinomialLogisticRegression",
    "OneVsRest",
    "RandomForest",
    "SeparableWarning",
    "ZeroR",
    "build_model",
    "class_weights",
    "gini",
    "samme_alpha",
]
