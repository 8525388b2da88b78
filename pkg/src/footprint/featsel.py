"""Single-round shadow-feature selection with forest Gini importances."""

from dataclasses import dataclass

import numpy as np

from .models import RandomForest
from .models.base import check_xy


@dataclass(frozen=True)
class BorutaResult:
    selected: list
    importances: np.ndarray
    shadow_importances: np.ndarray
    shadow_max: float
    seed: int
    total_decrease: float = 0.0


def make_shadows(x, seed):
    """Return ``[x | shadows]``: each shadow column is an independent row
    permutation of its source column."""
    x = check_xy(x)
    rng = np.random.default_rng(seed)
    shadows = np.empty_like(x)
    for j in range(x.shape[1]):
        shadows[:, j] = x[rng.permutation(x.shape[0]), j]
    return np.hstack([x, shadows])


def boruta_select(x, y, forest_params=None, seed=0, n_jobs=1):
    """Keep real features whose importance beats the best shadow's.

    One forest is trained on the real features plus their shadows; a real
    feature is selected when its importance is strictly greater than the
    maximum shadow importance.
    """
    x = check_xy(x)
    p = x.shape[1]
    seeds = np.random.SeedSequence(seed).generate_state(2)
    wide = make_shadows(x, int(seeds[0]))
    params = dict(forest_params or {})
    params.setdefault("n_trees", 100)
    forest = RandomForest(seed=int(seeds[1]), n_jobs=n_jobs, **params).fit(wide, y)
    imp = forest.feature_importances_
    real, shadow = imp[:p], imp[p:]
    shadow_max = float(shadow.max())
    selected = [j for j in range(p) if real[j] > shadow_max]
    return BorutaResult(selected, real, shadow, shadow_max, seed,
                        forest.total_impurity_decrease())
