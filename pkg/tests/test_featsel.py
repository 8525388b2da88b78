import numpy as np

from footprint.featsel import boruta_select, make_shadows


def test_shadows_are_column_permutations():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(40, 5))
    wide = make_shadows(x, seed=3)
    assert wide.shape == (40, 10)
    np.testing.assert_array_equal(wide[:, :5], x)
    for j in range(5):
        np.testing.assert_array_equal(np.sort(wide[:, 5 + j]), np.sort(x[:, j]))
    assert not np.array_equal(wide[:, 5:], x)
    np.testing.assert_array_equal(make_shadows(x, seed=3), wide)


def test_boruta_selects_strong_signal_and_is_deterministic():
    rng = np.random.default_rng(1)
    n = 300
    y = rng.integers(0, 2, n)
    x = np.column_stack([y + 0.3 * rng.normal(size=n), rng.normal(size=(n, 6))])
    labels = np.where(y == 1, "right", "left")
    a = boruta_select(x, labels, {"n_trees": 40}, seed=2)
    b = boruta_select(x, labels, {"n_trees": 40}, seed=2, n_jobs=3)
    assert 0 in a.selected
    assert a.selected == b.selected
    assert np.array_equal(a.importances, b.importances)
    assert all(a.importances[j] > a.shadow_max for j in a.selected)
    total = a.importances.sum() + a.shadow_importances.sum()
    assert total == a.total_decrease or abs(total - a.total_decrease) < 1e-9 * a.total_decrease
