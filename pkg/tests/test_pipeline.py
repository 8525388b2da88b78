import numpy as np
import pytest
from hypothesis import given, strategies as st

from footprint import labels as lab
from footprint.errors import DataError, TooFewRows, TooFewUsers
from footprint.ingest import InteractionMatrix, pivot_chunked, prepare
from footprint.pipeline import (DEFAULT_GRID, Dataset, FeatureBuilder, FeatureSpec,
                                SamplingStudySpec, SplitSpec, expand_grid,
                                restricted_sampling_study, run_experiment,
                                sample_user_subreddits, select_hyperparams, split, split_sizes)
from footprint.sparsela import CsrMatrix
from footprint.synth import SynthConfig, generate_synthetic
from footprint.textfeat import EmbeddingTable


@pytest.fixture(scope="module")
def small_ds():
    corpus = generate_synthetic(SynthConfig(n_users=400, n_subreddits=60, n_informative=10,
                                            words_per_user=80, seed=8))
    m = prepare(pivot_chunked(corpus.records), 5, 5)
    texts = {u: " ".join(c) for u, c in corpus.comments.items()}
    return Dataset.align(lab.LabelColumn(corpus.users, corpus.nine_labels), m, texts), corpus


def test_split_sizes_largest_remainder():
    assert split_sizes(5, (0.64, 0.16, 0.20)) == (3, 1, 1)
    assert split_sizes(100, (0.64, 0.16, 0.20)) == (64, 16, 20)
    assert sum(split_sizes(7, (0.64, 0.16, 0.20))) == 7


@given(st.integers(5, 400), st.integers(0, 1000))
def test_split_is_a_partition(n, seed):
    tr, va, te = split(n, SplitSpec(seed=seed))
    allrows = np.concatenate([tr, va, te])
    assert sorted(allrows.tolist()) == list(range(n))
    assert (tr.size, va.size, te.size) == split_sizes(n, (0.64, 0.16, 0.20))


def test_split_rejects_tiny():
    with pytest.raises(TooFewRows):
        split(4)


def test_expand_grid_order():
    cfgs = expand_grid(DEFAULT_GRID)
    assert len(cfgs) == 8
    assert cfgs[0] == {"kind": "logistic", "params": {"lam": 0.0, "weighting": "uniform"}}
    assert cfgs[1]["params"] == {"lam": 0.0, "weighting": "balanced"}


def test_select_hyperparams_ties_and_failures():
    cfgs = [{"id": i} for i in range(4)]
    scores = {0: 0.5, 1: 0.7, 2: 0.7}

    def fit_and_score(c):
        if c["id"] == 3:
            raise ValueError("boom")
        return scores[c["id"]]

    best, results = select_hyperparams(cfgs, fit_and_score)
    assert best == {"id": 1}
    assert "error" in results[3]
    with pytest.raises(DataError):
        select_hyperparams(cfgs[3:], fit_and_score)


def test_dataset_align_intersects_sorted():
    m = InteractionMatrix(CsrMatrix.from_dense(np.eye(3)), ["c", "a", "b"], ["r/x", "r/y", "r/z"])
    col = lab.LabelColumn(["b", "a", "z"], ["left", "right", "libleft"])
    ds = Dataset.align(col, m, {"a": "t1", "b": "t2", "q": "t3"})
    assert ds.users == ["a", "b"] and ds.nine_labels == ["right", "left"]
    assert ds.texts == ["t1", "t2"]
    np.testing.assert_array_equal(ds.interactions.matrix.to_dense(), [[0, 1, 0], [0, 0, 1]])


def test_transforms_see_training_rows_only(small_ds):
    ds, _ = small_ds
    rows = np.arange(0, len(ds.users), 2)
    b = FeatureBuilder(FeatureSpec(source="combined", svd_q=10), seed=1)
    block = b.fit_transform(ds, rows)
    assert block.shape == (len(ds.users), 10)
    for t in b.transforms:
        assert t.fit_rows == tuple(rows.tolist())
    # perturbing a held-out row's text leaves the fitted vocabulary unchanged
    texts = list(ds.texts)
    texts[1] = "zzzyq " * 50
    b2 = FeatureBuilder(FeatureSpec(source="combined", svd_q=10), seed=1)
    block2 = b2.fit_transform(Dataset(ds.users, ds.nine_labels, ds.interactions, texts), rows)
    assert b2.tfidf_model.vocab == b.tfidf_model.vocab
    np.testing.assert_array_equal(block2.data[rows], block.data[rows])


def test_embedding_sources(small_ds):
    ds, corpus = small_ds
    rng = np.random.default_rng(0)
    table = EmbeddingTable(4, {w: rng.normal(size=4) for w in corpus.vocab[:100]})
    rows = np.arange(len(ds.users))[::3]
    blk = FeatureBuilder(FeatureSpec(source="text_embedding"), embeddings=table).fit_transform(
        ds, rows)
    assert blk.shape == (len(ds.users), 4)
    blk = FeatureBuilder(FeatureSpec(source="text_combined"), embeddings=table).fit_transform(
        ds, rows)
    assert blk.data[rows].min() >= 0 and blk.data[rows].max() <= 1
    with pytest.raises(DataError):
        FeatureBuilder(FeatureSpec(source="text_embedding")).fit_transform(ds, rows)


def test_run_experiment_report(small_ds):
    ds, _ = small_ds
    res = run_experiment(ds, "econ_3", {"source": "interaction", "binarize": True, "svd_q": 8},
                         [{"kind": "logistic", "params": {"lam": [0.0, 0.01]}},
                          {"kind": "multinomial", "params": {}}], SplitSpec(seed=1), seed=1)
    r = res.report
    assert r["n_users"] == len(ds.users)
    assert r["split"]["n_train"] + r["split"]["n_val"] + r["split"]["n_test"] == r["n_users"]
    assert len(r["grid"]) == 3 and r["selected"] in [g["config"] for g in r["grid"]]
    assert r["margin_over_zeror"] == pytest.approx(r["test"]["accuracy"] - r["zeror"]["accuracy"])
    assert r["test"]["auc"] is not None
    again = run_experiment(ds, "econ_3", {"source": "interaction", "binarize": True, "svd_q": 8},
                           [{"kind": "logistic", "params": {"lam": [0.0, 0.01]}},
                            {"kind": "multinomial", "params": {}}], SplitSpec(seed=1), seed=1)
    assert again.report == r
    row = res.summary_row()
    assert set(row) == {"Model", "Accuracy", "AUC", "N"}


def test_binary_task_drops_centrists(small_ds):
    ds, _ = small_ds
    res = run_experiment(ds, "social_binary", {"source": "text_tfidf", "svd_q": 5},
                         [{"kind": "logistic", "params": {}}], SplitSpec(seed=2), seed=2)
    n_center = sum(lab.to_social(v) == "center" for v in ds.nine_labels)
    assert res.report["n_users"] == len(ds.users) - n_center
    assert set(res.y_test) <= {"auth", "lib"}


def test_sample_user_subreddits():
    m = CsrMatrix.from_dense(np.array([[1, 2, 0, 3, 1], [0, 0, 1, 0, 0]], float))
    s = sample_user_subreddits(m, 2, seed=0)
    d = s.to_dense()
    assert d[0].sum() == 2 and d[1].sum() == 1
    assert np.all(d <= (m.to_dense() > 0))
    assert s == sample_user_subreddits(m, 2, seed=0)


def test_sampling_study_requires_heavy_users(small_ds):
    ds, _ = small_ds
    with pytest.raises(TooFewUsers):
        restricted_sampling_study(ds.interactions, ds.nine_labels,
                                  SamplingStudySpec(sizes=(5,), min_unique=10_000))
    res = restricted_sampling_study(ds.interactions, ds.nine_labels,
                                    SamplingStudySpec(sizes=(3, 25), min_unique=25, svd_q=5))
    assert set(res["accuracy"]) == {3, 25}
