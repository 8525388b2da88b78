import io

import numpy as np
import pytest
from hypothesis import given, strategies as st

from footprint.errors import DataError, MalformedRow
from footprint.ingest import (POLITICAL_SUBREDDITS, InteractionMatrix, InteractionRecord,
                              binarize, parse_history, pivot_chunked, prepare, read_matrix,
                              remove_political, trim, write_matrix)
from footprint.sparsela import CsrMatrix

import oracles

HEAD = "username,interaction,title,score,time,subreddit\n"


def test_parse_history_basic():
    text = HEAD + "a,post,hello,3,12:00 1/1/21,r/x\na,comment,,-2,13:00 1/1/21,r/y\n"
    recs = parse_history(io.StringIO(text))
    assert recs[0] == InteractionRecord("a", "post", "hello", 3, "12:00 1/1/21", "r/x")
    assert recs[1].title is None and recs[1].score == -2


@pytest.mark.parametrize("row,line", [
    ("a,post,t,1,x\n", 3),
    ("a,post,t,one,x,r/x\n", 3),
    ("a,share,t,1,x,r/x\n", 3),
])
def test_parse_history_reports_line(row, line):
    text = HEAD + "a,post,t,1,x,r/x\n" + row
    with pytest.raises(MalformedRow) as err:
        parse_history(text)
    assert err.value.row == line


def test_parse_history_bad_header():
    with pytest.raises(MalformedRow) as err:
        parse_history("user,kind\n")
    assert err.value.row == 1


def _records(pairs):
    return [InteractionRecord(u, "comment", None, 0, "t", s) for u, s in pairs]


def test_pivot_counts_and_order():
    m = pivot_chunked(_records([("b", "r/z"), ("a", "r/z"), ("b", "r/z"), ("a", "r/y")]))
    assert m.users == ("a", "b")
    assert m.subreddits == ("r/y", "r/z")
    np.testing.assert_array_equal(m.matrix.to_dense(), [[1, 1], [0, 2]])


pairs = st.lists(st.tuples(st.sampled_from("abcde"), st.sampled_from(["r/p", "r/q", "r/r"])),
                 min_size=1, max_size=60)


@given(pairs, st.integers(1, 10), st.integers(1, 4))
def test_pivot_independent_of_chunking(ps, chunk, threads):
    ref = pivot_chunked(_records(ps), chunk_size=10**6)
    got = pivot_chunked(_records(ps), chunk_size=chunk, threads=threads)
    assert got == ref


def test_remove_political_exact_names():
    subs = ["r/Conservative", "r/conservative", "r/cats", "r/socialism"]
    m = InteractionMatrix(CsrMatrix.from_dense(np.ones((1, 4))), ["u"], subs)
    out = remove_political(m)
    assert out.subreddits == ("r/conservative", "r/cats")
    assert len(POLITICAL_SUBREDDITS) == 15


@given(st.integers(0, 10**6), st.integers(0, 6), st.integers(0, 6))
def test_trim_matches_core_oracle(seed, min_user, min_sub):
    rng = np.random.default_rng(seed)
    dense = rng.poisson(0.8, size=(int(rng.integers(1, 9)), int(rng.integers(1, 9))))
    m = InteractionMatrix(CsrMatrix.from_dense(dense), [f"u{i}" for i in range(dense.shape[0])],
                          [f"r/s{j}" for j in range(dense.shape[1])])
    out = trim(m, min_user, min_sub)
    rows, cols = oracles.trim_core(dense, min_user, min_sub)
    assert out.users == tuple(f"u{i}" for i in rows)
    if rows:
        assert out.subreddits == tuple(f"r/s{j}" for j in cols)
    got = out.matrix.to_dense()
    assert np.all(got.sum(axis=1) >= min_user)
    if got.shape[0]:
        assert np.all(got.sum(axis=0) >= min_sub)


def test_prepare_order_remove_then_trim_then_binarize():
    # the political column pushes u0 over the threshold only if counted
    dense = np.array([[3, 1, 0], [2, 2, 2]])
    m = InteractionMatrix(CsrMatrix.from_dense(dense), ["u0", "u1"],
                          ["r/Liberal", "r/a", "r/b"])
    out = prepare(m, min_user=2, min_subreddit=1, binary=True)
    assert out.users == ("u1",)
    assert out.subreddits == ("r/a", "r/b")
    np.testing.assert_array_equal(out.matrix.to_dense(), [[1, 1]])


def test_binarize():
    m = InteractionMatrix(CsrMatrix.from_dense([[0, 3], [2, 0]]), ["a", "b"], ["r/x", "r/y"])
    np.testing.assert_array_equal(binarize(m).matrix.to_dense(), [[0, 1], [1, 0]])


def test_matrix_file_roundtrip(tmp_path):
    m = InteractionMatrix(CsrMatrix.from_dense([[0, 3, 1.5], [2, 0, 0]]), ["a", "b"],
                          ["r/x", "r/y", "r/z"])
    p = tmp_path / "m.csr"
    write_matrix(p, m)
    assert read_matrix(p) == m


def test_matrix_file_rejects_garbage(tmp_path):
    p = tmp_path / "m.csr"
    p.write_text("hello\n")
    with pytest.raises(DataError):
        read_matrix(p)
