"""User-history parsing, pivoting into the interaction matrix, and cleanup.

The interaction matrix counts posts plus comments per (user, subreddit).
Rows and columns are kept in lexicographic order of their names.
"""

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DataError, MalformedRow
from .sparsela import CsrMatrix

HISTORY_HEADER = ["username", "interaction", "title", "score", "time", "subreddit"]

POLITICAL_SUBREDDITS = (
    "r/Libertarian",
    "r/Anarchism",
    "r/socialism",
    "r/progressive",
    "r/Conservative",
    "r/democrats",
    "r/Liberal",
    "r/Republican",
    "r/Liberty",
    "r/Labour",
    "r/Marxism",
    "r/Capitalism",
    "r/Anarchist",
    "r/republicans",
    "r/conservatives",
)


@dataclass(frozen=True)
class InteractionRecord:
    user: str
    kind: str
    title: Optional[str]
    score: int
    time: str
    subreddit: str


@dataclass(frozen=True)
class InteractionMatrix:
    matrix: CsrMatrix
    users: tuple
    subreddits: tuple

    def __post_init__(self):
        object.__setattr__(self, "users", tuple(self.users))
        object.__setattr__(self, "subreddits", tuple(self.subreddits))
        if self.matrix.shape != (len(self.users), len(self.subreddits)):
            raise DataError("matrix shape does not match user/subreddit lists")

    def take_rows(self, idx):
        return InteractionMatrix(self.matrix.take_rows(idx),
                                 [self.users[i] for i in idx], self.subreddits)

    def take_cols(self, idx):
        return InteractionMatrix(self.matrix.take_cols(idx), self.users,
                                 [self.subreddits[j] for j in idx])


def parse_history(stream):
    """Parse a user-history CSV stream into ``InteractionRecord`` objects.

    Row numbers in errors are 1-based file lines (the header is line 1).
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        return []
    if [h.strip() for h in header] != HISTORY_HEADER:
        raise MalformedRow(1, f"expected header {','.join(HISTORY_HEADER)}")
    records = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(HISTORY_HEADER):
            raise MalformedRow(lineno, f"expected {len(HISTORY_HEADER)} columns, got {len(row)}")
        user, kind, title, score, time, sub = row
        try:
            score = int(score)
        except ValueError:
            raise MalformedRow(lineno, f"score {score!r} is not an integer") from None
        if kind not in ("post", "comment"):
            raise MalformedRow(lineno, f"interaction must be post or comment, got {kind!r}")
        if not user or not sub:
            raise MalformedRow(lineno, "empty username or subreddit")
        records.append(InteractionRecord(user, kind, title or None, score, time, sub))
    return records


def _count_chunk(chunk):
    counts = {}
    for r in chunk:
        key = (r.user, r.subreddit)
        counts[key] = counts.get(key, 0) + 1
    return counts


def pivot_chunked(records, chunk_size=100_000, threads=1):
    """Pivot records into a user x subreddit count matrix, chunk by chunk.

    Each chunk is counted independently and the partial tables are merged in
    chunk order; integer counts make the merge exact for any chunking.
    """
    if chunk_size < 1:
        raise ValueError("chunk_size must be >= 1")
    records = list(records)
    chunks = [records[i:i + chunk_size] for i in range(0, len(records), chunk_size)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(threads) as pool:
            partials = list(pool.map(_count_chunk, chunks))
    else:
        partials = [_count_chunk(c) for c in chunks]
    total = {}
    for part in partials:
        for key, c in part.items():
            total[key] = total.get(key, 0) + c
    users = sorted({u for u, _ in total})
    subs = sorted({s for _, s in total})
    uidx = {u: i for i, u in enumerate(users)}
    sidx = {s: j for j, s in enumerate(subs)}
    keys = list(total)
    rows = [uidx[u] for u, _ in keys]
    cols = [sidx[s] for _, s in keys]
    vals = [total[k] for k in keys]
    m = CsrMatrix.from_triplets(rows, cols, vals, (len(users), len(subs)))
    return InteractionMatrix(m, users, subs)


def remove_political(m, names=POLITICAL_SUBREDDITS):
    """Drop the listed subreddit columns (exact, case-sensitive names)."""
    drop = set(names)
    keep = [j for j, s in enumerate(m.subreddits) if s not in drop]
    if len(keep) == len(m.subreddits):
        return m
    return m.take_cols(keep)


def trim(m, min_user=50, min_subreddit=50):
    """Alternately drop light users and thin subreddits until both hold."""
    if min_user < 0 or min_subreddit < 0:
        raise ValueError("thresholds must be non-negative")
    cur = m
    while True:
        rows = np.flatnonzero(cur.matrix.row_sums() >= min_user)
        if rows.size < len(cur.users):
            cur = cur.take_rows(rows.tolist())
        cols = np.flatnonzero(cur.matrix.col_sums() >= min_subreddit)
        if cols.size < len(cur.subreddits):
            cur = cur.take_cols(cols.tolist())
            continue
        if np.all(cur.matrix.row_sums() >= min_user):
            return cur


def binarize(m):
    return InteractionMatrix(m.matrix.binarize(), m.users, m.subreddits)


def prepare(m, min_user=50, min_subreddit=50, binary=False):
    """Fixed cleanup order: political removal, then trimming, then binarizing."""
    out = trim(remove_political(m), min_user, min_subreddit)
    return binarize(out) if binary else out


# matrix file format -----------------------------------------------------------

def write_matrix(path, m):
    mat = m.matrix
    rows = mat.row_indices()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"%%csr {mat.shape[0]} {mat.shape[1]} {mat.nnz}\n")
        for r, c, v in zip(rows.tolist(), mat.col_idx.tolist(), mat.values.tolist()):
            fh.write(f"{r} {c} {_fmt_value(v)}\n")
        fh.write("#users\n")
        for u in m.users:
            fh.write(f"{u}\n")
        fh.write("#subreddits\n")
        for s in m.subreddits:
            fh.write(f"{s}\n")


def _fmt_value(v):
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def read_matrix(path):
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "%%csr":
        raise DataError(f"{path}: missing '%%csr rows cols nnz' header")
    n, p, nnz = (int(t) for t in head[1:])
    body = lines[1:1 + nnz]
    if len(body) != nnz:
        raise DataError(f"{path}: expected {nnz} triplets")
    rows = np.empty(nnz, dtype=np.int64)
    cols = np.empty(nnz, dtype=np.int64)
    vals = np.empty(nnz)
    for k, line in enumerate(body):
        parts = line.split()
        if len(parts) != 3:
            raise DataError(f"{path}: line {k + 2}: expected 'row col value'")
        rows[k], cols[k], vals[k] = int(parts[0]), int(parts[1]), float(parts[2])
    rest = lines[1 + nnz:]
    if not rest or rest[0] != "#users":
        raise DataError(f"{path}: missing #users block")
    try:
        split_at = rest.index("#subreddits")
    except ValueError:
        raise DataError(f"{path}: missing #subreddits block") from None
    users = rest[1:split_at]
    subs = [s for s in rest[split_at + 1:] if s != ""]
    if len(users) != n or len(subs) != p:
        raise DataError(f"{path}: name blocks do not match shape ({n}, {p})")
    return InteractionMatrix(CsrMatrix.from_triplets(rows, cols, vals, (n, p)), users, subs)
