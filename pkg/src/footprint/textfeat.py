"""Text cleaning, tf-idf and averaged word embeddings."""

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from nltk.stem.porter import PorterStemmer

from .errors import DataError, DuplicateToken, EmptyVocabulary, InconsistentDimension, NonFinite
from .sparsela import CsrMatrix, FeatureBlock, FrozenTransform

_URL = re.compile(r"(?:https?://|www\.)\S+|<a\b[^>]*>.*?</a>|<[^>]+>", re.IGNORECASE | re.DOTALL)
_PUNCT = re.compile(r"[^\w\s]|_")
_NON_ASCII = re.compile(r"[^\x00-\x7f]")

_stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)


def stem(token):
    return _stemmer.stem(token, to_lowercase=False)


def clean(text):
    """Tokenize a comment the way the tf-idf features expect.

    Order: links, punctuation, non-ASCII symbols, lowercase, whitespace
    split, single-character tokens dropped, Porter stem.
    """
    text = _URL.sub(" ", text)
    text = _PUNCT.sub(" ", text)
    text = _NON_ASCII.sub(" ", text)
    text = text.lower()
    return [stem(tok) for tok in text.split() if len(tok) > 1]


def _df_threshold(value, n_docs):
    """Fractions in [0, 1] are proportions of documents; larger ints are counts."""
    if isinstance(value, float) and value <= 1.0:
        return value * n_docs
    return float(value)


@dataclass
class TfidfModel(FrozenTransform):
    max_df: float = 0.95
    min_df: float = 2
    max_features: int = None
    vocab: dict = field(default_factory=dict)
    idf: np.ndarray = None
    fit_rows: tuple = None

    @property
    def terms(self):
        return sorted(self.vocab, key=self.vocab.get)

    def fit(self, docs, rows=None):
        """Fit on token lists; ``rows`` records which corpus rows were used."""
        docs = list(docs)
        n = len(docs)
        if n < 1:
            raise EmptyVocabulary("no documents")
        self._mark_fitted(range(n) if rows is None else rows)
        df = Counter()
        tf = Counter()
        for d in docs:
            tf.update(d)
            df.update(set(d))
        hi = _df_threshold(self.max_df, n)
        lo = _df_threshold(self.min_df, n)
        kept = [w for w, c in df.items() if lo <= c <= hi]
        if self.max_features is not None and len(kept) > self.max_features:
            kept.sort(key=lambda w: (-tf[w], w))
            kept = kept[:self.max_features]
        if not kept:
            raise EmptyVocabulary("no term survives the document-frequency limits")
        kept.sort()
        self.vocab = {w: j for j, w in enumerate(kept)}
        self.idf = np.array([math.log((n + 1) / (df[w] + 1)) + 1.0 for w in kept])
        return self

    def transform(self, docs):
        """Row-normalized tf-idf matrix.

        Term frequency divides by the document's full token count, including
        tokens outside the vocabulary.
        """
        self._check_fitted()
        rows, cols, vals = [], [], []
        docs = list(docs)
        for i, d in enumerate(docs):
            if not d:
                continue
            counts = Counter(t for t in d if t in self.vocab)
            if not counts:
                continue
            js = np.array([self.vocab[t] for t in counts])
            v = np.array([counts[t] for t in counts], dtype=np.float64) / len(d) * self.idf[js]
            v /= np.sqrt(np.dot(v, v))
            rows.extend([i] * len(js))
            cols.extend(js.tolist())
            vals.extend(v.tolist())
        return CsrMatrix.from_triplets(rows, cols, vals, (len(docs), len(self.vocab)))

    def to_dict(self):
        return {"kind": "tfidf", "max_df": self.max_df, "min_df": self.min_df,
                "max_features": self.max_features, "terms": self.terms,
                "idf": self.idf.tolist()}


def tfidf_fit(docs, max_df=0.95, min_df=2, max_features=None, rows=None):
    return TfidfModel(max_df=max_df, min_df=min_df, max_features=max_features).fit(docs, rows)


def tfidf_transform(model, docs):
    return model.transform(docs)


@dataclass(frozen=True)
class EmbeddingTable:
    dim: int
    entries: dict

    def __contains__(self, token):
        return token in self.entries


def load_embeddings(path):
    """Read ``token v1 ... vd`` lines into an ``EmbeddingTable``."""
    entries = {}
    dim = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            token, raw = parts[0], parts[1:]
            if dim is None:
                dim = len(raw)
                if dim == 0:
                    raise InconsistentDimension(f"line {lineno}: no vector components")
            elif len(raw) != dim:
                raise InconsistentDimension(
                    f"line {lineno}: expected {dim} components, got {len(raw)}")
            if token in entries:
                raise DuplicateToken(f"line {lineno}: duplicate token {token!r}")
            try:
                vec = np.array([float(x) for x in raw])
            except ValueError:
                raise DataError(f"line {lineno}: non-numeric component") from None
            if not np.all(np.isfinite(vec)):
                raise NonFinite(f"line {lineno}: non-finite component")
            entries[token] = vec
    if dim is None:
        raise DataError(f"{path}: empty embedding file")
    return EmbeddingTable(dim, entries)


def average_embedding(tokens, table):
    """Mean vector of the in-table tokens; zeros when none are known."""
    known = [table.entries[t] for t in tokens if t in table.entries]
    if not known:
        return np.zeros(table.dim)
    return np.sum(known, axis=0) / len(known)


def raw_tokens(text):
    return text.split()


def embedding_block(texts, table, use_clean=False):
    tok = clean if use_clean else raw_tokens
    data = np.array([average_embedding(tok(t), table) for t in texts]).reshape(len(texts), table.dim)
    return FeatureBlock(data, [f"emb{k}" for k in range(table.dim)], "embedding")


def read_comments(path):
    """Read the JSON Lines comments file into ``{username: joined_text}``."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                user, comments = obj["username"], obj["comments"]
            except (ValueError, KeyError, TypeError):
                raise DataError(f"{path}: line {lineno}: expected username/comments object") from None
            if not isinstance(comments, list):
                raise DataError(f"{path}: line {lineno}: comments must be a list")
            out[user] = " ".join(str(c) for c in comments[:100])
    return out
