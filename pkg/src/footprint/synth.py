"""Synthetic planted-signal corpora.

Each (user, subreddit) cell is an independent Bernoulli draw. On informative
subreddits the probability is ``base_rate + signal_strength * d * a`` where
``d = +-1`` is the column's direction and ``a`` in {-1, 0, +1} is the user's
position on the column's axis (economic: left/center/right, social:
lib/center/auth). Present cells get ``1 + Poisson(1)`` interactions. Text
uses the same construction as unnormalized unigram weights.
"""

import csv
import json
import os
from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import ConfigInvalid
from .ingest import HISTORY_HEADER, InteractionRecord
from .labels import NINE_CLASSES, TARGETS, to_economic, to_social

ECON_POS = {"left": -1, "center": 0, "right": 1}
SOCIAL_POS = {"lib": -1, "center": 0, "auth": 1}

# one raw flair per nine-class label, used when writing flair files
RAW_FOR = {
    "centrist": ":centrist: - Centrist",
    "left": ":left: - Left",
    "libright": ":libright: - LibRight",
    "right": ":right: - Right",
    "libleft": ":libleft: - LibLeft",
    "libcenter": ":lib: - LibCenter",
    "authcenter": ":auth: - AuthCenter",
    "authleft": ":authleft: - AuthLeft",
    "authright": ":authright: - AuthRight",
}

_CONS = "bdfgjmnpstvz"
_VOWELS = "aeiou"


@dataclass(frozen=True)
class SynthConfig:
    n_users: int = 2000
    n_subreddits: int = 300
    n_informative: int = 30
    signal_strength: float = 0.3
    base_rate: float = 0.5
    label_scheme: str = "econ_binary"
    vocab_size: int = 500
    words_per_user: int = 300
    seed: int = 42

    def __post_init__(self):
        for name in ("n_users", "n_subreddits", "vocab_size", "words_per_user"):
            if int(getattr(self, name)) < 1:
                raise ConfigInvalid(f"{name} must be >= 1")
        if not 0 <= self.n_informative <= self.n_subreddits:
            raise ConfigInvalid("n_informative must lie in [0, n_subreddits]")
        if not 0 <= self.signal_strength <= 0.5:
            raise ConfigInvalid("signal_strength must lie in [0, 0.5]")
        if not 0 <= self.base_rate <= 1:
            raise ConfigInvalid("base_rate must lie in [0, 1]")
        if not (0 <= self.base_rate - self.signal_strength
                and self.base_rate + self.signal_strength <= 1):
            raise ConfigInvalid("base_rate +- signal_strength must stay in [0, 1]")
        if self.label_scheme not in TARGETS:
            raise ConfigInvalid(f"label_scheme must be one of {TARGETS}")
        if self.seed < 0:
            raise ConfigInvalid("seed must be non-negative")

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigInvalid(str(exc)) from None

    def to_dict(self):
        return asdict(self)


@dataclass
class SynthCorpus:
    records: list
    users: list
    nine_labels: list
    comments: dict
    informative: list
    directions: list
    axes: list
    presence: np.ndarray
    subreddits: list
    vocab: list


def make_word(i):
    """Deterministic pronounceable token, stable under cleaning and stemming."""
    out = []
    while True:
        i, r = divmod(i, len(_CONS) * len(_VOWELS))
        out.append(_CONS[r // len(_VOWELS)] + _VOWELS[r % len(_VOWELS)])
        if i == 0:
            break
        i -= 1
    return "".join(out) + "k"


def _axis_positions(nine, axis):
    if axis == "econ":
        return np.array([ECON_POS[to_economic(v)] for v in nine], dtype=float)
    return np.array([SOCIAL_POS[to_social(v)] for v in nine], dtype=float)


def _column_axes(n, scheme, rng):
    if scheme.startswith("econ"):
        return ["econ"] * n
    if scheme.startswith("social"):
        return ["social"] * n
    return ["econ" if k % 2 == 0 else "social" for k in range(n)]


def generate_synthetic(cfg):
    rng = np.random.default_rng(cfg.seed)
    n, p = cfg.n_users, cfg.n_subreddits
    width = len(str(max(n, p) - 1))
    users = [f"user{i:0{width}d}" for i in range(n)]
    subreddits = [f"r/sub{j:0{width}d}" for j in range(p)]
    nine = [NINE_CLASSES[k] for k in rng.integers(0, len(NINE_CLASSES), size=n)]
    pos = {"econ": _axis_positions(nine, "econ"), "social": _axis_positions(nine, "social")}

    informative = sorted(rng.choice(p, size=cfg.n_informative, replace=False).tolist())
    directions = rng.choice([-1.0, 1.0], size=cfg.n_informative).tolist()
    axes = _column_axes(cfg.n_informative, cfg.label_scheme, rng)

    prob = np.full((n, p), cfg.base_rate)
    for j, d, ax in zip(informative, directions, axes):
        prob[:, j] = cfg.base_rate + cfg.signal_strength * d * pos[ax]
    presence = rng.random((n, p)) < prob
    counts = np.where(presence, 1 + rng.poisson(1.0, size=(n, p)), 0)

    ci, cj = np.nonzero(counts)
    reps = counts[ci, cj]
    ri, rj = np.repeat(ci, reps), np.repeat(cj, reps)
    m = ri.size
    is_post = rng.random(m) < 0.2
    topic = rng.integers(0, 50, size=m)
    score = rng.integers(-5, 200, size=m)
    stamp = np.stack([rng.integers(0, 24, m), rng.integers(0, 60, m),
                      rng.integers(1, 29, m), rng.integers(1, 13, m)], axis=1)
    records = [
        InteractionRecord(
            users[i],
            "post" if post else "comment",
            f"post about {make_word(t)}" if post else None,
            s,
            f"{h:02d}:{mi:02d} {d}/{mo}/21",
            subreddits[j],
        )
        for i, j, post, t, s, (h, mi, d, mo) in zip(
            ri.tolist(), rj.tolist(), is_post.tolist(), topic.tolist(),
            score.tolist(), stamp.tolist())
    ]

    vocab = [make_word(k) for k in range(cfg.vocab_size)]
    n_inf_words = min(cfg.n_informative, cfg.vocab_size)
    word_dirs = rng.choice([-1.0, 1.0], size=n_inf_words)
    word_axes = _column_axes(n_inf_words, cfg.label_scheme, rng)
    comments = {}
    for i, u in enumerate(users):
        weights = np.full(cfg.vocab_size, cfg.base_rate)
        for k in range(n_inf_words):
            weights[k] = cfg.base_rate + cfg.signal_strength * word_dirs[k] * pos[word_axes[k]][i]
        if weights.sum() <= 0:
            weights = np.ones(cfg.vocab_size)
        tokens = rng.choice(cfg.vocab_size, size=cfg.words_per_user, p=weights / weights.sum())
        words = [vocab[t] for t in tokens]
        chunks = []
        k = 0
        while k < len(words) and len(chunks) < 100:
            size = int(rng.integers(5, 31))
            text = " ".join(words[k:k + size])
            if rng.random() < 0.05:
                text += " https://example.com/" + make_word(int(rng.integers(0, 99)))
            chunks.append(text)
            k += size
        comments[u] = chunks

    return SynthCorpus(records, users, nine, comments, informative, directions, axes,
                       presence, subreddits, vocab)


def write_corpus(corpus, out_dir):
    """Write history.csv, flairs.csv and comments.jsonl into ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "history": os.path.join(out_dir, "history.csv"),
        "flairs": os.path.join(out_dir, "flairs.csv"),
        "comments": os.path.join(out_dir, "comments.jsonl"),
    }
    with open(paths["history"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HISTORY_HEADER)
        for r in corpus.records:
            w.writerow([r.user, r.kind, r.title or "", r.score, r.time, r.subreddit])
    with open(paths["flairs"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["username", "ideology"])
        for u, v in zip(corpus.users, corpus.nine_labels):
            w.writerow([u, RAW_FOR[v]])
    with open(paths["comments"], "w", encoding="utf-8") as fh:
        for u in corpus.users:
            fh.write(json.dumps({"username": u, "comments": corpus.comments[u]}) + "\n")
    return paths
