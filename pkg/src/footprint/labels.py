"""Flair parsing and the ideology recoding maps.

Labels are plain lowercase strings ("libleft", "authcenter", ...) so they
serialize as-is and sort deterministically.
"""

import csv
from dataclasses import dataclass

from .errors import DataError, LengthMismatch, UnknownFlair

NINE_CLASSES = (
    "authcenter",
    "authleft",
    "authright",
    "centrist",
    "left",
    "libcenter",
    "libleft",
    "libright",
    "right",
)
ECON_CLASSES = ("center", "left", "right")
SOCIAL_CLASSES = ("auth", "center", "lib")
CENTER = "center"

RAW_FLAIRS = {
    ":CENTG: - Centrist": "centrist",
    ":centrist: - Centrist": "centrist",
    ":centrist: - Grand Inquisitor": "centrist",
    ":left: - Left": "left",
    ":libright: - LibRight": "libright",
    ":libright2: - LibRight": "libright",
    ":right: - Right": "right",
    ":libleft: - LibLeft": "libleft",
    ":lib: - LibCenter": "libcenter",
    ":auth: - AuthCenter": "authcenter",
    ":authleft: - AuthLeft": "authleft",
    ":authright: - AuthRight": "authright",
}

ECONOMIC_MAP = {
    "centrist": "center",
    "left": "left",
    "libright": "right",
    "right": "right",
    "libleft": "left",
    "libcenter": "center",
    "authcenter": "center",
    "authleft": "left",
    "authright": "right",
}

SOCIAL_MAP = {
    "centrist": "center",
    "left": "center",
    "libright": "lib",
    "right": "center",
    "libleft": "lib",
    "libcenter": "lib",
    "authcenter": "auth",
    "authleft": "auth",
    "authright": "auth",
}


def recode_flair(raw):
    """Map one of the twelve raw flair strings to its nine-class label."""
    key = raw.strip()
    try:
        return RAW_FLAIRS[key]
    except KeyError:
        raise UnknownFlair(f"unknown flair {raw!r}") from None


def _check_nine(nine):
    if nine not in ECONOMIC_MAP:
        raise UnknownFlair(f"not a nine-class label: {nine!r}")


def to_economic(nine):
    _check_nine(nine)
    return ECONOMIC_MAP[nine]


def to_social(nine):
    _check_nine(nine)
    return SOCIAL_MAP[nine]


def parse_ideology(value):
    """Accept either a raw flair or an already-recoded nine-class name."""
    v = value.strip()
    if v in ECONOMIC_MAP:
        return v
    return recode_flair(v)


@dataclass(frozen=True)
class LabelColumn:
    user_ids: tuple
    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "user_ids", tuple(self.user_ids))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.user_ids) != len(self.labels):
            raise LengthMismatch("user_ids and labels differ in length")
        if len(set(self.user_ids)) != len(self.user_ids):
            raise DataError("duplicate user ids in label column")

    def __len__(self):
        return len(self.labels)

    def as_dict(self):
        return dict(zip(self.user_ids, self.labels))

    def map(self, fn):
        return LabelColumn(self.user_ids, [fn(v) for v in self.labels])

    def subset(self, indices):
        return LabelColumn(
            [self.user_ids[i] for i in indices], [self.labels[i] for i in indices]
        )


def filter_centrists(col):
    """Indices of users whose three-class label is not ``center``, in order."""
    labels = col.labels if isinstance(col, LabelColumn) else col
    return [i for i, v in enumerate(labels) if v != CENTER]


def read_flairs(path):
    """Read a ``username,ideology`` CSV into a nine-class ``LabelColumn``."""
    users, labels = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["username", "ideology"]:
            raise DataError(f"{path}: expected header 'username,ideology'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise DataError(f"{path}: row {lineno}: expected 2 columns")
            users.append(row[0].strip())
            labels.append(parse_ideology(row[1]))
    return LabelColumn(users, labels)


def write_flairs(path, col):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["username", "ideology"])
        for u, v in zip(col.user_ids, col.labels):
            w.writerow([u, v])


TARGETS = ("econ_binary", "social_binary", "econ_3", "social_3", "nine_class")


def target_labels(nine_labels, target):
    """Recode nine-class labels for a task target.

    Returns ``(indices, labels)``; binary targets drop centrists, so
    ``indices`` selects the retained rows.
    """
    if target not in TARGETS:
        raise DataError(f"unknown target {target!r}")
    if target == "nine_class":
        return list(range(len(nine_labels))), list(nine_labels)
    fn = to_economic if target.startswith("econ") else to_social
    three = [fn(v) for v in nine_labels]
    if target.endswith("_3"):
        return list(range(len(three))), three
    keep = filter_centrists(three)
    return keep, [three[i] for i in keep]
