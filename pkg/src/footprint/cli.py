"""Command-line entry point: ``footprint <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data or model error.
"""

import argparse
import csv
import json
import logging
import os
import sys
import time
import warnings

import numpy as np

from . import labels as lab
from .errors import DataError
from .featsel import boruta_select
from .ingest import InteractionMatrix, parse_history, pivot_chunked, prepare, read_matrix, write_matrix
from .metrics import evaluate, term_ideology_correlation, write_correlations
from .models import build_model
from .models.logistic import SeparableWarning
from .models.serialize import dumps, loads
from .pipeline import (DEFAULT_GRID, Dataset, FeatureSpec, SamplingStudySpec, SplitSpec,
                       restricted_sampling_study, run_experiment)
from .sparsela import CsrMatrix, project, truncated_svd, variance_explained
from .synth import SynthConfig, generate_synthetic, write_corpus
from .textfeat import clean, embedding_block, load_embeddings, read_comments, tfidf_fit

log = logging.getLogger("footprint")


class UsageError(Exception):
    def __init__(self, message, help_text=""):
        super().__init__(message)
        self.help_text = help_text


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, self.format_help())


# io helpers -------------------------------------------------------------------

def _need(path):
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    return path


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _read_json(path):
    with open(_need(path), encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except ValueError as exc:
            raise DataError(f"{path}: invalid JSON ({exc})") from None


def _mkdir(path):
    os.makedirs(path, exist_ok=True)
    return path


def write_features(path, users, block_data, names):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["username", *names])
        for u, row in zip(users, np.asarray(block_data).tolist()):
            w.writerow([u, *(repr(v) for v in row)])


def read_features(path):
    """Dense CSV (``username,<features>``) or a ``%%csr`` matrix file."""
    _need(path)
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
    if first.startswith("%%csr"):
        m = read_matrix(path)
        return list(m.users), m.matrix.to_dense(), list(m.subreddits)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "username":
            raise DataError(f"{path}: expected a 'username,...' header")
        users, rows = [], []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise DataError(f"{path}: row {lineno}: expected {len(header)} columns")
            users.append(row[0])
            try:
                rows.append([float(v) for v in row[1:]])
            except ValueError:
                raise DataError(f"{path}: row {lineno}: non-numeric feature") from None
    return users, np.array(rows).reshape(len(users), len(header) - 1), header[1:]


def _task_xy(users, x, label_path, target):
    col = lab.read_flairs(_need(label_path))
    lbl = col.as_dict()
    rows = [i for i, u in enumerate(users) if u in lbl]
    if not rows:
        raise DataError("no user in the feature file has a label")
    keep, y = lab.target_labels([lbl[users[i]] for i in rows], target)
    idx = [rows[k] for k in keep]
    return [users[i] for i in idx], x[idx], np.asarray(y)


def _parse_params(items):
    params = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            params[k] = json.loads(v)
        except ValueError:
            params[k] = v
    return params


def _echo(args, **extra):
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "threads", "log_level")}
    cfg.update(extra)
    log.info("resolved config: %s", json.dumps(cfg, sort_keys=True))
    return cfg


# subcommands --------------------------------------------------------------------

def cmd_synth(args):
    cfg = SynthConfig.from_dict(_read_json(args.config))
    corpus = generate_synthetic(cfg)
    out = _mkdir(args.out)
    paths = write_corpus(corpus, out)
    _write_json(os.path.join(out, "truth.json"), {
        "config": cfg.to_dict(), "seed": cfg.seed,
        "informative": [corpus.subreddits[j] for j in corpus.informative],
        "directions": corpus.directions, "axes": corpus.axes,
        "files": {k: os.path.basename(v) for k, v in paths.items()},
    })


def cmd_ingest(args):
    with open(_need(args.history), newline="", encoding="utf-8") as fh:
        records = parse_history(fh)
    m = pivot_chunked(records, args.chunk_size, threads=args.threads)
    m = prepare(m, args.min_user, args.min_sub, args.binarize)
    flairs = lab.read_flairs(_need(args.flairs)).as_dict()
    users = [u for u in m.users if u in flairs]
    pos = {u: i for i, u in enumerate(m.users)}
    m = m.take_rows([pos[u] for u in users])
    out = _mkdir(args.out)
    write_matrix(os.path.join(out, "interactions.csr"), m)
    lab.write_flairs(os.path.join(out, "labels.csv"),
                     lab.LabelColumn(users, [flairs[u] for u in users]))
    _write_json(os.path.join(out, "ingest.json"), {
        "config": _echo(args), "n_users": len(m.users), "n_subreddits": len(m.subreddits),
        "nnz": m.matrix.nnz,
    })


def cmd_featurize(args):
    texts = read_comments(_need(args.comments))
    users = sorted(texts)
    out = _mkdir(args.out)
    meta = {"config": _echo(args), "n_users": len(users)}
    if args.mode in ("tfidf", "both"):
        tokens = [clean(texts[u]) for u in users]
        model = tfidf_fit(tokens, args.max_df, args.min_df, args.max_features)
        x = model.transform(tokens)
        write_matrix(os.path.join(out, "tfidf.csr"), InteractionMatrix(x, users, model.terms))
        _write_json(os.path.join(out, "tfidf_model.json"), model.to_dict())
        meta["vocab_size"] = len(model.vocab)
    if args.mode in ("w2v", "both"):
        if not args.embeddings:
            raise UsageError("--embeddings is required for mode w2v/both")
        table = load_embeddings(_need(args.embeddings))
        block = embedding_block([texts[u] for u in users], table)
        write_features(os.path.join(out, "embeddings.csv"), users, block.data, block.column_names)
        meta["embedding_dim"] = table.dim
    _write_json(os.path.join(out, "featurize.json"), meta)


def cmd_svd(args):
    m = read_matrix(_need(args.matrix))
    x = m.matrix.binarize() if args.binarize else m.matrix
    f = truncated_svd(x, args.q, args.power_iters, args.oversample, args.seed)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(f.to_json())
        fh.write("\n")
    meta = {"config": _echo(args), "variance_explained": variance_explained(f, x)}
    if args.scores:
        block = project(x, f)
        write_features(args.scores, m.users, block.data, block.column_names)
    _write_json(args.out + ".meta.json", meta)


def cmd_train(args):
    users, x, names = read_features(args.features)
    users, x, y = _task_xy(users, x, args.labels, args.task)
    params = _parse_params(args.param)
    model = build_model(args.model, params, np.unique(y).size, args.seed, args.threads)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SeparableWarning)
        model.fit(x, y)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(dumps(model, task=args.task, features=names, config=_echo(args)))
        fh.write("\n")


def cmd_eval(args):
    with open(_need(args.model), encoding="utf-8") as fh:
        model, meta = loads(fh.read())
    task = args.task or meta.get("task", "econ_binary")
    users, x, _ = read_features(args.features)
    users, x, y = _task_xy(users, x, args.labels, task)
    report = evaluate(model, x, y).to_dict()
    report["task"] = task
    report["config"] = _echo(args, task=task)
    _write_json(args.out, report)


def _load_experiment_data(cfg, base):
    data = cfg.get("data", {})

    def path(key):
        p = data.get(key)
        return None if p is None else _need(os.path.join(base, p))

    if "synth" in data:
        corpus = generate_synthetic(SynthConfig.from_dict(data["synth"]))
        m = prepare(pivot_chunked(corpus.records), data.get("min_user", 50),
                    data.get("min_sub", 50))
        col = lab.LabelColumn(corpus.users, corpus.nine_labels)
        texts = {u: " ".join(corpus.comments[u]) for u in corpus.users}
        return Dataset.align(col, m, texts)
    col = lab.read_flairs(path("flairs"))
    m = None
    if data.get("matrix"):
        m = read_matrix(path("matrix"))
    elif data.get("history"):
        with open(path("history"), newline="", encoding="utf-8") as fh:
            m = prepare(pivot_chunked(parse_history(fh)), data.get("min_user", 50),
                        data.get("min_sub", 50))
    texts = read_comments(path("comments")) if data.get("comments") else None
    return Dataset.align(col, m, texts)


def cmd_experiment(args):
    cfg = _read_json(args.config)
    base = os.path.dirname(os.path.abspath(args.config))
    seed = int(cfg.get("seed", args.seed))
    t0 = time.perf_counter()
    ds = _load_experiment_data(cfg, base)
    emb = None
    if cfg.get("data", {}).get("embeddings"):
        emb = load_embeddings(_need(os.path.join(base, cfg["data"]["embeddings"])))
    split_cfg = cfg.get("split", {})
    split_spec = SplitSpec(tuple(split_cfg.get("ratios", (0.64, 0.16, 0.20))),
                           int(split_cfg.get("seed", seed)))
    result = run_experiment(ds, cfg.get("task", "econ_binary"), FeatureSpec(**cfg.get("features", {})),
                            cfg.get("grid", DEFAULT_GRID), split_spec, seed, args.threads, emb)
    out = _mkdir(args.out or os.path.join(base, cfg.get("out", "results")))
    report = dict(result.report)
    report["config"] = cfg
    _write_json(os.path.join(out, "report.json"), report)
    # wall-clock lives apart from the report so the report stays byte-stable
    _write_json(os.path.join(out, "timing.json"), {"timing": {"seconds": time.perf_counter() - t0}})
    with open(os.path.join(out, "model.json"), "w", encoding="utf-8") as fh:
        fh.write(dumps(result.model, task=report["task"]))
        fh.write("\n")
    with open(os.path.join(out, "summary.csv"), "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, ["Model", "Accuracy", "AUC", "N"], lineterminator="\n")
        w.writeheader()
        w.writerow(result.summary_row())
        w.writerow({"Model": "ZeroR", "Accuracy": report["zeror"]["accuracy"], "AUC": "",
                    "N": report["n_users"]})


def cmd_sample_study(args):
    m = read_matrix(_need(args.matrix))
    lbl = lab.read_flairs(_need(args.labels)).as_dict()
    rows = [i for i, u in enumerate(m.users) if u in lbl]
    m = m.take_rows(rows)
    spec = SamplingStudySpec(tuple(args.sizes), args.min_unique, args.seed, args.target,
                             args.svd_q or None, args.lam)
    res = restricted_sampling_study(m, [lbl[u] for u in m.users], spec)
    res["accuracy"] = {str(k): v for k, v in res["accuracy"].items()}
    res["config"] = _echo(args)
    _write_json(args.out, res)


def cmd_boruta(args):
    m = read_matrix(_need(args.matrix))
    x = m.matrix.binarize() if args.binarize else m.matrix
    users, xd, y = _task_xy(list(m.users), x.to_dense(), args.labels, args.target)
    res = boruta_select(xd, y, {"n_trees": args.trees}, args.seed, args.threads)
    with open(args.out, "w", encoding="utf-8") as fh:
        for j in res.selected:
            fh.write(f"{m.subreddits[j]}\n")
    _write_json(args.out + ".meta.json", {
        "config": _echo(args), "shadow_max": res.shadow_max,
        "importances": {m.subreddits[j]: float(v) for j, v in enumerate(res.importances)},
    })


def cmd_correlate(args):
    texts = read_comments(_need(args.comments))
    col = lab.read_flairs(_need(args.labels))
    users = [u for u in col.user_ids if u in texts]
    nine = col.as_dict()
    fn = lab.to_economic if args.axis == "econ" else lab.to_social
    tokens = [clean(texts[u]) for u in users]
    model = tfidf_fit(tokens, args.max_df, args.min_df, args.max_features)
    r = term_ideology_correlation(model.transform(tokens), [fn(nine[u]) for u in users])
    write_correlations(args.out, model.terms, r)
    _write_json(args.out + ".meta.json", {"config": _echo(args), "n_users": len(users)})


# parser ---------------------------------------------------------------------------

def _df(v):
    f = float(v)
    return int(f) if f > 1 and f.is_integer() else f


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--log-level", default="WARNING")

    p = _Parser(prog="footprint", description=__doc__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("synth", parents=[common], help="generate a synthetic corpus")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("ingest", parents=[common], help="history CSV -> interaction matrix")
    s.add_argument("--history", required=True)
    s.add_argument("--flairs", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--min-user", type=int, default=50)
    s.add_argument("--min-sub", type=int, default=50)
    s.add_argument("--binarize", action="store_true")
    s.add_argument("--chunk-size", type=int, default=100_000)
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("featurize", parents=[common], help="tf-idf and/or embedding features")
    s.add_argument("--comments", required=True)
    s.add_argument("--mode", choices=["tfidf", "w2v", "both"], required=True)
    s.add_argument("--max-features", type=int, default=None)
    s.add_argument("--min-df", type=_df, default=2)
    s.add_argument("--max-df", type=_df, default=0.95)
    s.add_argument("--embeddings")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_featurize)

    s = sub.add_parser("svd", parents=[common], help="truncated SVD of a matrix file")
    s.add_argument("--matrix", required=True)
    s.add_argument("--q", type=int, default=500)
    s.add_argument("--power-iters", type=int, default=4)
    s.add_argument("--oversample", type=int, default=10)
    s.add_argument("--binarize", action="store_true")
    s.add_argument("--scores", help="also write projected scores as CSV")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_svd)

    s = sub.add_parser("train", parents=[common], help="fit one model on a feature file")
    s.add_argument("--features", required=True)
    s.add_argument("--labels", required=True)
    s.add_argument("--task", choices=lab.TARGETS, default="econ_binary")
    s.add_argument("--model", default="logistic")
    s.add_argument("--param", action="append", help="name=value (JSON value), repeatable")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("eval", parents=[common], help="score a saved model")
    s.add_argument("--model", required=True)
    s.add_argument("--features", required=True)
    s.add_argument("--labels", required=True)
    s.add_argument("--task", choices=lab.TARGETS)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("experiment", parents=[common], help="run a configured experiment")
    s.add_argument("--config", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("sample-study", parents=[common], help="restricted-sampling study")
    s.add_argument("--matrix", required=True)
    s.add_argument("--labels", required=True)
    s.add_argument("--sizes", type=int, nargs="+", default=[10, 25, 50, 100, 200])
    s.add_argument("--min-unique", type=int, default=200)
    s.add_argument("--target", choices=["econ_binary", "social_binary"], default="econ_binary")
    s.add_argument("--svd-q", type=int, default=20)
    s.add_argument("--lam", type=float, default=0.0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sample_study)

    s = sub.add_parser("boruta", parents=[common], help="shadow-feature selection")
    s.add_argument("--matrix", required=True)
    s.add_argument("--labels", required=True)
    s.add_argument("--trees", type=int, default=100)
    s.add_argument("--binarize", action="store_true")
    s.add_argument("--target", choices=lab.TARGETS, default="econ_binary")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_boruta)

    s = sub.add_parser("correlate", parents=[common], help="term-ideology correlations")
    s.add_argument("--comments", required=True)
    s.add_argument("--labels", required=True)
    s.add_argument("--axis", choices=["econ", "social"], default="econ")
    s.add_argument("--max-features", type=int, default=None)
    s.add_argument("--min-df", type=_df, default=2)
    s.add_argument("--max-df", type=_df, default=0.95)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_correlate)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            raise UsageError("a subcommand is required", parser.format_help())
        logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                            format="%(levelname)s %(name)s: %(message)s")
        args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        if exc.help_text:
            print(exc.help_text, file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
        return 2
    except (DataError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
