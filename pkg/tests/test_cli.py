import json

import pytest

from footprint.cli import build_parser, main


def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["frobnicate"]) == 1
    err = capsys.readouterr().err
    assert "usage" in err


def test_missing_argument_is_usage_error(capsys):
    assert main(["svd"]) == 1
    assert "--matrix" in capsys.readouterr().err


def test_no_subcommand(capsys):
    assert main([]) == 1


def test_missing_file_reports_path(tmp_path, capsys):
    path = tmp_path / "nope.csr"
    assert main(["svd", "--matrix", str(path), "--out", str(tmp_path / "x.json")]) == 2
    assert str(path) in capsys.readouterr().err


def test_bad_config_is_data_error(tmp_path, capsys):
    cfg = tmp_path / "s.json"
    cfg.write_text(json.dumps({"n_users": -3}))
    assert main(["synth", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    cfg.write_text("{not json")
    assert main(["synth", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2


def test_every_subcommand_has_help():
    parser = build_parser()
    names = ["synth", "ingest", "featurize", "svd", "train", "eval", "experiment",
             "sample-study", "boruta", "correlate"]
    for name in names:
        with pytest.raises(SystemExit) as ex:
            parser.parse_args([name, "--help"])
        assert ex.value.code == 0


def test_experiment_writes_reports(tmp_path):
    cfg = tmp_path / "exp.json"
    cfg.write_text(json.dumps({
        "data": {"synth": {"n_users": 300, "n_subreddits": 50, "n_informative": 8,
                           "words_per_user": 1, "seed": 4}, "min_user": 5, "min_sub": 5},
        "task": "econ_binary", "features": {"source": "interaction", "binarize": True,
                                            "svd_q": 6},
        "grid": [{"kind": "logistic", "params": {"lam": 0.0}}], "seed": 4}))
    assert main(["experiment", "--config", str(cfg), "--out", str(tmp_path / "res")]) == 0
    report = json.loads((tmp_path / "res" / "report.json").read_text())
    assert report["config"]["seed"] == 4 and report["seed"] == 4
    assert "timing" not in report
    assert "timing" in json.loads((tmp_path / "res" / "timing.json").read_text())
    summary = (tmp_path / "res" / "summary.csv").read_text().splitlines()
    assert summary[0] == "Model,Accuracy,AUC,N" and summary[2].startswith("ZeroR,")


def test_train_param_parsing(tmp_path, capsys):
    assert main(["train", "--features", "f.csv", "--labels", "l.csv", "--param", "oops",
                 "--out", str(tmp_path / "m.json")]) in (1, 2)
