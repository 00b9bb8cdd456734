import json
import subprocess
import sys

import numpy as np
import pytest

from qtcintent.cli import cli
from qtcintent.data import read_embedding_file

FAST = ["--epochs", "5", "--lr", "0.01", "--folds", "2"]


def test_help_exits_zero(capsys):
    assert cli(["--help"]) == 0
    assert "features" in capsys.readouterr().out


def test_unknown_flag_usage_error(capsys):
    assert cli(["eval", "--bogus"]) == 1
    assert "error" in capsys.readouterr().err


def test_missing_subcommand_usage_error():
    assert cli([]) == 1


def test_missing_train_is_usage_error(keyword_tsvs, capsys):
    _, test_path = keyword_tsvs
    code = cli(["grid", "--test", test_path, "--toy-dim", "8", "--seed", "42"] + FAST)
    assert code == 1
    assert "train" in capsys.readouterr().err


def test_kernel_bound_is_usage_error(keyword_tsvs, capsys):
    train_path, test_path = keyword_tsvs
    code = cli(["eval", "--train", train_path, "--test", test_path, "--toy-dim", "8",
                "--kernel", "17"] + FAST)
    assert code == 1
    assert "kernel" in capsys.readouterr().err


def test_missing_data_file_is_data_error(capsys):
    code = cli(["eval", "--train", "/nonexistent.tsv", "--toy-dim", "8"] + FAST)
    assert code == 2


def test_bad_qtce_is_data_error(tmp_path, keyword_tsvs, capsys):
    bad = tmp_path / "bad.qtce"
    bad.write_bytes(b"NOPE" + b"\x00" * 20)
    code = cli(["eval", "--embeddings", str(bad)] + FAST)
    assert code == 2
    assert "magic" in capsys.readouterr().err


def test_grid_writes_report_files(keyword_tsvs, tmp_path, capsys):
    train_path, test_path = keyword_tsvs
    out = tmp_path / "r.json"
    code = cli(["grid", "--train", train_path, "--test", test_path,
                "--toy-dim", "8", "--seed", "42", "--out", str(out)] + FAST)
    assert code == 0
    table = capsys.readouterr().out
    assert "TCN" in table and "QTC" in table
    assert out.exists()
    payload = json.loads(out.read_text())
    assert len(payload["cells"]) == 8
    assert (tmp_path / "r.csv").exists()
    assert (tmp_path / "r.png").exists()


def test_grid_no_fig(keyword_tsvs, tmp_path):
    train_path, test_path = keyword_tsvs
    out = tmp_path / "r.json"
    code = cli(["grid", "--train", train_path, "--test", test_path, "--toy-dim", "8",
                "--out", str(out), "--no-fig"] + FAST)
    assert code == 0
    assert out.exists() and not (tmp_path / "r.png").exists()


def test_eval_prints_runs(keyword_tsvs, capsys):
    train_path, test_path = keyword_tsvs
    code = cli(["eval", "--train", train_path, "--test", test_path, "--toy-dim", "8"] + FAST)
    assert code == 0
    out = capsys.readouterr().out
    assert out.count("run ") == 2
    assert "mean" in out


def test_features_dumps_jsonl_and_qtce(keyword_tsvs, tmp_path):
    train_path, _ = keyword_tsvs
    jsonl = tmp_path / "feats.jsonl"
    qtce = tmp_path / "emb.qtce"
    code = cli(["features", "--train", train_path, "--toy-dim", "8",
                "--encoder", "qtc", "--filters", "2", "--kernel", "3",
                "--out", str(jsonl), "--embeddings-out", str(qtce)])
    assert code == 0
    rows = [json.loads(line) for line in jsonl.read_text().splitlines()]
    assert len(rows) == 140
    assert set(rows[0]) == {"id", "label", "features"}
    assert len(rows[0]["features"]) == 6
    seqs = read_embedding_file(qtce)
    assert len(seqs) == 140
    assert seqs[0].D == 8


def test_features_requires_an_output(keyword_tsvs):
    train_path, _ = keyword_tsvs
    assert cli(["features", "--train", train_path, "--toy-dim", "8"]) == 1


def test_train_then_predict_roundtrip(keyword_tsvs, tmp_path, capsys):
    train_path, test_path = keyword_tsvs
    model = tmp_path / "head.json"
    code = cli(["train", "--train", train_path, "--toy-dim", "64",
                "--filters", "2", "--kernel", "4", "--seed", "7",
                "--epochs", "300", "--lr", "0.01", "--model-out", str(model)])
    assert code == 0
    payload = json.loads(model.read_text())
    assert {"C", "F", "W", "b", "labels", "encoder"} <= set(payload)
    assert payload["C"] == 7 and payload["F"] == 8
    assert len(payload["W"]) == 7 * 8

    # export test-set embeddings, then label them with the trained head
    qtce = tmp_path / "test.qtce"
    assert cli(["features", "--train", test_path, "--toy-dim", "64", "--seed", "7",
                "--embeddings-out", str(qtce)]) == 0
    preds = tmp_path / "preds.tsv"
    code = cli(["predict", "--model", str(model), "--embeddings", str(qtce),
                "--out", str(preds)])
    assert code == 0
    lines = preds.read_text().strip().splitlines()
    assert len(lines) == 70
    assert all("\t" in line for line in lines)
    predicted = [line.split("\t")[1] for line in lines]
    assert set(predicted) <= {f"intent{c}" for c in range(7)}
    err = capsys.readouterr().err
    assert "accuracy" in err


def test_embeddings_and_toy_dim_conflict(keyword_tsvs, tmp_path):
    train_path, _ = keyword_tsvs
    code = cli(["eval", "--train", train_path, "--toy-dim", "8",
                "--embeddings", str(tmp_path / "x.qtce")] + FAST)
    assert code == 1


def test_console_script_entry_point(keyword_tsvs):
    proc = subprocess.run(
        [sys.executable, "-m", "qtcintent.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "qtcintent" in proc.stdout
