import csv
import io

import numpy as np
import pytest

from sublis.bench import (BASE_COLUMNS, ConfigError, ExperimentConfig, generate, half_decreasing,
                          run_experiment, sawtooth)
from sublis.cli import main
from sublis.exact import lis_exact
from sublis.oracle import read_instance


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


@pytest.fixture
def instance(tmp_path):
    path = tmp_path / "saw.txt"
    assert main(["generate", "--family", "sawtooth", "--n", "4096", "--seed", "1", "--out", str(path)]) == 0
    return str(path)


def test_family_shapes():
    assert sawtooth(8).tolist() == [4, 3, 2, 1, 8, 7, 6, 5]
    assert half_decreasing(6).tolist() == [1, 2, 3, 6, 5, 4]
    arr, _ = generate("random-r", 1000, 0, r=5)
    assert arr.distinct_count() <= 5
    arr, _ = generate("identity", 1024, 0, blowup=4)
    assert arr.distinct_count() == 256 and lis_exact(arr.values) == 1024


def test_generate_hard_family_writes_labels(tmp_path):
    out = tmp_path / "d1.txt"
    assert main(["generate", "--family", "D1", "--n", "256", "--scales", "6,2", "--seed", "3",
                 "--out", str(out)]) == 0
    arr = read_instance(out)
    assert arr.n == 256
    assert (tmp_path / "d1.txt.labels").read_text().strip()


def test_erase_overlay(tmp_path, instance):
    out = tmp_path / "er.txt"
    assert main(["generate", "--family", "erase-overlay", "--base", instance, "--alpha", "0.25",
                 "--out", str(out)]) == 0
    assert read_instance(out).erased_fraction == pytest.approx(0.25)


@pytest.mark.parametrize("argv", [
    ["er-test", "--epsilon", "0.3"],
    ["lis-add", "--epsilon", "0.3", "--r", "4096"],
    ["lis-sqrt", "--epsilon", "0.25", "--r", "4096", "--lambda", "0.25"],
    ["lis-sqrt", "--epsilon", "0.25", "--r", "4096", "--sweep"],
    ["exact"],
])
def test_subcommands_emit_csv(capsys, instance, argv):
    code, out = _run(capsys, argv + ["--input", instance] + (["--trials", "2"] if argv[0] != "exact" else []))
    assert code == 0
    rows = _rows(out)
    assert list(rows[0])[:len(BASE_COLUMNS)] == BASE_COLUMNS
    assert rows[-1]["trial"] == "summary"
    if argv[0] == "exact":
        assert rows[0]["lis"] == str(lis_exact(sawtooth(4096)))
    if argv[0] == "er-test":
        assert rows[0]["decision"] == "Reject"
        assert rows[-1]["estimate"] == "1.0"


def test_seed_env_override(capsys, instance, monkeypatch):
    _, a = _run(capsys, ["lis-add", "--input", instance, "--epsilon", "0.3", "--r", "4", "--seed", "5"])
    monkeypatch.setenv("SUBLIS_SEED", "5")
    _, b = _run(capsys, ["lis-add", "--input", instance, "--epsilon", "0.3", "--r", "4", "--seed", "9"])
    assert _rows(a)[0]["seed"] == _rows(b)[0]["seed"] == "5"
    monkeypatch.setenv("SUBLIS_SEED", "x")
    assert main(["lis-add", "--input", instance, "--epsilon", "0.3", "--r", "4"]) == 2


def test_config_errors_exit_2(tmp_path, instance, capsys):
    assert main(["lis-add", "--input", instance, "--epsilon", "1.5", "--r", "4"]) == 2
    assert main(["lis-add", "--input", instance, "--epsilon", "0.5", "--r", "0"]) == 2
    assert main(["er-test", "--input", str(tmp_path / "missing"), "--epsilon", "0.5"]) == 2
    assert main(["generate", "--family", "nope", "--n", "8", "--out", str(tmp_path / "x")]) == 2
    assert main(["generate", "--family", "D0", "--n", "100", "--scales", "4,2",
                 "--out", str(tmp_path / "x")]) == 2
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("algorithm = lis-add\nfamily = identity\nn = 100\nwhat = 1\n")
    assert main(["experiment", "--config", str(cfg)]) == 2
    assert "unknown config key" in capsys.readouterr().err


def test_experiment_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    out = tmp_path / "out.csv"
    cfg.write_text("# additive run\nalgorithm = lis-add\nfamily = random-r\nn = 20000\nr = 4\n"
                   f"epsilon = 0.3\ntrials = 3\nseed = 11\noutput = {out}\nregenerate = true\n")
    assert main(["experiment", "--config", str(cfg)]) == 0
    rows = _rows(out.read_text())
    assert [r["seed"] for r in rows[:3]] == ["11", "12", "13"]
    assert rows[-1]["decision"] == "success=3/3"


def test_parallel_matches_serial():
    base = dict(algorithm="lis-sqrt", family="half-decreasing", n="4096", epsilon="0.25",
                trials="3", seed="2")
    drop = lambda rows: [{k: v for k, v in r.items() if k != "wall_time_ms"} for r in rows]
    serial = run_experiment(ExperimentConfig.from_mapping(base))
    par = run_experiment(ExperimentConfig.from_mapping({**base, "workers": "2"}))
    assert drop(serial) == drop(par)


def test_validate_rules():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_mapping({"algorithm": "lis-add"})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_mapping({"algorithm": "bogus", "family": "identity", "n": "8"})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_mapping({"algorithm": "lis-sqrt", "family": "identity", "n": "8",
                                       "lambda": "2"})


def test_diag_report(tmp_path, capsys):
    inst = tmp_path / "i.txt"
    main(["generate", "--family", "identity", "--n", "4096", "--out", str(inst)])
    diag = tmp_path / "diag.txt"
    code, _ = _run(capsys, ["lis-sqrt", "--input", str(inst), "--epsilon", "0.25", "--r", "4096",
                            "--diag", str(diag)])
    assert code == 0
    text = diag.read_text()
    assert text.startswith("estimate ")
    assert "chain 0" in text
