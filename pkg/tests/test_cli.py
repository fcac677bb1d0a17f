import csv
import io
import json
from pathlib import Path

import pytest

from selpop.cli import main
from selpop.experiments import CSV_HEADER
from selpop.verify import fast_median_runs

PP = Path(__file__).resolve().parent.parent / "protocols"


def rows_of(text):
    return list(csv.reader(io.StringIO(text)))


def test_simulate_writes_one_row_per_trial(capsys):
    assert main(["simulate", "--protocol", "le", "--n", "1000", "--trials", "20", "--seed", "7"]) == 0
    out = capsys.readouterr()
    rows = rows_of(out.out)
    assert tuple(rows[0]) == CSV_HEADER
    assert len(rows) == 21
    assert "20/20 correct" in out.err


def test_output_independent_of_worker_count(tmp_path, monkeypatch):
    monkeypatch.delenv("SELPOP_WORKERS", raising=False)
    texts = []
    for w in (1, 3):
        out = tmp_path / f"w{w}.csv"
        args = ["simulate", "--protocol", "majority", "--n-grid", "50,80", "--trials", "6", "--seed", "3",
                "--workers", str(w), "--out", str(out)]
        assert main(args) == 0
        texts.append(out.read_text())
    assert texts[0] == texts[1]
    assert len(rows_of(texts[0])) == 13


def test_workers_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("SELPOP_WORKERS", "2")
    out = tmp_path / "env.csv"
    assert main(["simulate", "--protocol", "epidemic", "--n", "100", "--trials", "4", "--out", str(out)]) == 0
    assert len(rows_of(out.read_text())) == 5


def test_empty_population_is_a_config_error(tmp_path, capsys):
    out = tmp_path / "none.csv"
    assert main(["simulate", "--protocol", "epidemic", "--n", "0", "--out", str(out)]) == 2
    assert "EmptyPopulation" in capsys.readouterr().err
    assert not out.exists()


def test_unknown_protocol(capsys):
    assert main(["simulate", "--protocol", "nope", "--n", "10"]) == 2
    assert "error:" in capsys.readouterr().err


def test_protocol_file_run(capsys):
    args = ["simulate", "--protocol-file", str(PP / "epidemic.pp"), "--n", "60", "--trials", "3",
            "--init", "1=1,0=*"]
    assert main(args) == 0
    rows = rows_of(capsys.readouterr().out)
    assert len(rows) == 4
    assert all(r[CSV_HEADER.index("stabilized")] == "true" for r in rows[1:])


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"protocol": "majority", "n_grid": [40], "trials": 2, "seed": 1,
                               "params": {"g": 30}}))
    assert main(["simulate", "--config", str(cfg), "--trials", "3"]) == 0
    assert len(rows_of(capsys.readouterr().out)) == 4
    cfg.write_text("[1, 2]")
    assert main(["simulate", "--config", str(cfg)]) == 2


def test_param_values_reach_the_protocol(capsys):
    assert main(["simulate", "--protocol", "mult-fast", "--n", "200", "--param", "y=6", "--trials", "1"]) == 0
    rows = rows_of(capsys.readouterr().out)
    assert ["rounds", "3"] in [r[-2:] for r in rows[1:]]


def test_scale_needs_three_sizes(capsys):
    assert main(["scale", "--protocol", "epidemic", "--n-grid", "10,20", "--trials", "2"]) == 2
    assert "InsufficientData" in capsys.readouterr().err


def test_scale_report(tmp_path, capsys):
    rep = tmp_path / "r.txt"
    args = ["scale", "--protocol", "epidemic", "--n-grid", "50,100,200", "--trials", "3",
            "--out", str(tmp_path / "s.csv"), "--report", str(rep)]
    assert main(args) == 0
    assert "slope" in rep.read_text()


def test_parse_check(tmp_path, capsys):
    assert main(["parse-check", str(PP / "le.pp"), "--pretty"]) == 0
    out = capsys.readouterr().out
    assert "ok, protocol le" in out and "states:" in out
    bad = tmp_path / "bad.pp"
    bad.write_text("protocol p\nmodel quantum\nstates: a\n")
    assert main(["parse-check", str(bad)]) == 1
    assert f"{bad}:2:" in capsys.readouterr().err
    assert main(["parse-check", str(tmp_path / "missing.pp")]) == 2


def test_verify_selected_criteria(capsys):
    assert main(["verify", "fast", "--only", "2,10"]) == 0
    out = capsys.readouterr().out
    assert "[PASS] criterion 2" in out and "[PASS] criterion 10" in out
    assert "2/2 criteria passed" in out


def test_destroyed_pivot_is_caught():
    runs = fast_median_runs({"fm_n": (10001,), "fm_trials": 1}, destroy_pivot=True)
    assert runs.violations[10001] > 0
    assert runs.correct[10001] == 0
