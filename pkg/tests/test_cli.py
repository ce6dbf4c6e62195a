import csv
import json

import pytest

from dca.cli import main
from dca.experiment import ITEM_COLUMNS


def test_worked_example(capsys):
    assert main(["worked-example"]) == 0
    out = capsys.readouterr().out
    assert "per-output-weight-sum: csm=2.7795 semi=6.0 mat=-16.1025" in out
    assert "safe=6.0" in out


def test_derive_then_run_from_stream(tmp_path, capsys):
    stream = tmp_path / "signals.csv"
    assert main(["derive", "--out", str(stream)]) == 0
    assert len(stream.read_text().splitlines()) == 700

    out_raw, out_stream = tmp_path / "raw", tmp_path / "stream"
    assert main(["run", "--runs", "2", "--out", str(out_raw)]) == 0
    assert main(["run", "--runs", "2", "--signals", str(stream), "--out", str(out_stream)]) == 0
    for name in ("confusion.csv", "items_run001.csv", "items_run002.csv"):
        assert (out_raw / name).read_bytes() == (out_stream / name).read_bytes()


def test_flags_override_config(tmp_path):
    config = tmp_path / "c.toml"
    config.write_text('runs = 7\nordering = "as-given"\n[pool]\nrng_seed = 4\n')
    out = tmp_path / "out"
    args = ["run", "--config", str(config), "--runs", "1", "--seed", "8", "--fuzz", "0", "--out", str(out)]
    assert main(args) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["config"]["runs"] == 1
    assert summary["config"]["ordering"] == "as-given"
    assert summary["config"]["pool"]["rng_seed"] == 8
    assert summary["config"]["dc"]["fuzz_fraction"] == 0
    with open(out / "items_run001.csv") as fh:
        assert tuple(next(csv.reader(fh))) == ITEM_COLUMNS


def test_no_flush_still_succeeds(tmp_path):
    assert main(["run", "--runs", "1", "--no-flush", "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["runs"][0]["presentations"] < 6990


def test_bad_input_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.data"
    bad.write_text("1,2,3\n")
    assert main(["run", "--dataset", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert "line 1" in capsys.readouterr().err


def test_invariant_failure_exit_code(tmp_path, monkeypatch):
    import dca.cli

    monkeypatch.setattr(dca.cli, "conservation_failures", lambda cfg, r: ["forced"])
    assert main(["run", "--runs", "1", "--out", str(tmp_path)]) == 1


def test_requires_subcommand():
    with pytest.raises(SystemExit):
        main([])
