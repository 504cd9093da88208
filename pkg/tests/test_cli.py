import csv
import json
import subprocess
import sys

import pytest

from percolab import cli
from percolab.montecarlo import InvariantViolation

HEADER = "statistic,n,N,estimate,ci_lo,ci_hi,samples,accepted,seed"


def _config(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_missing_config_exits_2(tmp_path, capsys):
    out = tmp_path / "out"
    assert cli.main(["sample", "--config", str(tmp_path / "nope.toml"), "--out", str(out)]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["exit_code"] == 2 and err["error"] == "ConfigError"


@pytest.mark.parametrize("text", [
    "[experiment]\nsamplez = 3\n",
    "[nonsense]\n",
    "[experiment]\nsamples = 'many'\n",
    "[experiment]\np = 2.0\n",
    "[rsw]\nk = 5\n",
    "not toml = = =\n",
])
def test_bad_config_exits_2(tmp_path, text):
    assert cli.main(["sample", "--config", str(_config(tmp_path, text)), "--out", str(tmp_path / "o")]) == 2


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit) as info:
        cli.main(["sample", "--frobnicate"])
    assert info.value.code == 2


def test_sample_writes_manifest_results_and_samples(tmp_path):
    out = tmp_path / "s"
    cfg = _config(tmp_path, "[sample]\nn = 4\ncount = 5\n")
    assert cli.main(["sample", "--config", str(cfg), "--out", str(out), "--workers", "1"]) == 0
    man = json.loads((out / "manifest.json").read_text())
    assert man["status"] == "ok" and man["command"] == "sample"
    assert man["config"]["sample"] == {"n": 4, "count": 5}
    assert (out / "results.csv").read_text().splitlines()[0] == HEADER
    lines = (out / "samples.jsonl").read_text().splitlines()
    assert len(lines) == 5
    assert {"n", "index", "seed", "connected", "config"} <= set(json.loads(lines[0]))


def test_chemdist_row_count(tmp_path):
    out = tmp_path / "c"
    cfg = _config(tmp_path, "[experiment]\nn_grid = [8, 16]\nsamples = 100\n")
    assert cli.main(["chemdist", "--config", str(cfg), "--out", str(out), "--workers", "1"]) == 0
    rows = _rows(out / "results.csv")
    by_stat = {}
    for r in rows:
        by_stat.setdefault(r["statistic"], []).append(int(r["n"]))
    assert set(by_stat) == {"S_n", "gamma_length", "s_length", "one_arm", "pi3"}
    assert all(sorted(ns) == [8, 16] for ns in by_stat.values())


def test_results_identical_across_workers(tmp_path):
    cfg = _config(tmp_path, "[experiment]\nn_grid = [8, 12]\nsamples = 40\nseed = 5\n")
    for w in (1, 2):
        assert cli.main(["chemdist", "--config", str(cfg), "--out", str(tmp_path / f"w{w}"), "--workers", str(w)]) == 0
    assert (tmp_path / "w1" / "results.csv").read_bytes() == (tmp_path / "w2" / "results.csv").read_bytes()
    assert (tmp_path / "w1" / "samples.jsonl").read_bytes() == (tmp_path / "w2" / "samples.jsonl").read_bytes()


def test_seed_flag_overrides_config(tmp_path):
    cfg = _config(tmp_path, "[experiment]\nseed = 1\n[sample]\nn = 3\ncount = 2\n")
    assert cli.main(["sample", "--config", str(cfg), "--out", str(tmp_path / "a"), "--seed", "7"]) == 0
    man = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert man["config"]["experiment"]["seed"] == 7


def test_manifest_written_before_a_crash(tmp_path, monkeypatch, capsys):
    def boom(rc, out, workers):
        raise InvariantViolation("chain broken")

    monkeypatch.setitem(cli.HANDLERS, "sample", boom)
    out = tmp_path / "crash"
    assert cli.main(["sample", "--out", str(out)]) == 4
    assert json.loads((out / "manifest.json").read_text())["status"] == "running"
    assert json.loads((out / "error.json").read_text())["message"] == "chain broken"


def test_unwritable_output_exits_3(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert cli.main(["sample", "--out", str(blocker / "sub")]) == 3


def test_oracle_subset(tmp_path, capsys):
    cfg = _config(tmp_path, "[oracle]\nsuites = ['first_closed_dual_path', 'find_shortcut']\n")
    out = tmp_path / "o"
    assert cli.main(["oracle", "--config", str(cfg), "--out", str(out)]) == 0
    rows = _rows(out / "results.csv")
    assert [r["statistic"] for r in rows] == ["oracle:first_closed_dual_path", "oracle:find_shortcut"]
    assert all(r["estimate"] == "1.0" for r in rows)
    assert capsys.readouterr().out.count("PASS") == 2
    bad = _config(tmp_path, "[oracle]\nsuites = ['nope']\n", "bad.toml")
    assert cli.main(["oracle", "--config", str(bad), "--out", str(out)]) == 2


def test_fit_reads_chemdist_output(tmp_path):
    src = tmp_path / "c"
    cfg = _config(tmp_path, "[experiment]\nn_grid = [8, 12, 16]\nsamples = 60\n")
    assert cli.main(["chemdist", "--config", str(cfg), "--out", str(src), "--workers", "1"]) == 0
    fit_cfg = _config(tmp_path, f"[fit]\ninput = '{src / 'results.csv'}'\n", "fit.toml")
    out = tmp_path / "f"
    assert cli.main(["fit", "--config", str(fit_cfg), "--out", str(out)]) == 0
    stats = {r["statistic"]: r for r in _rows(out / "results.csv")}
    assert {"slope:S_n", "slope:pi3", "slope:one_arm", "delta_hat"} <= set(stats)
    assert 0.5 < float(stats["slope:S_n"]["estimate"]) < 2.0
    same = _config(tmp_path, f"[fit]\ninput = '{out / 'results.csv'}'\n", "same.toml")
    assert cli.main(["fit", "--config", str(same), "--out", str(out)]) == 2


@pytest.mark.parametrize("command,text", [
    ("arm", "[experiment]\nsamples = 20\n[arm]\nouter = [4, 8]\n"),
    ("gamma", "[experiment]\nn_grid = [6]\nsamples = 20\nverify = true\n"),
    ("shortcut", "[experiment]\nn_grid = [32]\nsamples = 5\n"),
    ("rsw", "[experiment]\nsamples = 50\n[rsw]\nk = 1\nn_grid = [4, 8]\n"),
    ("compare", "[experiment]\nsamples = 100\n[compare]\nn = 16\ndistances = [4, 8]\narm_samples = 400\n"),
])
def test_other_subcommands_run(tmp_path, command, text):
    out = tmp_path / command
    assert cli.main([command, "--config", str(_config(tmp_path, text)), "--out", str(out), "--workers", "1"]) == 0
    assert (out / "results.csv").read_text().splitlines()[0] == HEADER
    assert json.loads((out / "manifest.json").read_text())["status"] == "ok"


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "percolab.cli", "sample", "--out", str(tmp_path / "x")],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "x" / "results.csv").exists()
