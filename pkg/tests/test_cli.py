"""CLI behavior: emission formats, exit codes, env defaults, override flags."""

import json
import shutil
import subprocess

import pytest

from treegrowth.cli import main
from treegrowth.graphs import Graph


def _expt_config(tmp_path, **overrides):
    doc = {
        "version": 1,
        "family": {"kind": "grid", "params": {"d": 2, "k": 3}},
        "s_policy": "first-vertex",
        "process": "fpp",
        "trials": 12,
        "master_seed": 7,
        "metrics": ["height", "cover_time"],
    }
    doc.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc))
    return path


def test_gen_cube_to_stdout(capsys):
    assert main(["gen", "--family", "grid", "--d", "3", "--k", "1"]) == 0
    text = capsys.readouterr().out
    g = Graph.from_text(text)
    assert g.n == 8 and g.m == 12


def test_gen_writes_files(tmp_path, capsys):
    code = main(
        ["gen", "--family", "complete", "--n", "5", "--out", str(tmp_path / "k5")]
    )
    assert code == 0
    g = Graph.from_text((tmp_path / "k5" / "graph.txt").read_text())
    assert g.n == 5 and g.m == 10
    meta = json.loads((tmp_path / "k5" / "meta.json").read_text())
    assert meta["kind"] == "complete"
    assert meta["declared_max_degree"] == 4


def test_gen_respects_env_outdir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("TREEGROWTH_OUTDIR", str(tmp_path / "envout"))
    assert main(["gen", "--family", "complete", "--n", "3"]) == 0
    assert (tmp_path / "envout" / "graph.txt").exists()


def test_gen_plan_does_not_build(capsys):
    code = main(
        ["gen", "--family", "planar_lower_G", "--max-degree", "8",
         "--diameter", "5000000", "--plan"]
    )
    assert code == 0
    plan = json.loads(capsys.readouterr().out)
    assert plan["n_vertices"] > 1 << 20  # far past the build budget, plan is fine


def test_usage_errors_exit_two(capsys):
    assert main(["gen", "--family", "glued_G", "--L", "3", "--delta", "1", "--a", "8"]) == 2
    assert main(["expt", "--config", "/nonexistent/config.json"]) == 2
    assert main(["gen", "--family", "grid", "--d", "9", "--k", "9"]) == 2  # budget


def test_grow_and_fpp_json(capsys):
    assert main(["grow", "--family", "grid", "--d", "1", "--k", "4", "--seed", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["process"] == "discrete" and doc["height"] == 4
    assert main(["fpp", "--family", "complete", "--n", "4", "--seed", "7"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["hitting_times"][0] == 0.0
    assert doc["cover_time"] == max(doc["hitting_times"])
    assert len(doc["hitting_times"]) == 4


def test_fpp_seed_reproducible(capsys):
    argv = ["fpp", "--family", "complete", "--n", "6", "--seed", "11"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_count_csv(capsys):
    code = main(["count", "--family", "grid", "--d", "2", "--k", "1", "--max-length", "4"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "graph,s,length,exact,bound_kind,bound_value,pass"
    assert all(line.endswith(",true") for line in lines[1:])


def test_expt_runs_twice_byte_identical(tmp_path, capsys):
    config = _expt_config(tmp_path)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["expt", "--config", str(config), "--out", str(out_a)]) == 0
    assert main(["expt", "--config", str(config), "--out", str(out_b),
                 "--workers", "4"]) == 0
    for name in ("spec.json", "records.jsonl", "summary.csv", "verdicts.csv",
                 "events.csv"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
    records = (out_a / "records.jsonl").read_text().splitlines()
    assert len(records) == 12


def test_expt_flag_overrides(tmp_path, capsys):
    config = _expt_config(tmp_path)
    out = tmp_path / "short"
    assert main(["expt", "--config", str(config), "--out", str(out),
                 "--trials", "3", "--seed", "9"]) == 0
    records = [json.loads(line) for line in
               (out / "records.jsonl").read_text().splitlines()]
    assert len(records) == 3
    spec = json.loads((out / "spec.json").read_text())
    assert spec["master_seed"] == 9 and spec["trials"] == 3
    assert "workers" not in spec


def test_console_script_installed():
    exe = shutil.which("treegrowth")
    if exe is None:
        pytest.skip("console script not on PATH")
    out = subprocess.run(
        [exe, "gen", "--family", "complete", "--n", "4"],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.startswith("4 6\n")
