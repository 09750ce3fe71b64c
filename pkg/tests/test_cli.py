import json

import pytest

from syllab.cli import main


@pytest.fixture
def run(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)

    def _run(*argv):
        code = main(list(argv))
        out = capsys.readouterr()
        return code, out.out, out.err
    return _run


def test_oracle(run, tmp_path):
    code, out, _ = run("oracle")
    assert code == 0 and "27 valid / 37 NVC" in out
    assert (tmp_path / "out/oracle/valid-conclusions.csv").exists()
    manifest = json.loads((tmp_path / "out/oracle/manifest.json").read_text())
    assert manifest["command"] == "oracle" and "valid-conclusions.csv" in manifest["outputs"]
    assert "22 valid / 42 NVC" in run("oracle", "--no-import", "--out", "o2")[1]
    assert "EA1: {Oca}" in run("oracle", "--syllogism", "EA1", "--out", "o3")[1]


def test_simulate_reproducible_from_manifest(run, tmp_path):
    args = ("simulate", "--len", "3", "--systm2", "0.9", "--runs", "100", "--seed", "7", "--syllogism", "EA1", "AA1")
    assert run(*args, "--out", "a")[0] == 0
    assert run(*args, "--out", "b")[0] == 0
    assert (tmp_path / "a/profile.csv").read_bytes() == (tmp_path / "b/profile.csv").read_bytes()
    assert run("simulate", "--config", "a/manifest.json", "--out", "c")[0] == 0
    assert (tmp_path / "c/profile.csv").read_bytes() == (tmp_path / "a/profile.csv").read_bytes()


def test_sweep_pca_project(run, tmp_path):
    (tmp_path / "grid.json").write_text(json.dumps(
        {"len": [2.0, 4.0], "broad": [0.0, 0.6], "systm2": [0.0, 0.9], "weaken": [0.0, 0.9]}))
    code, out, _ = run("sweep", "--grid", "grid.json", "--runs", "20", "--out", "sw", "--jobs", "2")
    assert code == 0 and "16 of 16" in out
    assert len((tmp_path / "sw/sweep.csv").read_text().splitlines()) == 17
    code, out, _ = run("pca", "--sweep", "sw/sweep.csv", "--out", "pc")
    assert code == 0 and "4 components" in out
    pca = json.loads((tmp_path / "pc/pca.json").read_text())
    assert len(pca["components"]) == 4 and len(pca["components"][0]) == 216
    run("simulate", "--runs", "20", "--out", "sim")
    code, _, _ = run("pca", "--sweep", "sw/sweep.csv", "--control", "--project", "m=sim/profile.csv",
                     "--out", "pc2")
    assert code == 0
    lines = (tmp_path / "pc2/projections.csv").read_text().splitlines()
    assert lines[0] == "label,pc1,pc2,pc3,pc4,inside_range" and lines[1].startswith("m,")
    dropped = json.loads((tmp_path / "sw/dropped.json").read_text())
    assert dropped["completed"] == 16


def test_analyze_and_harness(run, tmp_path):
    code, _, _ = run("harness", "--mock", "--triples", "2", "--samples", "4", "--out", "h")
    assert code == 0
    manifest = json.loads((tmp_path / "h/manifest.json").read_text())
    assert manifest["config"]["temperature"] == 0.5 and manifest["config"]["max_tokens"] == 75
    assert run("harness", "--mock", "--out", "h0", "--syllogism", "AA1", "--triples", "1")[0] == 0
    assert json.loads((tmp_path / "h0/manifest.json").read_text())["config"]["samples"] == 30
    code, _, _ = run("harness", "--mock", "--method", "binary", "--triples", "1", "--out", "hb")
    assert code == 0
    answers = (tmp_path / "hb/items.csv").read_text()
    assert answers.count("\n") == 65
    run("simulate", "--runs", "30", "--out", "sim")
    code, out, _ = run("analyze", "sim=sim/profile.csv", "lm=h/lm_log.jsonl", "--out", "rep")
    assert code == 0 and "sim: accuracy" in out
    summary = json.loads((tmp_path / "rep/summary.json").read_text())
    assert summary["oracle_partition"] == {"valid": 27, "nvc": 37}
    assert "sim~oracle" in summary["analyses"]["correlation"]
    assert "sim~lm" in summary["analyses"]["residual_correlation"]


def test_errors(run, tmp_path):
    code, _, err = run("pca", "--sweep", "missing.csv")
    assert code != 0 and json.loads(err)["error"] == "FileNotFoundError"
    (tmp_path / "bad.json").write_text(json.dumps({"nope": 1}))
    code, _, err = run("oracle", "--config", "bad.json")
    assert code != 0 and "unknown config keys" in json.loads(err)["message"]
    run("oracle", "--out", "o")
    code, _, err = run("simulate", "--config", "o/manifest.json")
    assert code != 0 and "manifest is for 'oracle'" in err
    code, _, err = run("harness", "--triples", "1")
    assert code != 0
    code, _, err = run("simulate", "--systm2", "2")
    assert code != 0 and "systm2" in err
