import json
import subprocess
import sys
from pathlib import Path

import pytest

from minflows.cli import main
from minflows.config import load_config
from minflows.errors import ConfigError

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(args, tmp_path):
    return main([*args, "--out", str(tmp_path), "--quiet"])


def records(path):
    return [json.loads(line) for line in path.read_text().splitlines()]


def test_blueprint_command(tmp_path):
    assert run(["blueprint", "-c", str(CONFIGS / "z_blueprint.toml")], tmp_path) == 0
    recs = records(tmp_path / "blueprint.jsonl")
    assert recs[0]["check"] == "config"
    assert any(r["check"] == "blueprint" and r["pass"] for r in recs)
    assert (tmp_path / "blueprint.txt").read_text().startswith("window A_2 = [-20, 20]")


def test_render_z2(tmp_path):
    assert run(["render", "-c", str(CONFIGS / "z2_blueprint.toml")], tmp_path) == 0
    assert (tmp_path / "blueprint.svg").read_text().startswith("<svg")


def test_render_free_group_is_config_error(tmp_path):
    assert run(["render", "-c", str(CONFIGS / "f2_blueprint.toml")], tmp_path) == 2


def test_failing_suite_exits_one(tmp_path):
    args = ["subshift", "-c", str(CONFIGS / "desk_z.toml"), "--trials", "10", "--part-colors", "3"]
    assert run(args, tmp_path) == 1


def test_zero_trials_warns(tmp_path):
    assert run(["subshift", "-c", str(CONFIGS / "desk_z.toml"), "--trials", "0"], tmp_path) == 0
    recs = records(tmp_path / "subshift.jsonl")
    assert any("vacuous" in " ".join(r.get("notes", [])) for r in recs)


def test_bad_config_exits_two(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("[blueprint]\nradii = [1, -2]\n")
    assert run(["blueprint", "-c", str(bad)], tmp_path) == 2
    bad.write_text("not = [toml")
    assert run(["blueprint", "-c", str(bad)], tmp_path) == 2


def test_size_condition_exits_two(tmp_path, capsys):
    cfg = tmp_path / "small.toml"
    cfg.write_text("[blueprint]\nradii = [0, 1, 2]\nheight = 2\n[construct]\nstages = 2\n")
    assert main(["construct", "-c", str(cfg), "--out", str(tmp_path)]) == 2
    assert "needs r >=" in capsys.readouterr().err


def test_env_out_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("MINFLOWS_OUT", str(tmp_path / "env"))
    assert load_config(None).out_dir == str(tmp_path / "env")
    assert load_config(None, out_dir="x").out_dir == "x"
    with pytest.raises(ConfigError):
        load_config(None, trials=-1)


def test_timings_file_kept_separate(tmp_path):
    assert main(["blueprint", "-c", str(CONFIGS / "z_blueprint.toml"), "--out", str(tmp_path), "--timings", "-q"]) == 0
    assert all(r["millis"] is None for r in records(tmp_path / "blueprint.jsonl"))
    timed = [r for r in records(tmp_path / "timings.jsonl") if r["check"] == "blueprint"]
    assert timed and isinstance(timed[0]["millis"], float)


def test_console_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "minflows.cli", "blueprint", "-c", str(CONFIGS / "z_blueprint.toml"), "--out", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert "0 failed" in out.stdout
