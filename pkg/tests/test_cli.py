import json
import subprocess
import sys

import pytest
from click.testing import CliRunner

from hiermet.agents.analysis import deterministic_analysis
from hiermet.canonical import canonical_bytes
from hiermet.cli import main, parse_style


@pytest.fixture
def cache_dir(tmp_path):
    return str(tmp_path / "cache")


def seed(runner, cache_dir):
    out = runner.invoke(main, ["fixture", "all", "--cache-dir", cache_dir])
    assert out.exit_code == 0, out.output
    return dict(line.split() for line in out.output.strip().splitlines())


def test_fixture_and_replay(cache_dir):
    runner = CliRunner()
    keys = seed(runner, cache_dir)
    assert set(keys) == {"cork", "manila", "chennai", "danang"}
    out = runner.invoke(main, ["report", "--replay", keys["cork"], "--provider", "rule", "--cache-dir", cache_dir])
    assert out.exit_code == 0, out.output
    report = json.loads(out.output)
    assert report["header"]["title"] == "Weather outlook for Cork, Ireland"
    assert "cooling_trend" in report["analysis"]["keywords"]


def test_replay_with_style_and_out_file(cache_dir, tmp_path):
    runner = CliRunner()
    keys = seed(runner, cache_dir)
    target = tmp_path / "r.json"
    out = runner.invoke(main, [
        "report", "--replay", keys["danang"], "--cache-dir", cache_dir,
        "--style", "tone=technical,domain=risk", "--out", str(target),
    ])
    assert out.exit_code == 0, out.output
    assert json.loads(target.read_bytes())["header"]["title"].endswith("(risk)")


def test_replay_identical_across_processes(cache_dir):
    keys = seed(CliRunner(), cache_dir)
    cmd = [sys.executable, "-m", "hiermet.cli", "report", "--replay", keys["chennai"], "--provider", "rule",
           "--cache-dir", cache_dir]
    outputs = {subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)}
    assert len(outputs) == 1


def test_horizon_too_long_exits_1(cache_dir):
    out = CliRunner().invoke(main, ["report", "--lat", "51.9", "--lon", "-8.5", "--hours", "264", "--cache-dir", cache_dir])
    assert out.exit_code == 1
    assert "beyond 10-day support" in out.output


def test_unknown_replay_key(cache_dir):
    out = CliRunner().invoke(main, ["report", "--replay", "0" * 64, "--cache-dir", cache_dir])
    assert out.exit_code == 1


def test_missing_coordinates_is_usage_error(cache_dir):
    out = CliRunner().invoke(main, ["report", "--cache-dir", cache_dir])
    assert out.exit_code == 2


def write(path, obj):
    path.write_bytes(canonical_bytes(obj))
    return str(path)


def test_validate_command(tmp_path, case_contexts):
    ctx = case_contexts["cork"]
    ctx_path = write(tmp_path / "ctx.json", ctx)
    good = write(tmp_path / "good.json", deterministic_analysis(ctx))
    runner = CliRunner()
    out = runner.invoke(main, ["validate", "--context", ctx_path, "--analysis", good])
    assert out.exit_code == 0, out.output
    assert json.loads(out.output)["overall"] == "pass"

    wrong = deterministic_analysis(ctx).to_dict()
    wrong["keywords"][0] = "heavy_rain"
    out = runner.invoke(main, ["validate", "--context", ctx_path, "--analysis", write(tmp_path / "w.json", wrong)])
    assert out.exit_code == 2
    assert json.loads(out.output)["overall"] == "fail"

    short = {**wrong, "keywords": wrong["keywords"][:2]}
    out = runner.invoke(main, ["validate", "--context", ctx_path, "--analysis", write(tmp_path / "s.json", short)])
    assert out.exit_code == 2


def test_validate_rejects_bad_context(tmp_path, case_contexts):
    data = json.loads(canonical_bytes(case_contexts["cork"]))
    data["horizon_h"] = 72  # hierarchical below five days must carry hourly rows
    out = CliRunner().invoke(main, [
        "validate", "--context", write(tmp_path / "c.json", data),
        "--analysis", write(tmp_path / "a.json", deterministic_analysis(case_contexts["cork"])),
    ])
    assert out.exit_code == 1
    assert "hourly" in out.output


def test_parse_style():
    assert parse_style("tone=public, length=brief").to_dict() == {
        "tone": "public", "length": "brief", "domain": "general"
    }
    import click

    for bad in ("tone", "mood=happy", "tone=loud"):
        with pytest.raises(click.BadParameter):
            parse_style(bad)


def test_bad_config_file(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("retry:\n  attempts: 0\n")
    out = CliRunner().invoke(main, ["fixture", "cork", "--config", str(cfg)])
    assert out.exit_code == 1
    assert "retry.attempts" in out.output
