"""Command line: offline reports, cache replay, standalone validation, fixtures and the HTTP service."""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from hiermet.agents.meteorologist import run_meteorologist
from hiermet.agents.writer import StylePreferences, run_writer
from hiermet.cache import FileCache
from hiermet.canonical import canonical_bytes, pretty
from hiermet.config import ServiceConfig, load_config
from hiermet.context import select_mode
from hiermet.errors import ConfigError, HiermetError
from hiermet.model import AnalysisResult, ForecastContext
from hiermet.schema import validate_analysis, validate_context
from hiermet.validator import validate


def _config(path: str | None, cache_dir: str | None = None, provider: str | None = None) -> ServiceConfig:
    try:
        config = load_config(path)
    except ConfigError as exc:
        for message in exc.messages:
            click.echo(f"config error: {message}", err=True)
        raise SystemExit(1) from exc
    updates = {}
    if cache_dir:
        updates["cache_dir"] = cache_dir
    if provider:
        updates["provider"] = provider
    return config.model_copy(update=updates)


def parse_style(text: str | None) -> StylePreferences:
    """``tone=public,length=brief`` style flags."""
    if not text:
        return StylePreferences()
    pairs = {}
    for item in text.split(","):
        name, sep, value = item.partition("=")
        if not sep:
            raise click.BadParameter(f"expected key=value, got {item!r}", param_hint="--style")
        pairs[name.strip()] = value.strip()
    unknown = set(pairs) - {"tone", "length", "domain"}
    if unknown:
        raise click.BadParameter(f"unknown style key(s): {', '.join(sorted(unknown))}", param_hint="--style")
    try:
        return StylePreferences.from_dict(pairs)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--style") from exc


def _write(out: str | None, data: bytes) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data + b"\n")


@click.group()
@click.option("-v", "--verbose", count=True, help="Increase log verbosity.")
def main(verbose: int) -> None:
    """Hierarchical weather-context analysis and reporting."""
    level = logging.WARNING - 10 * min(verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.option("--lat", type=float)
@click.option("--lon", type=float)
@click.option("--hours", type=int, default=120, show_default=True)
@click.option("--mode", type=click.Choice(["auto", "baseline", "hierarchical"]), default="auto", show_default=True)
@click.option("--provider", type=click.Choice(["rule", "remote"]), default=None)
@click.option("--style", "style_text", default=None, help="e.g. tone=public,length=brief,domain=energy")
@click.option("--cache-dir", type=click.Path(file_okay=False), default=None)
@click.option("--replay", "replay_key", default=None, help="Cache key to replay without network access.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
def report(lat, lon, hours, mode, provider, style_text, cache_dir, replay_key, out, config_path) -> None:
    """Build (or replay) a context and write the final report JSON."""
    from hiermet.api import make_provider
    from hiermet.pipeline import assemble_context

    style = parse_style(style_text)
    config = _config(config_path, cache_dir, provider)
    cache = FileCache(config.cache_dir)
    try:
        agent = make_provider(config)
        if replay_key:
            entry = cache.get(replay_key)
            if entry is None:
                raise HiermetError(f"no cache entry for key {replay_key}")
            ctx = entry.context
        else:
            select_mode(hours, mode)
            if lat is None or lon is None:
                raise click.UsageError("--lat and --lon are required unless --replay is given")
            ctx = assemble_context(lat, lon, hours, mode, config, cache).context
        analysis = run_meteorologist(ctx, agent, thresholds=config.predicates())
        result, statuses = run_writer(analysis, ctx, style, agent)
    except (HiermetError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(1) from exc
    for s in statuses:
        if s.outcome != "ok":
            click.echo(f"{s.source}: {s.outcome} ({s.degradation_code})", err=True)
    _write(out, canonical_bytes(result))


def _load_json(path: str) -> object:
    try:
        return json.loads(Path(path).read_text("utf-8"))
    except (OSError, ValueError) as exc:
        raise click.BadParameter(f"{path}: {exc}") from exc


@main.command("validate")
@click.option("--context", "context_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--analysis", "analysis_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
def validate_cmd(context_path, analysis_path, config_path) -> None:
    """Check an analysis against a context; exit 2 when the verdict is fail."""
    config = _config(config_path)
    raw_ctx = _load_json(context_path)
    problems = validate_context(raw_ctx)
    if problems:
        for v in problems:
            click.echo(f"context {v.path}: {v.message}", err=True)
        raise SystemExit(1)
    ctx = ForecastContext.from_dict(raw_ctx)
    raw_analysis = _load_json(analysis_path)
    schema_problems = validate_analysis(raw_analysis, ctx)
    if schema_problems:
        for v in schema_problems:
            click.echo(f"analysis {v.path}: {v.message}", err=True)
        raise SystemExit(2)
    verdict = validate(AnalysisResult.from_dict(raw_analysis), ctx, config.predicates())
    click.echo(pretty(verdict))
    raise SystemExit(2 if verdict.overall == "fail" else 0)


@main.command()
@click.argument("case", type=click.Choice(["cork", "manila", "chennai", "danang", "all"]))
@click.option("--cache-dir", type=click.Path(file_okay=False), default=None)
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
def fixture(case, cache_dir, config_path) -> None:
    """Seed the cache with a synthetic October case; prints the cache key."""
    from hiermet.cases import CASES, seed_case

    config = _config(config_path, cache_dir)
    cache = FileCache(config.cache_dir)
    for name in CASES if case == "all" else [case]:
        click.echo(f"{name} {seed_case(cache, name, config)}")


@main.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
def serve(config_path, host, port) -> None:
    """Run the HTTP service."""
    import uvicorn

    from hiermet.api import create_app

    config = _config(config_path)
    uvicorn.run(create_app(config), host=host or config.host, port=port or config.port)


if __name__ == "__main__":
    main()
