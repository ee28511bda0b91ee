"""Structural and semantic validation of contexts and analyses.

Raw JSON payloads are first checked against the shipped JSON Schema
documents; typed objects are then checked for the cross-field invariants a
schema cannot express (hourly grid, mode/table combinations, aggregate
ordering). Violations are returned as data, never raised.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timedelta
from functools import lru_cache
from importlib import resources
from typing import Any, Iterable, Mapping

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from hiermet.model import (
    CLIMATOLOGY_SOURCES,
    MODES,
    SIGNAL_PATTERNS,
    SIGNAL_VARIABLES,
    WARNING_KINDS,
    AnalysisResult,
    ForecastContext,
    HourlyRecord,
    WindowAggregate,
    WindowRef,
)

SHORT_RANGE_LIMIT_H = 120  # H < 5 days keeps the hourly table in hierarchical mode
MAX_HORIZON_H = 240
MAX_UTC_OFFSET_S = 14 * 3600
DEW_POINT_SLACK_C = 0.5

SCHEMA_NAMES = ("forecast_context", "analysis_result", "report", "coordinate_request")


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def to_dict(self) -> dict[str, str]:
        return {"path": self.path, "message": self.message}


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict[str, Any]:
    text = resources.files("hiermet.schemas").joinpath(f"{name}.schema.json").read_text("utf-8")
    return json.loads(text)


@lru_cache(maxsize=None)
def _validator(name: str) -> Draft202012Validator:
    registry = Registry().with_resources(
        (load_schema(n)["$id"], Resource.from_contents(load_schema(n))) for n in SCHEMA_NAMES
    )
    return Draft202012Validator(load_schema(name), registry=registry)


def _json_path(parts: Iterable[Any]) -> str:
    out = ""
    for part in parts:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out or "$"


def schema_violations(name: str, payload: Any) -> list[Violation]:
    errors = _validator(name).iter_errors(payload)
    found = [Violation(_json_path(e.absolute_path), e.message) for e in errors]
    return sorted(found, key=lambda v: (v.path, v.message))


# -- context ------------------------------------------------------------------


def _check_hourly(rows: tuple[HourlyRecord, ...], out: list[Violation]) -> None:
    prev: datetime | None = None
    for i, rec in enumerate(rows):
        p = f"hourly[{i}]"
        if not 0.0 <= rec.rh_pct <= 100.0:
            out.append(Violation(f"{p}.rh_pct", f"relative humidity {rec.rh_pct} outside [0, 100]"))
        if not 0.0 <= rec.wind_dir_deg < 360.0:
            out.append(Violation(f"{p}.wind_dir_deg", f"wind direction {rec.wind_dir_deg} outside [0, 360)"))
        if rec.precip_mm < 0:
            out.append(Violation(f"{p}.precip_mm", f"negative precipitation {rec.precip_mm}"))
        if rec.wind_ms < 0:
            out.append(Violation(f"{p}.wind_ms", f"negative wind speed {rec.wind_ms}"))
        if rec.gust_ms is not None and rec.gust_ms < 0:
            out.append(Violation(f"{p}.gust_ms", f"negative gust {rec.gust_ms}"))
        if rec.visibility_m is not None and rec.visibility_m < 0:
            out.append(Violation(f"{p}.visibility_m", f"negative visibility {rec.visibility_m}"))
        if rec.dew_point_c > rec.t_c + DEW_POINT_SLACK_C:
            out.append(
                Violation(f"{p}.dew_point_c", f"dew point {rec.dew_point_c} exceeds temperature {rec.t_c} + 0.5")
            )
        if prev is not None and rec.ts_utc - prev != timedelta(hours=1):
            out.append(
                Violation(f"{p}.ts_utc", f"non-contiguous hourly grid: {rec.ts_utc - prev} after previous record")
            )
        prev = rec.ts_utc


def _check_windows(name: str, rows: tuple[WindowAggregate, ...], width: int, out: list[Violation]) -> None:
    prev_end: datetime | None = None
    for i, w in enumerate(rows):
        p = f"{name}[{i}]"
        if w.window_len_h != width:
            out.append(Violation(f"{p}.window_len_h", f"expected {width} h windows, got {w.window_len_h}"))
        if not 1 <= w.n_hours <= w.window_len_h:
            out.append(Violation(f"{p}.n_hours", f"{w.n_hours} hours do not fit a {w.window_len_h} h window"))
        if not w.t_min_c <= w.t_mean_c <= w.t_max_c:
            out.append(Violation(f"{p}.t_mean_c", "requires t_min_c <= t_mean_c <= t_max_c"))
        if w.precip_sum_mm < 0:
            out.append(Violation(f"{p}.precip_sum_mm", f"negative precipitation sum {w.precip_sum_mm}"))
        if not 0.0 <= w.rh_mean_pct <= 100.0:
            out.append(Violation(f"{p}.rh_mean_pct", f"relative humidity {w.rh_mean_pct} outside [0, 100]"))
        if w.window_len_h == 24 and w.wind_dir_mean_deg is not None:
            out.append(Violation(f"{p}.wind_dir_mean_deg", "daily windows carry no mean wind direction"))
        if w.wind_dir_mean_deg is not None and not 0.0 <= w.wind_dir_mean_deg < 360.0:
            out.append(Violation(f"{p}.wind_dir_mean_deg", f"direction {w.wind_dir_mean_deg} outside [0, 360)"))
        if prev_end is not None and w.window_start_utc < prev_end:
            out.append(Violation(f"{p}.window_start_utc", "windows overlap or are out of order"))
        prev_end = w.window_end_utc


def validate_context(ctx: ForecastContext | Mapping[str, Any]) -> list[Violation]:
    """Every invariant violation of a context; an empty list means valid.

    A mapping is checked against the JSON Schema first and, when that
    passes, converted and checked semantically. The result is deterministic
    and order-stable.
    """
    if not isinstance(ctx, ForecastContext):
        found = schema_violations("forecast_context", ctx)
        if found:
            return found
        ctx = ForecastContext.from_dict(ctx)

    out: list[Violation] = []
    loc = ctx.location
    if ctx.mode not in MODES:
        out.append(Violation("mode", f"unknown mode {ctx.mode!r}"))
    if not -90.0 <= loc.latitude <= 90.0:
        out.append(Violation("location.latitude", f"latitude {loc.latitude} outside [-90, 90]"))
    if not -180.0 <= loc.longitude <= 180.0:
        out.append(Violation("location.longitude", f"longitude {loc.longitude} outside [-180, 180]"))
    if abs(loc.utc_offset_s) > MAX_UTC_OFFSET_S:
        out.append(Violation("location.utc_offset_s", f"UTC offset {loc.utc_offset_s} s beyond +/-14 h"))
    if not 1 <= ctx.horizon_h <= MAX_HORIZON_H:
        out.append(Violation("horizon_h", f"horizon {ctx.horizon_h} h outside [1, 240]"))

    if ctx.mode == "baseline":
        if ctx.hourly is None:
            out.append(Violation("hourly", "baseline context requires the hourly table"))
        if ctx.daily is not None:
            out.append(Violation("daily", "baseline context must not carry a daily table"))
        if ctx.six_hour is not None:
            out.append(Violation("six_hour", "baseline context must not carry a 6-hour table"))
    elif ctx.mode == "hierarchical":
        if not ctx.daily:
            out.append(Violation("daily", "hierarchical context requires the daily table"))
        if not ctx.six_hour:
            out.append(Violation("six_hour", "hierarchical context requires the 6-hour table"))
        if ctx.horizon_h < SHORT_RANGE_LIMIT_H and ctx.hourly is None:
            out.append(Violation("hourly", "hourly must be present for H<5 days"))
        if ctx.horizon_h >= SHORT_RANGE_LIMIT_H and ctx.hourly is not None:
            out.append(Violation("hourly", "hourly must be absent for H∈[5,10] days"))

    if ctx.hourly is not None:
        if not ctx.hourly:
            out.append(Violation("hourly", "hourly table is empty"))
        if len(ctx.hourly) > ctx.horizon_h:
            out.append(Violation("hourly", f"{len(ctx.hourly)} rows exceed the {ctx.horizon_h} h horizon"))
        _check_hourly(ctx.hourly, out)
    if ctx.daily is not None:
        _check_windows("daily", ctx.daily, 24, out)
    if ctx.six_hour is not None:
        _check_windows("six_hour", ctx.six_hour, 6, out)

    clim = ctx.climatology
    if clim is not None:
        if clim.source not in CLIMATOLOGY_SOURCES:
            out.append(Violation("climatology.source", f"unknown climatology source {clim.source!r}"))
        months = sorted(m.month for m in clim.months)
        if months != list(range(1, 13)):
            out.append(Violation("climatology.months", "all 12 months must be present exactly once"))
        for i, m in enumerate(clim.months):
            if m.precip_total_mm < 0:
                out.append(Violation(f"climatology.months[{i}].precip_total_mm", "negative precipitation total"))
            if m.t_min_c > m.t_max_c:
                out.append(Violation(f"climatology.months[{i}].t_min_c", "t_min_c exceeds t_max_c"))
    return out


# -- analysis -----------------------------------------------------------------


def context_span(ctx: ForecastContext) -> tuple[datetime, datetime] | None:
    """First instant and end of the data covered by the context tables."""
    starts: list[datetime] = []
    ends: list[datetime] = []
    for table in (ctx.daily, ctx.six_hour):
        if table:
            starts.append(table[0].window_start_utc)
            ends.append(table[-1].window_end_utc)
    if ctx.hourly:
        starts.append(ctx.hourly[0].ts_utc)
        ends.append(ctx.hourly[-1].ts_utc + timedelta(hours=1))
    if not starts:
        return None
    return min(starts), max(ends)


def _ref_inside(ref: WindowRef, span: tuple[datetime, datetime]) -> bool:
    return span[0] <= ref.start_utc < span[1]


def validate_analysis(
    analysis: AnalysisResult | Mapping[str, Any],
    ctx: ForecastContext | None = None,
    vocabulary: Iterable[str] | None = None,
) -> list[Violation]:
    from hiermet.keywords import VOCABULARY

    vocab = set(VOCABULARY if vocabulary is None else vocabulary)
    if not isinstance(analysis, AnalysisResult):
        if not isinstance(analysis, Mapping):
            return [Violation("$", "analysis must be a JSON object")]
        # Count and vocabulary rules are reported below with stable messages.
        found = [
            v for v in schema_violations("analysis_result", analysis) if not v.path.startswith("keywords")
        ]
        keywords = analysis.get("keywords")
        if not isinstance(keywords, list) or not all(isinstance(k, str) for k in keywords):
            found.append(Violation("keywords", "keywords must be a list of strings"))
        if found:
            return found
        analysis = AnalysisResult.from_dict(analysis)

    out: list[Violation] = []
    if not 3 <= len(analysis.keywords) <= 5:
        out.append(Violation("keywords", f"keyword count out of range: {len(analysis.keywords)} not in [3, 5]"))
    for i, kw in enumerate(analysis.keywords):
        if kw not in vocab:
            out.append(Violation(f"keywords[{i}]", f"keyword {kw!r} outside the controlled vocabulary"))
    if len(set(analysis.keywords)) != len(analysis.keywords):
        out.append(Violation("keywords", "duplicate keywords"))
    if not analysis.proof:
        out.append(Violation("proof", "proof must contain at least one entry"))
    if not analysis.summary.strip():
        out.append(Violation("summary", "summary is empty"))
    span = context_span(ctx) if ctx is not None else None
    for i, entry in enumerate(analysis.proof):
        if not entry.signals:
            out.append(Violation(f"proof[{i}].signals", "proof entry has no signals"))
        for j, sig in enumerate(entry.signals):
            p = f"proof[{i}].signals[{j}]"
            if sig.variable not in SIGNAL_VARIABLES:
                out.append(Violation(f"{p}.variable", f"unknown variable {sig.variable!r}"))
            if sig.pattern not in SIGNAL_PATTERNS:
                out.append(Violation(f"{p}.pattern", f"unknown pattern {sig.pattern!r}"))
            if span is not None and not _ref_inside(sig.window_ref, span):
                out.append(Violation(f"{p}.window_ref", "window reference lies outside the context horizon"))
    for i, warning in enumerate(analysis.warnings):
        if warning.kind not in WARNING_KINDS:
            out.append(Violation(f"warnings[{i}].kind", f"unknown warning kind {warning.kind!r}"))
        if span is not None and not _ref_inside(warning.evidence_ref, span):
            out.append(Violation(f"warnings[{i}].evidence_ref", "evidence reference lies outside the context horizon"))
    return out
