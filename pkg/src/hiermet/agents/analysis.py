"""Rule-based meteorologist: keywords, proof and warnings straight from the predicate table."""

from __future__ import annotations

from datetime import timedelta

from hiermet.errors import HiermetError
from hiermet.keywords import CONTEXTUAL, EXCLUSIVE, SEVERITY
from hiermet.model import AnalysisResult, ForecastContext, HazardWarning, ProofEntry, WindowAggregate, WindowRef
from hiermet.validator import (
    DEFAULT_PREDICATES,
    Aggregates,
    Evidence,
    PredicateThresholds,
    evaluate_all,
    expected_warnings,
)

MIN_KEYWORDS = 3
MAX_KEYWORDS = 5
MAX_SIGNALS_PER_ENTRY = 4

CLAIMS = {
    "cooling_trend": "Daytime maxima decline across the horizon ({detail}).",
    "warming_trend": "Daytime maxima rise across the horizon ({detail}).",
    "light_rain": "Precipitation stays light, with small daily totals ({detail}).",
    "heavy_rain": "At least one day carries a large precipitation total ({detail}).",
    "moist_conditions": "Air stays humid through the period ({detail}).",
    "dry_conditions": "Air stays dry through the period ({detail}).",
    "frontal_passage": "The 6-hour mean wind direction veers sharply alongside rain or strengthening ({detail}).",
    "autumn_transition": "Cooling during the autumn months points to the seasonal transition ({detail}).",
    "stable_conditions": "No heavy rain, strong wind or sharp wind shift appears in the tables ({detail}).",
    "unstable_airmass": "Repeated wind shifts or on/off showers mark an unsettled regime ({detail}).",
    "marine_influence": "The coastal setting shapes humidity and winds ({detail}).",
    "warm_anomaly": "Daytime maxima run above the monthly climatology ({detail}).",
    "cold_anomaly": "Daytime maxima run below the monthly climatology ({detail}).",
    "clear_sky": "Clear or partly cloudy hours dominate ({detail}).",
    "overcast": "Cloudy or wet hours dominate ({detail}).",
    "strong_wind": "Mean winds or gusts reach strong levels ({detail}).",
    "calm_wind": "Mean winds remain light in every 6-hour window ({detail}).",
    "fog_risk": "Fog or saturated, near-calm air is expected ({detail}).",
    "snow": "Snow hours appear in the forecast ({detail}).",
    "thunderstorm_risk": "Thunderstorm hours appear in the forecast ({detail}).",
}

COMPASS = ("N", "NNE", "NE", "ENE", "E", "ESE", "SE", "SSE", "S", "SSW", "SW", "WSW", "W", "WNW", "NW", "NNW")


def compass(deg: float) -> str:
    return COMPASS[int((deg % 360.0) / 22.5 + 0.5) % 16]


def select_keywords(evidence: dict[str, Evidence]) -> list[str]:
    """Fired keywords by severity (hard before contextual), padded with borderline ones."""
    chosen: list[str] = []

    def admissible(kw: str) -> bool:
        return kw not in chosen and EXCLUSIVE.get(kw) not in chosen

    hard = [k for k in SEVERITY if k not in CONTEXTUAL and evidence[k].fired]
    soft = [k for k in SEVERITY if k in CONTEXTUAL and evidence[k].fired]
    for kw in hard + soft:
        if len(chosen) < MAX_KEYWORDS and admissible(kw):
            chosen.append(kw)
    for kw in SEVERITY:
        if len(chosen) >= MIN_KEYWORDS:
            break
        if kw not in CONTEXTUAL and evidence[kw].borderline and admissible(kw):
            chosen.append(kw)
    if len(chosen) < MIN_KEYWORDS:
        raise HiermetError(f"only {len(chosen)} keyword(s) supported by the data: {chosen}")
    return chosen


def _local(agg: Aggregates, w: WindowAggregate):
    return w.window_start_utc + timedelta(seconds=agg.ctx.location.utc_offset_s)


def _day_line(agg: Aggregates, d: WindowAggregate) -> str:
    day = _local(agg, d).strftime("%a %d %b")
    return (
        f"{day}: {d.t_min_c:.1f} to {d.t_max_c:.1f} C, mean RH {d.rh_mean_pct:.0f} %, "
        f"precipitation {d.precip_sum_mm:.1f} mm, mean wind {d.wind_mean_ms:.1f} m/s"
        + (" (partial day)" if d.partial else "")
        + "."
    )


def _summary(agg: Aggregates, keywords: list[str], warnings: list[HazardWarning]) -> str:
    ctx = agg.ctx
    first, last = _local(agg, agg.daily[0]), _local(agg, agg.daily[-1])
    overview = (
        f"Outlook for {ctx.location.label} over {ctx.horizon_h} hours "
        f"({first:%d %b} to {last:%d %b}, {ctx.mode} context). "
        f"Dominant signals: {', '.join(k.replace('_', ' ') for k in keywords)}."
    )
    paragraphs = [overview, " ".join(_day_line(agg, d) for d in agg.daily)]
    dirs = [w for w in agg.six_hour if w.wind_dir_mean_deg is not None]
    if dirs:
        start, end = dirs[0].wind_dir_mean_deg, dirs[-1].wind_dir_mean_deg
        peak = max(agg.six_hour, key=lambda w: w.wind_mean_ms)
        paragraphs.append(
            f"Winds back or veer from {compass(start)} to {compass(end)}; the strongest 6-hour mean is "
            f"{peak.wind_mean_ms:.1f} m/s starting {_local(agg, peak):%d %b %H:%M} local time."
        )
    if warnings:
        paragraphs.append("Warnings: " + " ".join(w.text for w in warnings))
    return "\n\n".join(paragraphs)


def _warning_text(agg: Aggregates, kind: str, window: WindowAggregate, value: float, threshold: float) -> str:
    when = _local(agg, window)
    if kind == "heavy_rain":
        return (
            f"Daily precipitation of {value:.1f} mm on {when:%d %b} exceeds the {threshold:.1f} mm "
            f"climatology-scaled threshold; risk of localized flooding."
        )
    return (
        f"Wind reaches {value:.1f} m/s in the 6-hour window starting {when:%d %b %H:%M} local time, "
        f"above the {threshold:.1f} m/s warning level."
    )


def deterministic_analysis(
    ctx: ForecastContext, thresholds: PredicateThresholds = DEFAULT_PREDICATES
) -> AnalysisResult:
    """Analysis built only from the evidence predicates; identical input gives identical output."""
    agg = Aggregates.of(ctx)
    evidence = evaluate_all(agg, thresholds)
    keywords = select_keywords(evidence)
    proof = []
    for kw in keywords:
        ev = evidence[kw]
        claim = CLAIMS[kw].format(detail=ev.detail)
        if not ev.fired:
            claim = "Borderline: " + claim
        proof.append(ProofEntry(claim, ev.signals[:MAX_SIGNALS_PER_ENTRY]))
    warnings = [
        HazardWarning(e.kind, _warning_text(agg, e.kind, e.window, e.value, e.threshold), WindowRef.of(e.window))
        for e in expected_warnings(agg, ctx.climatology, thresholds)
    ]
    return AnalysisResult(
        summary=_summary(agg, keywords, warnings),
        proof=tuple(proof),
        keywords=tuple(keywords),
        warnings=tuple(warnings),
    )
