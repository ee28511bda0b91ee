"""Keyword evidence predicates and the semantic validation layer.

Each vocabulary keyword has one predicate over the daily and 6-hour
aggregates. The rule-based meteorologist and the validator both read this
table, so a deterministic analysis is valid by construction, while any
other analysis (remote LLM, edited by hand) is checked against the same
rules.

A predicate can come out three ways: fired, borderline (fires only once
the thresholds are relaxed by the configured margins), or not fired.
"""

from __future__ import annotations

import calendar
import math
from dataclasses import dataclass, field
from datetime import timedelta
from typing import Callable, Iterable, Sequence

from hiermet.aggregation import (
    aggregate_daily,
    aggregate_six_hour,
    circular_distance_deg,
    circular_mean_deg,
    least_squares_slope,
)
from hiermet.keywords import CONTEXTUAL, SIGNATURES, VOCABULARY, check_keyword, strength
from hiermet.model import (
    AnalysisResult,
    ForecastContext,
    MonthlyClimatology,
    Signal,
    WindowAggregate,
    WindowRef,
)

CLEAR_CLASS = frozenset({"clear", "partly_cloudy"})
HARD_EVENT_KEYWORDS = ("heavy_rain", "strong_wind", "frontal_passage", "unstable_airmass", "thunderstorm_risk")


@dataclass(frozen=True)
class PredicateThresholds:
    cooling_slope_c_per_day: float = -0.5
    warming_slope_c_per_day: float = 0.5
    trend_margin_c_per_day: float = 0.5
    heavy_rain_daily_mm: float = 20.0
    light_rain_daily_max_mm: float = 10.0
    strong_wind_mean_ms: float = 8.0
    strong_gust_ms: float = 15.0
    calm_wind_mean_ms: float = 3.0
    wind_margin_ms: float = 2.5
    moist_rh_pct: float = 80.0
    dry_rh_pct: float = 40.0
    rh_margin_pct: float = 20.0
    frontal_shift_deg: float = 60.0
    frontal_wind_increase_ms: float = 2.0
    wet_window_mm: float = 0.0
    sky_fraction: float = 0.6
    sky_margin: float = 0.1
    anomaly_c: float = 1.0
    anomaly_margin_c: float = 2.0
    unstable_min_shifts: int = 2
    unstable_alternating_windows: int = 4
    fog_rh_pct: float = 95.0
    fog_wind_ms: float = 2.0
    heavy_rain_warning_mm: float = 30.0
    heavy_rain_warning_clim_factor: float = 3.0
    wind_warning_mean_ms: float = 10.0
    wind_warning_gust_ms: float = 17.0
    autumn_months_north: tuple[int, ...] = (9, 10, 11)
    autumn_months_south: tuple[int, ...] = (3, 4, 5)


DEFAULT_PREDICATES = PredicateThresholds()


@dataclass(frozen=True)
class Evidence:
    keyword: str
    fired: bool
    borderline: bool = False
    signals: tuple[Signal, ...] = ()
    detail: str = ""

    @property
    def strength(self) -> str:
        return strength(self.keyword)


@dataclass(frozen=True)
class Aggregates:
    """Daily and 6-hour tables of a context, computed on demand if absent."""

    ctx: ForecastContext
    daily: tuple[WindowAggregate, ...]
    six_hour: tuple[WindowAggregate, ...]

    @classmethod
    def of(cls, ctx: ForecastContext) -> Aggregates:
        daily, six = ctx.daily, ctx.six_hour
        if not daily or not six:
            if not ctx.hourly:
                raise ValueError("context has neither aggregates nor an hourly table")
            offset = ctx.location.utc_offset_s
            daily = daily or tuple(aggregate_daily(ctx.hourly, utc_offset_s=offset))
            six = six or tuple(aggregate_six_hour(ctx.hourly, utc_offset_s=offset))
        return cls(ctx, tuple(daily), tuple(six))

    @property
    def trend_days(self) -> tuple[WindowAggregate, ...]:
        full = tuple(d for d in self.daily if not d.partial)
        return full if len(full) >= 2 else self.daily

    def local_month(self, window: WindowAggregate) -> int:
        local = window.window_start_utc + timedelta(seconds=self.ctx.location.utc_offset_s)
        return local.month

    def category_hours(self) -> dict[str, int]:
        totals: dict[str, int] = {}
        for w in self.six_hour:
            for cat, n in w.categories.items():
                totals[cat] = totals.get(cat, 0) + n
        return totals


def _ref(w: WindowAggregate) -> WindowRef:
    return WindowRef.of(w)


def _sig(variable: str, w: WindowAggregate, pattern: str, value: float | None = None) -> Signal:
    return Signal(variable, _ref(w), pattern, None if value is None else round(value, 3))


def daily_tmax_slope(agg: Aggregates) -> float | None:
    days = agg.trend_days
    if len(days) < 2:
        return None
    t0 = days[0].window_start_utc
    xs = [(d.window_start_utc - t0).total_seconds() / 86400.0 for d in days]
    return least_squares_slope(xs, [d.t_max_c for d in days])


def direction_shifts(agg: Aggregates, th: PredicateThresholds) -> list[tuple[WindowAggregate, float]]:
    """Frontal-grade shifts between consecutive 6 h windows with a defined direction."""
    shifts = []
    prev: WindowAggregate | None = None
    for w in agg.six_hour:
        if w.wind_dir_mean_deg is None:
            continue
        if prev is not None:
            shift = circular_distance_deg(prev.wind_dir_mean_deg, w.wind_dir_mean_deg)
            strengthening = w.wind_mean_ms - prev.wind_mean_ms >= th.frontal_wind_increase_ms
            wet = max(prev.precip_sum_mm, w.precip_sum_mm) > th.wet_window_mm
            if shift >= th.frontal_shift_deg and (strengthening or wet):
                shifts.append((w, shift))
        prev = w
    return shifts


def longest_wet_dry_alternation(agg: Aggregates, th: PredicateThresholds) -> list[WindowAggregate]:
    best: list[WindowAggregate] = []
    run: list[WindowAggregate] = []
    for w in agg.six_hour:
        wet = w.precip_sum_mm > th.wet_window_mm
        if run and wet != (run[-1].precip_sum_mm > th.wet_window_mm):
            run.append(w)
        else:
            run = [w]
        if len(run) > len(best):
            best = list(run)
    return best


def horizon_mean_rh(agg: Aggregates) -> float:
    hours = sum(w.n_hours for w in agg.six_hour)
    return math.fsum(w.rh_mean_pct * w.n_hours for w in agg.six_hour) / hours


def tmax_anomalies(agg: Aggregates) -> list[tuple[WindowAggregate, float]]:
    clim = agg.ctx.climatology
    if clim is None:
        return []
    return [(d, d.t_max_c - clim.month(agg.local_month(d)).t_max_c) for d in agg.trend_days]


def sky_fraction(agg: Aggregates, clear: bool) -> tuple[float, WindowAggregate] | None:
    totals = agg.category_hours()
    n = sum(totals.values())
    if n == 0:
        return None
    in_class = sum(v for k, v in totals.items() if (k in CLEAR_CLASS) == clear)

    def count(w: WindowAggregate) -> int:
        return sum(v for k, v in w.categories.items() if (k in CLEAR_CLASS) == clear)

    return in_class / n, max(agg.six_hour, key=count)


# -- predicates ---------------------------------------------------------------

Predicate = Callable[[Aggregates, PredicateThresholds], Evidence]


def _trend(keyword: str, sign: int) -> Predicate:
    def predicate(agg: Aggregates, th: PredicateThresholds) -> Evidence:
        slope = daily_tmax_slope(agg)
        if slope is None:
            return Evidence(keyword, False, detail="fewer than two days")
        limit = th.cooling_slope_c_per_day if sign < 0 else th.warming_slope_c_per_day
        relaxed = limit - sign * th.trend_margin_c_per_day
        fired = slope * sign >= limit * sign
        border = not fired and slope * sign >= relaxed * sign
        days = agg.trend_days
        pattern = "trend_down" if sign < 0 else "trend_up"
        signals = (_sig("T", days[0], pattern, days[0].t_max_c), _sig("T", days[-1], pattern, days[-1].t_max_c))
        return Evidence(keyword, fired, border, signals if fired or border else (), f"daily t_max slope {slope:+.2f} C/day")

    return predicate


def _heavy_rain(agg: Aggregates, th: PredicateThresholds) -> Evidence:
    wet = [d for d in agg.daily if d.precip_sum_mm >= th.heavy_rain_daily_mm]
    peak = max(d.precip_sum_mm for d in agg.daily)
    return Evidence(
        "heavy_rain",
        bool(wet),
        signals=tuple(_sig("P", d, "exceedance", d.precip_sum_mm) for d in wet),
        detail=f"max daily precipitation {peak:.1f} mm",
    )


def _light_rain(agg: Aggregates, th: PredicateThresholds) -> Evidence:
    light = [d for d in agg.daily if 0 < d.precip_sum_mm <= th.light_rain_daily_max_mm]
    heavy = any(d.precip_sum_mm >= th.heavy_rain_daily_mm for d in agg.daily)
    fired = bool(light) and not heavy
    return Evidence(
        "light_rain",
        fired,
        signals=tuple(_sig("P", d, "persistence", d.precip_sum_mm) for d in light) if fired else (),
        detail=f"{len(light)} day(s) with 0-{th.light_rain_daily_max_mm:g} mm",
    )


def _strong_wind(agg: Aggregates, th: PredicateThresholds) -> Evidence:
    def hits(mean_limit: float, gust_limit: float) -> list[WindowAggregate]:
        return [
            w
            for w in agg.six_hour
            if w.wind_mean_ms >= mean_limit or (w.gust_max_ms is not None and w.gust_max_ms >= gust_limit)
        ]

    strict = hits(th.strong_wind_mean_ms, th.strong_gust_ms)
    relaxed = hits(th.strong_wind_mean_ms - th.wind_margin_ms, th.strong_gust_ms - th.wind_margin_ms)
    chosen = strict or relaxed
    peak = max(w.wind_mean_ms for w in agg.six_hour)
    return Evidence(
        "strong_wind",
        bool(strict),
        not strict and bool(relaxed),
        tuple(_sig("U", w, "exceedance", max(w.wind_mean_ms, w.gust_max_ms or 0.0)) for w in chosen),
        f"max 6 h mean wind {peak:.1f} m/s",
    )


def _calm_wind(agg: Aggregates, th: PredicateThresholds) -> Evidence:
    windiest = max(agg.six_hour, key=lambda w: w.wind_mean_ms)
    peak = windiest.wind_mean_ms
    fired = peak < th.calm_wind_mean_ms
    border = not fired and peak < th.calm_wind_mean_ms + th.wind_margin_ms
    signals = (_sig("U", windiest, "persistence", peak),) if fired or border else ()
    return Evidence("calm_wind", fired, border, signals, f"max 6 h mean wind {peak:.1f} m/s")


def _humidity(keyword: str, moist: bool) -> Predicate:
    def predicate(agg: Aggregates, th: PredicateThresholds) -> Evidence:
        rh = horizon_mean_rh(agg)
        if moist:
            fired = rh >= th.moist_rh_pct
            border = not fired and rh >= th.moist_rh_pct - th.rh_margin_pct
            ref = max(agg.six_hour, key=lambda w: w.rh_mean_pct)
        else:
            fired = rh <= th.dry_rh_pct
            border = not fired and rh <= th.dry_rh_pct + th.rh_margin_pct
            ref = min(agg.six_hour, key=lambda w: w.rh_mean_pct)
        signals = (_sig("RH", ref, "exceedance", rh),) if fired or border else ()
        return Evidence(keyword, fired, border, signals, f"horizon-mean RH {rh:.1f} %")

    return predicate


def _frontal_passage(agg: Aggregates, th: PredicateThresholds) -> Evidence:
    shifts = direction_shifts(agg, th)
    return Evidence(
        "frontal_passage",
        bool(shifts),
        signals=tuple(_sig("theta", w, "shift", s) for w, s in shifts),
        detail=f"{len(shifts)} direction shift(s) >= {th.frontal_shift_deg:g} deg",
    )


def _unstable_airmass(agg: Aggregates, th: PredicateThresholds) -> Evidence:
    shifts = direction_shifts(agg, th)
    run = longest_wet_dry_alternation(agg, th)
    signals: tuple[Signal, ...] = ()
    if len(shifts) >= th.unstable_min_shifts:
        signals = tuple(_sig("U", w, "shift", s) for w, s in shifts)
    elif len(run) >= th.unstable_alternating_windows:
        signals = tuple(_sig("P", w, "shift", w.precip_sum_mm) for w in run)
    return Evidence(
        "unstable_airmass",
        bool(signals),
        signals=signals,
        detail=f"{len(shifts)} frontal-grade shift(s); wet/dry alternation over {len(run)} window(s)",
    )


def _fog_risk(agg: Aggregates, th: PredicateThresholds) -> Evidence:
    foggy = [w for w in agg.six_hour if w.categories.get("fog", 0) > 0]
    saturated = [w for w in agg.six_hour if w.rh_mean_pct >= th.fog_rh_pct and w.wind_mean_ms < th.fog_wind_ms]
    signals = tuple(_sig("Vis", w, "exceedance", w.categories["fog"]) for w in foggy)
    signals += tuple(_sig("RH", w, "persistence", w.rh_mean_pct) for w in saturated)
    return Evidence(
        "fog_risk",
        bool(signals),
        signals=signals,
        detail=f"{len(foggy)} window(s) with fog hours, {len(saturated)} saturated calm window(s)",
    )


def _sky(keyword: str, clear: bool) -> Predicate:
    def predicate(agg: Aggregates, th: PredicateThresholds) -> Evidence:
        found = sky_fraction(agg, clear)
        if found is None:
            return Evidence(keyword, False, detail="no hourly categories available")
        frac, ref = found
        fired = frac >= th.sky_fraction
        border = not fired and frac >= th.sky_fraction - th.sky_margin
        signals = (_sig("Vis", ref, "persistence", frac),) if fired or border else ()
        return Evidence(keyword, fired, border, signals, f"{frac:.0%} of hours in class")

    return predicate


def _anomaly(keyword: str, sign: int) -> Predicate:
    def predicate(agg: Aggregates, th: PredicateThresholds) -> Evidence:
        diffs = tmax_anomalies(agg)
        if not diffs:
            return Evidence(keyword, False, detail="no climatology")
        mean = math.fsum(d for _, d in diffs) / len(diffs)
        fired = mean * sign >= th.anomaly_c
        border = not fired and mean * sign > th.anomaly_c - th.anomaly_margin_c
        ref, diff = max(diffs, key=lambda p: p[1] * sign)
        signals = (_sig("T", ref, "exceedance", diff),) if fired or border else ()
        return Evidence(keyword, fired, border, signals, f"mean t_max anomaly {mean:+.2f} C")

    return predicate


def _category(keyword: str, category: str, variable: str, pattern: str) -> Predicate:
    def predicate(agg: Aggregates, th: PredicateThresholds) -> Evidence:
        hits = [w for w in agg.six_hour if w.categories.get(category, 0) > 0]
        return Evidence(
            keyword,
            bool(hits),
            signals=tuple(_sig(variable, w, pattern, w.categories[category]) for w in hits),
            detail=f"{sum(w.categories.get(category, 0) for w in agg.six_hour)} hour(s) of {category}",
        )

    return predicate


def _stable_conditions(agg: Aggregates, th: PredicateThresholds) -> Evidence:
    events = [k for k in HARD_EVENT_KEYWORDS if PREDICATES[k](agg, th).fired]
    fired = not events
    tmax = [d.t_max_c for d in agg.daily]
    signals = (_sig("T", agg.daily[0], "persistence", max(tmax) - min(tmax)),) if fired else ()
    return Evidence("stable_conditions", fired, signals=signals, detail="events: " + (", ".join(events) or "none"))


def _marine_influence(agg: Aggregates, th: PredicateThresholds) -> Evidence:
    coastal = agg.ctx.location.coastal is True
    signals: tuple[Signal, ...] = ()
    if coastal:
        dirs = [w.wind_dir_mean_deg for w in agg.six_hour if w.wind_dir_mean_deg is not None]
        mean = circular_mean_deg(dirs).angle if dirs else None
        signals = (_sig("theta", agg.six_hour[0], "persistence", mean),)
    return Evidence("marine_influence", coastal, signals=signals, detail=f"coastal location: {coastal}")


def _autumn_transition(agg: Aggregates, th: PredicateThresholds) -> Evidence:
    month = agg.local_month(agg.daily[0])
    months = th.autumn_months_north if agg.ctx.location.latitude >= 0 else th.autumn_months_south
    cooling = PREDICATES["cooling_trend"](agg, th).fired
    fired = month in months and cooling
    slope = daily_tmax_slope(agg)
    signals = (_sig("T", agg.daily[0], "shift", slope),) if fired else ()
    return Evidence("autumn_transition", fired, signals=signals, detail=f"month {month}, cooling: {cooling}")


PREDICATES: dict[str, Predicate] = {
    "cooling_trend": _trend("cooling_trend", -1),
    "warming_trend": _trend("warming_trend", +1),
    "light_rain": _light_rain,
    "heavy_rain": _heavy_rain,
    "moist_conditions": _humidity("moist_conditions", True),
    "dry_conditions": _humidity("dry_conditions", False),
    "frontal_passage": _frontal_passage,
    "autumn_transition": _autumn_transition,
    "stable_conditions": _stable_conditions,
    "unstable_airmass": _unstable_airmass,
    "marine_influence": _marine_influence,
    "warm_anomaly": _anomaly("warm_anomaly", +1),
    "cold_anomaly": _anomaly("cold_anomaly", -1),
    "clear_sky": _sky("clear_sky", True),
    "overcast": _sky("overcast", False),
    "strong_wind": _strong_wind,
    "calm_wind": _calm_wind,
    "fog_risk": _fog_risk,
    "snow": _category("snow", "snow", "Vis", "trend_down"),
    "thunderstorm_risk": _category("thunderstorm_risk", "thunderstorm", "P", "trend_up"),
}


def evidence_for_keyword(
    keyword: str, ctx: ForecastContext | Aggregates, thresholds: PredicateThresholds = DEFAULT_PREDICATES
) -> Evidence:
    check_keyword(keyword)
    agg = ctx if isinstance(ctx, Aggregates) else Aggregates.of(ctx)
    return PREDICATES[keyword](agg, thresholds)


def evaluate_all(
    ctx: ForecastContext | Aggregates, thresholds: PredicateThresholds = DEFAULT_PREDICATES
) -> dict[str, Evidence]:
    agg = ctx if isinstance(ctx, Aggregates) else Aggregates.of(ctx)
    return {kw: PREDICATES[kw](agg, thresholds) for kw in VOCABULARY}


# -- warnings -----------------------------------------------------------------


@dataclass(frozen=True)
class ExpectedWarning:
    kind: str
    window: WindowAggregate
    value: float
    threshold: float


def heavy_rain_warning_threshold(
    clim: MonthlyClimatology, year: int, month: int, th: PredicateThresholds = DEFAULT_PREDICATES
) -> float:
    daily_mean = clim.month(month).precip_total_mm / calendar.monthrange(year, month)[1]
    return max(th.heavy_rain_warning_mm, th.heavy_rain_warning_clim_factor * daily_mean)


def expected_warnings(
    ctx: ForecastContext | Aggregates,
    clim: MonthlyClimatology | None = None,
    thresholds: PredicateThresholds = DEFAULT_PREDICATES,
) -> list[ExpectedWarning]:
    """Warnings the data call for; one per kind, anchored on the worst window."""
    agg = ctx if isinstance(ctx, Aggregates) else Aggregates.of(ctx)
    clim = clim if clim is not None else agg.ctx.climatology
    if clim is None:
        return []
    out: list[ExpectedWarning] = []
    rain = []
    for d in agg.daily:
        local = d.window_start_utc + timedelta(seconds=agg.ctx.location.utc_offset_s)
        limit = heavy_rain_warning_threshold(clim, local.year, local.month, thresholds)
        if d.precip_sum_mm >= limit:
            rain.append(ExpectedWarning("heavy_rain", d, d.precip_sum_mm, limit))
    if rain:
        out.append(max(rain, key=lambda e: e.value))
    wind = []
    for w in agg.six_hour:
        if w.wind_mean_ms >= thresholds.wind_warning_mean_ms:
            wind.append(ExpectedWarning("strong_wind", w, w.wind_mean_ms, thresholds.wind_warning_mean_ms))
        elif w.gust_max_ms is not None and w.gust_max_ms >= thresholds.wind_warning_gust_ms:
            wind.append(ExpectedWarning("strong_wind", w, w.gust_max_ms, thresholds.wind_warning_gust_ms))
    if wind:
        out.append(max(wind, key=lambda e: e.value))
    return out


@dataclass(frozen=True)
class WarningsVerdict:
    missing: tuple[str, ...] = ()
    unjustified: tuple[str, ...] = ()
    skipped: bool = False

    @property
    def empty(self) -> bool:
        return not self.missing and not self.unjustified and not self.skipped

    def to_dict(self) -> dict:
        return {"missing": list(self.missing), "unjustified": list(self.unjustified), "skipped": self.skipped}


def check_warning_adequacy(
    analysis: AnalysisResult,
    ctx: ForecastContext | Aggregates,
    clim: MonthlyClimatology | None = None,
    thresholds: PredicateThresholds = DEFAULT_PREDICATES,
) -> WarningsVerdict:
    agg = ctx if isinstance(ctx, Aggregates) else Aggregates.of(ctx)
    clim = clim if clim is not None else agg.ctx.climatology
    if clim is None:
        return WarningsVerdict(skipped=True)
    expected = {e.kind for e in expected_warnings(agg, clim, thresholds)}
    present = {w.kind for w in analysis.warnings}
    return WarningsVerdict(
        missing=tuple(sorted(expected - present)),
        unjustified=tuple(sorted(present - expected)),
    )


# -- keyword alignment --------------------------------------------------------


def check_proof_linkage(analysis: AnalysisResult) -> dict[str, bool]:
    """Per keyword: does some proof signal carry a (variable, pattern) of its signature?"""
    carried = {(s.variable, s.pattern) for entry in analysis.proof for s in entry.signals}
    return {kw: bool(SIGNATURES.get(kw, frozenset()) & carried) for kw in analysis.keywords}


@dataclass(frozen=True)
class KeywordFinding:
    keyword: str
    strength: str
    evidence: str  # pass | fail | borderline | contextual
    proof_linked: bool
    detail: str = ""
    signals: tuple[Signal, ...] = ()

    def to_dict(self) -> dict:
        return {
            "keyword": self.keyword,
            "strength": self.strength,
            "evidence": self.evidence,
            "proof_linked": self.proof_linked,
            "details": self.detail,
            "signals": [s.to_dict() for s in self.signals],
        }


@dataclass(frozen=True)
class ValidationReport:
    keywords: tuple[KeywordFinding, ...]
    warnings_verdict: WarningsVerdict
    unverifiable_signals: tuple[str, ...] = ()
    overall: str = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "overall", self._overall())

    def _overall(self) -> str:
        hard = [f for f in self.keywords if f.strength == "hard"]
        if any(f.evidence == "fail" or not f.proof_linked for f in hard):
            return "fail"
        if self.warnings_verdict.missing or self.warnings_verdict.unjustified:
            return "fail"
        if any(f.evidence != "pass" or not f.proof_linked for f in self.keywords):
            return "warn"
        if self.warnings_verdict.skipped:
            return "warn"
        return "pass"

    @property
    def hard_failures(self) -> list[KeywordFinding]:
        return [f for f in self.keywords if f.strength == "hard" and f.evidence == "fail"]

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "keywords": [f.to_dict() for f in self.keywords],
            "warnings_verdict": self.warnings_verdict.to_dict(),
            "unverifiable_signals": list(self.unverifiable_signals),
        }


def _unverifiable(analysis: AnalysisResult, ctx: ForecastContext, agg: Aggregates) -> tuple[str, ...]:
    has_pressure = any(w.pressure_mean_hpa is not None for w in agg.six_hour)
    if has_pressure:
        return ()
    return tuple(
        f"proof[{i}].signals[{j}]"
        for i, entry in enumerate(analysis.proof)
        for j, s in enumerate(entry.signals)
        if s.variable == "pressure"
    )


def check_keyword_alignment(
    analysis: AnalysisResult,
    ctx: ForecastContext,
    thresholds: PredicateThresholds = DEFAULT_PREDICATES,
) -> ValidationReport:
    agg = Aggregates.of(ctx)
    linkage = check_proof_linkage(analysis)
    findings = []
    for kw in analysis.keywords:
        if kw not in SIGNATURES:
            findings.append(KeywordFinding(kw, "hard", "fail", False, "outside the controlled vocabulary"))
            continue
        ev = PREDICATES[kw](agg, thresholds)
        if kw in CONTEXTUAL:
            verdict = "contextual"
        elif ev.fired:
            verdict = "pass"
        elif ev.borderline:
            verdict = "borderline"
        else:
            verdict = "fail"
        findings.append(KeywordFinding(kw, ev.strength, verdict, linkage[kw], ev.detail, ev.signals))
    return ValidationReport(
        keywords=tuple(findings),
        warnings_verdict=check_warning_adequacy(analysis, agg, ctx.climatology, thresholds),
        unverifiable_signals=_unverifiable(analysis, ctx, agg),
    )


def validate(
    analysis: AnalysisResult, ctx: ForecastContext, thresholds: PredicateThresholds = DEFAULT_PREDICATES
) -> ValidationReport:
    return check_keyword_alignment(analysis, ctx, thresholds)


def signature_overlaps(keywords: Iterable[str]) -> list[tuple[str, str]]:
    """Pairs of the given keywords whose proof signatures intersect."""
    kws: Sequence[str] = list(keywords)
    return [
        (a, b)
        for i, a in enumerate(kws)
        for b in kws[i + 1 :]
        if SIGNATURES[a] & SIGNATURES[b]
    ]
