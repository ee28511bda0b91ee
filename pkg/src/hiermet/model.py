"""Domain types shared by every stage of the pipeline.

All types are frozen dataclasses with ``to_dict``/``from_dict`` pairs that
produce the JSON shapes described by the files in ``hiermet/schemas``.
Optional fields are omitted from the JSON when absent rather than written
as ``null`` or ``0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Any, Mapping

MODES = ("baseline", "hierarchical")
CLIMATOLOGY_SOURCES = ("meteostat", "era5_fallback")
SIGNAL_VARIABLES = ("T", "RH", "U", "theta", "P", "Vis", "pressure")
SIGNAL_PATTERNS = ("trend_down", "trend_up", "shift", "exceedance", "persistence")
WARNING_KINDS = ("heavy_rain", "strong_wind")


def format_ts(ts: datetime) -> str:
    if ts.tzinfo is None:
        raise ValueError(f"naive timestamp {ts!r}; all timestamps must be UTC-aware")
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_ts(value: str) -> datetime:
    if not isinstance(value, str):
        raise TypeError(f"timestamp must be a string, got {type(value).__name__}")
    text = value[:-1] + "+00:00" if value.endswith("Z") else value
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        raise ValueError(f"timestamp {value!r} carries no UTC designator")
    return ts.astimezone(timezone.utc)


def _opt_float(data: Mapping[str, Any], key: str) -> float | None:
    value = data.get(key)
    return None if value is None else float(value)


def _put(out: dict[str, Any], key: str, value: Any) -> None:
    if value is not None:
        out[key] = value


@dataclass(frozen=True)
class GeoLocation:
    city: str
    region: str
    country: str
    latitude: float
    longitude: float
    utc_offset_s: int = 0
    elevation_m: float | None = None
    description: str | None = None
    # Set by ingestion from the encyclopedia text; None when unknown.
    coastal: bool | None = None

    @property
    def label(self) -> str:
        return ", ".join(part for part in (self.city, self.country) if part)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "city": self.city,
            "region": self.region,
            "country": self.country,
            "latitude": self.latitude,
            "longitude": self.longitude,
            "utc_offset_s": self.utc_offset_s,
        }
        _put(out, "elevation_m", self.elevation_m)
        _put(out, "description", self.description)
        _put(out, "coastal", self.coastal)
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> GeoLocation:
        return cls(
            city=data["city"],
            region=data.get("region", ""),
            country=data.get("country", ""),
            latitude=float(data["latitude"]),
            longitude=float(data["longitude"]),
            utc_offset_s=int(data.get("utc_offset_s", 0)),
            elevation_m=_opt_float(data, "elevation_m"),
            description=data.get("description"),
            coastal=data.get("coastal"),
        )


@dataclass(frozen=True)
class HourlyRecord:
    ts_utc: datetime
    condition: int
    t_c: float
    t_feel_c: float
    dew_point_c: float
    rh_pct: float
    wind_ms: float
    wind_dir_deg: float
    precip_mm: float
    gust_ms: float | None = None
    visibility_m: float | None = None
    pressure_hpa: float | None = None
    # True when the provider sent no precipitation object and 0.0 was filled in.
    precip_imputed: bool = False
    category: str | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "ts_utc": format_ts(self.ts_utc),
            "condition": self.condition,
            "t_c": self.t_c,
            "t_feel_c": self.t_feel_c,
            "dew_point_c": self.dew_point_c,
            "rh_pct": self.rh_pct,
            "wind_ms": self.wind_ms,
            "wind_dir_deg": self.wind_dir_deg,
            "precip_mm": self.precip_mm,
        }
        _put(out, "gust_ms", self.gust_ms)
        _put(out, "visibility_m", self.visibility_m)
        _put(out, "pressure_hpa", self.pressure_hpa)
        if self.precip_imputed:
            out["precip_imputed"] = True
        _put(out, "category", self.category)
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> HourlyRecord:
        return cls(
            ts_utc=parse_ts(data["ts_utc"]),
            condition=int(data["condition"]),
            t_c=float(data["t_c"]),
            t_feel_c=float(data["t_feel_c"]),
            dew_point_c=float(data["dew_point_c"]),
            rh_pct=float(data["rh_pct"]),
            wind_ms=float(data["wind_ms"]),
            wind_dir_deg=float(data["wind_dir_deg"]),
            precip_mm=float(data["precip_mm"]),
            gust_ms=_opt_float(data, "gust_ms"),
            visibility_m=_opt_float(data, "visibility_m"),
            pressure_hpa=_opt_float(data, "pressure_hpa"),
            precip_imputed=bool(data.get("precip_imputed", False)),
            category=data.get("category"),
        )


@dataclass(frozen=True)
class WindowAggregate:
    window_start_utc: datetime
    window_len_h: int
    n_hours: int
    t_mean_c: float
    t_max_c: float
    t_min_c: float
    rh_mean_pct: float
    wind_mean_ms: float
    precip_sum_mm: float
    dew_point_mean_c: float
    partial: bool = False
    wind_max_ms: float | None = None
    gust_max_ms: float | None = None
    wind_dir_mean_deg: float | None = None
    # Mean resultant length of the hourly directions (6 h windows only).
    wind_dir_r: float | None = None
    visibility_mean_m: float | None = None
    pressure_mean_hpa: float | None = None
    categories: Mapping[str, int] = field(default_factory=dict)

    @property
    def window_end_utc(self) -> datetime:
        return self.window_start_utc + timedelta(hours=self.window_len_h)

    @property
    def dominant_category(self) -> str | None:
        from hiermet.categorizer import dominant_category

        return dominant_category(self.categories)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "window_start_utc": format_ts(self.window_start_utc),
            "window_len_h": self.window_len_h,
            "n_hours": self.n_hours,
            "partial": self.partial,
            "t_mean_c": self.t_mean_c,
            "t_max_c": self.t_max_c,
            "t_min_c": self.t_min_c,
            "rh_mean_pct": self.rh_mean_pct,
            "wind_mean_ms": self.wind_mean_ms,
            "precip_sum_mm": self.precip_sum_mm,
            "dew_point_mean_c": self.dew_point_mean_c,
        }
        _put(out, "wind_max_ms", self.wind_max_ms)
        _put(out, "gust_max_ms", self.gust_max_ms)
        _put(out, "wind_dir_mean_deg", self.wind_dir_mean_deg)
        _put(out, "wind_dir_r", self.wind_dir_r)
        _put(out, "visibility_mean_m", self.visibility_mean_m)
        _put(out, "pressure_mean_hpa", self.pressure_mean_hpa)
        if self.categories:
            out["categories"] = dict(self.categories)
            out["dominant_category"] = self.dominant_category
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> WindowAggregate:
        # dominant_category is derived and therefore not read back.
        return cls(
            window_start_utc=parse_ts(data["window_start_utc"]),
            window_len_h=int(data["window_len_h"]),
            n_hours=int(data["n_hours"]),
            partial=bool(data.get("partial", False)),
            t_mean_c=float(data["t_mean_c"]),
            t_max_c=float(data["t_max_c"]),
            t_min_c=float(data["t_min_c"]),
            rh_mean_pct=float(data["rh_mean_pct"]),
            wind_mean_ms=float(data["wind_mean_ms"]),
            precip_sum_mm=float(data["precip_sum_mm"]),
            dew_point_mean_c=float(data["dew_point_mean_c"]),
            wind_max_ms=_opt_float(data, "wind_max_ms"),
            gust_max_ms=_opt_float(data, "gust_max_ms"),
            wind_dir_mean_deg=_opt_float(data, "wind_dir_mean_deg"),
            wind_dir_r=_opt_float(data, "wind_dir_r"),
            visibility_mean_m=_opt_float(data, "visibility_mean_m"),
            pressure_mean_hpa=_opt_float(data, "pressure_mean_hpa"),
            categories={str(k): int(v) for k, v in data.get("categories", {}).items()},
        )


@dataclass(frozen=True)
class ClimatologyMonth:
    month: int
    t_min_c: float
    t_max_c: float
    precip_total_mm: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "month": self.month,
            "t_min_c": self.t_min_c,
            "t_max_c": self.t_max_c,
            "precip_total_mm": self.precip_total_mm,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ClimatologyMonth:
        return cls(
            month=int(data["month"]),
            t_min_c=float(data["t_min_c"]),
            t_max_c=float(data["t_max_c"]),
            precip_total_mm=float(data["precip_total_mm"]),
        )


@dataclass(frozen=True)
class MonthlyClimatology:
    source: str
    months: tuple[ClimatologyMonth, ...]

    def month(self, number: int) -> ClimatologyMonth:
        for entry in self.months:
            if entry.month == number:
                return entry
        raise KeyError(f"climatology has no month {number}")

    def to_dict(self) -> dict[str, Any]:
        return {"source": self.source, "months": [m.to_dict() for m in self.months]}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> MonthlyClimatology:
        return cls(
            source=data["source"],
            months=tuple(ClimatologyMonth.from_dict(m) for m in data["months"]),
        )


@dataclass(frozen=True)
class ForecastContext:
    mode: str
    location: GeoLocation
    horizon_h: int
    issued_at_utc: datetime
    climatology: MonthlyClimatology | None = None
    daily: tuple[WindowAggregate, ...] | None = None
    six_hour: tuple[WindowAggregate, ...] | None = None
    hourly: tuple[HourlyRecord, ...] | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "mode": self.mode,
            "location": self.location.to_dict(),
            "horizon_h": self.horizon_h,
            "issued_at_utc": format_ts(self.issued_at_utc),
        }
        if self.climatology is not None:
            out["climatology"] = self.climatology.to_dict()
        if self.daily is not None:
            out["daily"] = [w.to_dict() for w in self.daily]
        if self.six_hour is not None:
            out["six_hour"] = [w.to_dict() for w in self.six_hour]
        if self.hourly is not None:
            out["hourly"] = [r.to_dict() for r in self.hourly]
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ForecastContext:
        def table(key: str, kind: Any) -> tuple | None:
            rows = data.get(key)
            return None if rows is None else tuple(kind.from_dict(r) for r in rows)

        clim = data.get("climatology")
        return cls(
            mode=data["mode"],
            location=GeoLocation.from_dict(data["location"]),
            horizon_h=int(data["horizon_h"]),
            issued_at_utc=parse_ts(data["issued_at_utc"]),
            climatology=None if clim is None else MonthlyClimatology.from_dict(clim),
            daily=table("daily", WindowAggregate),
            six_hour=table("six_hour", WindowAggregate),
            hourly=table("hourly", HourlyRecord),
        )


@dataclass(frozen=True)
class WindowRef:
    start_utc: datetime
    len_h: int

    def to_dict(self) -> dict[str, Any]:
        return {"start_utc": format_ts(self.start_utc), "len_h": self.len_h}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> WindowRef:
        return cls(start_utc=parse_ts(data["start_utc"]), len_h=int(data["len_h"]))

    @classmethod
    def of(cls, window: WindowAggregate) -> WindowRef:
        return cls(window.window_start_utc, window.window_len_h)


@dataclass(frozen=True)
class Signal:
    variable: str
    window_ref: WindowRef
    pattern: str
    value: float | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "variable": self.variable,
            "window_ref": self.window_ref.to_dict(),
            "pattern": self.pattern,
        }
        _put(out, "value", self.value)
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> Signal:
        return cls(
            variable=data["variable"],
            window_ref=WindowRef.from_dict(data["window_ref"]),
            pattern=data["pattern"],
            value=_opt_float(data, "value"),
        )


@dataclass(frozen=True)
class ProofEntry:
    claim: str
    signals: tuple[Signal, ...]

    def to_dict(self) -> dict[str, Any]:
        return {"claim": self.claim, "signals": [s.to_dict() for s in self.signals]}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ProofEntry:
        return cls(
            claim=data["claim"],
            signals=tuple(Signal.from_dict(s) for s in data["signals"]),
        )


@dataclass(frozen=True)
class HazardWarning:
    kind: str
    text: str
    evidence_ref: WindowRef

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "text": self.text, "evidence_ref": self.evidence_ref.to_dict()}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> HazardWarning:
        return cls(
            kind=data["kind"],
            text=data["text"],
            evidence_ref=WindowRef.from_dict(data["evidence_ref"]),
        )


@dataclass(frozen=True)
class AnalysisResult:
    summary: str
    proof: tuple[ProofEntry, ...]
    keywords: tuple[str, ...]
    warnings: tuple[HazardWarning, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "summary": self.summary,
            "proof": [p.to_dict() for p in self.proof],
            "keywords": list(self.keywords),
        }
        if self.warnings:
            out["warnings"] = [w.to_dict() for w in self.warnings]
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> AnalysisResult:
        return cls(
            summary=data["summary"],
            proof=tuple(ProofEntry.from_dict(p) for p in data["proof"]),
            keywords=tuple(data["keywords"]),
            warnings=tuple(HazardWarning.from_dict(w) for w in data.get("warnings") or ()),
        )


@dataclass(frozen=True)
class Report:
    title: str
    information: str
    analysis: AnalysisResult
    context: ForecastContext | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "header": {"title": self.title, "information": self.information},
            "analysis": self.analysis.to_dict(),
        }
        if self.context is not None:
            out["context"] = self.context.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> Report:
        ctx = data.get("context")
        return cls(
            title=data["header"]["title"],
            information=data["header"]["information"],
            analysis=AnalysisResult.from_dict(data["analysis"]),
            context=None if ctx is None else ForecastContext.from_dict(ctx),
        )


@dataclass(frozen=True)
class SourceStatus:
    source: str
    outcome: str
    degradation_code: str | None = None
    attempts: int = 0
    detail: str | None = None

    def __post_init__(self) -> None:
        if self.outcome not in ("ok", "degraded", "failed"):
            raise ValueError(f"unknown outcome {self.outcome!r}")
        if self.outcome == "degraded" and not self.degradation_code:
            raise ValueError("degraded status requires a degradation_code")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "source": self.source,
            "outcome": self.outcome,
            "attempts": self.attempts,
        }
        _put(out, "degradation_code", self.degradation_code)
        _put(out, "detail", self.detail)
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> SourceStatus:
        return cls(
            source=data["source"],
            outcome=data["outcome"],
            degradation_code=data.get("degradation_code"),
            attempts=int(data.get("attempts", 0)),
            detail=data.get("detail"),
        )
