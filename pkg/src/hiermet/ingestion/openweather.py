"""OpenWeather hourly forecasts: fetch, then normalize to SI ``HourlyRecord`` rows.

Two payload shapes are understood. "3.0" is the One Call layout (flat hourly
objects with ``temp``, ``dew_point``, ``wind_speed``). "2.5" is the pro hourly
forecast (``list`` of objects with nested ``main`` and ``wind`` and no dew
point, which is derived with the Magnus formula).
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Any, Callable, Mapping, Sequence

import httpx

from hiermet.aggregation import check_grid
from hiermet.errors import GridError, NormalizationError, SourceError
from hiermet.ingestion.http import RetryPolicy, get_with_retry
from hiermet.model import GeoLocation, HourlyRecord, SourceStatus

log = logging.getLogger(__name__)

API_VERSIONS = ("2.5", "3.0")
UNITS = ("standard", "metric", "imperial")
DEFAULT_BASE_URLS = {
    "3.0": "https://api.openweathermap.org/data/3.0/onecall",
    "2.5": "https://pro.openweathermap.org/data/2.5/forecast/hourly",
}
MPH_TO_MS = 0.44704

# Magnus coefficients over water (Alduchov and Eskridge).
MAGNUS_B = 17.62
MAGNUS_C = 243.12


def kelvin_to_c(value: float) -> float:
    return value - 273.15


def fahrenheit_to_c(value: float) -> float:
    return (value - 32.0) * 5.0 / 9.0


_TEMP = {"standard": kelvin_to_c, "metric": float, "imperial": fahrenheit_to_c}
_SPEED = {"standard": float, "metric": float, "imperial": lambda v: v * MPH_TO_MS}


def magnus_dew_point(t_c: float, rh_pct: float) -> float:
    if rh_pct <= 0:
        raise ValueError("dew point undefined for RH <= 0")
    gamma = math.log(rh_pct / 100.0) + MAGNUS_B * t_c / (MAGNUS_C + t_c)
    return MAGNUS_C * gamma / (MAGNUS_B - gamma)


def _r(value: float, step: float) -> float:
    digits = {0.01: 2, 0.1: 1}[step]
    out = round(value, digits)
    return 0.0 if out == 0 else out  # no negative zero in canonical output


def _num(row: Mapping[str, Any], key: str, index: int, field: str | None = None) -> float:
    name = field or key
    if key not in row or row[key] is None:
        raise NormalizationError(index, name, "missing")
    value = row[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise NormalizationError(index, name, f"not a number: {value!r}")
    if not math.isfinite(value):
        raise NormalizationError(index, name, "not finite")
    return float(value)


def _opt_num(row: Mapping[str, Any], key: str, index: int) -> float | None:
    return None if row.get(key) is None else _num(row, key, index)


def _hourly_precip(row: Mapping[str, Any], index: int) -> tuple[float, bool]:
    """Rain plus snow water equivalent over the hour; imputed 0.0 when both are absent."""
    total, seen = 0.0, False
    for kind in ("rain", "snow"):
        block = row.get(kind)
        if block is None:
            continue
        if not isinstance(block, Mapping):
            raise NormalizationError(index, kind, f"expected an object, got {type(block).__name__}")
        if "1h" in block:
            total += _num(block, "1h", index, f"{kind}.1h")
            seen = True
    return total, not seen


def _condition(row: Mapping[str, Any], index: int) -> int:
    weather = row.get("weather")
    if not isinstance(weather, list) or not weather or not isinstance(weather[0], Mapping):
        raise NormalizationError(index, "weather", "missing condition list")
    code = weather[0].get("id")
    if isinstance(code, bool) or not isinstance(code, int):
        raise NormalizationError(index, "weather[0].id", f"not an integer code: {code!r}")
    return code


def _direction(value: float) -> float:
    return _r(value % 360.0, 0.1) % 360.0


@dataclass(frozen=True)
class _Fields:
    t: float
    t_feel: float
    rh: float
    dew: float | None
    wind: float
    wind_dir: float
    gust: float | None
    pressure: float | None


def _fields_v30(row: Mapping[str, Any], i: int) -> _Fields:
    return _Fields(
        t=_num(row, "temp", i),
        t_feel=_num(row, "feels_like", i),
        rh=_num(row, "humidity", i),
        dew=_num(row, "dew_point", i),
        wind=_num(row, "wind_speed", i),
        wind_dir=_num(row, "wind_deg", i),
        gust=_opt_num(row, "wind_gust", i),
        pressure=_opt_num(row, "pressure", i),
    )


def _fields_v25(row: Mapping[str, Any], i: int) -> _Fields:
    main, wind = row.get("main"), row.get("wind")
    if not isinstance(main, Mapping):
        raise NormalizationError(i, "main", "missing object")
    if not isinstance(wind, Mapping):
        raise NormalizationError(i, "wind", "missing object")
    return _Fields(
        t=_num(main, "temp", i, "main.temp"),
        t_feel=_num(main, "feels_like", i, "main.feels_like"),
        rh=_num(main, "humidity", i, "main.humidity"),
        dew=None,
        wind=_num(wind, "speed", i, "wind.speed"),
        wind_dir=_num(wind, "deg", i, "wind.deg"),
        gust=_opt_num(wind, "gust", i),
        pressure=_opt_num(main, "pressure", i),
    )


_EXTRACT: dict[str, tuple[str, Callable[[Mapping[str, Any], int], _Fields]]] = {
    "3.0": ("hourly", _fields_v30),
    "2.5": ("list", _fields_v25),
}


def hourly_rows(raw: Mapping[str, Any], version: str) -> Sequence[Mapping[str, Any]]:
    key, _ = _EXTRACT[version]
    rows = raw.get(key)
    if not isinstance(rows, list):
        raise NormalizationError(-1, key, "payload has no hourly list")
    return rows


def payload_utc_offset(raw: Mapping[str, Any], version: str) -> int:
    if version == "3.0":
        return int(raw.get("timezone_offset", 0))
    return int((raw.get("city") or {}).get("timezone", 0))


def normalize_hourly(
    raw: Mapping[str, Any] | Sequence[Mapping[str, Any]], version: str = "3.0", units: str = "standard"
) -> list[HourlyRecord]:
    """Provider rows to SI records on a verified hourly grid.

    ``raw`` may be the whole payload or its hourly list. Categories are left
    unset; the categorizer assigns them.
    """
    if version not in API_VERSIONS:
        raise ValueError(f"unsupported API version {version!r}")
    if units not in UNITS:
        raise ValueError(f"unsupported units {units!r}")
    rows = hourly_rows(raw, version) if isinstance(raw, Mapping) else raw
    to_c, to_ms = _TEMP[units], _SPEED[units]
    extract = _EXTRACT[version][1]
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, Mapping):
            raise NormalizationError(i, "$", f"expected an object, got {type(row).__name__}")
        dt = row.get("dt")
        if isinstance(dt, bool) or not isinstance(dt, int):
            raise NormalizationError(i, "dt", f"not an integer epoch: {dt!r}")
        f = extract(row, i)
        t_c = to_c(f.t)
        if not 0.0 <= f.rh <= 100.0:
            raise NormalizationError(i, "humidity", f"{f.rh} outside [0, 100]")
        dew = to_c(f.dew) if f.dew is not None else magnus_dew_point(t_c, max(f.rh, 1.0))
        precip, imputed = _hourly_precip(row, i)
        vis = _opt_num(row, "visibility", i)
        out.append(
            HourlyRecord(
                ts_utc=datetime.fromtimestamp(dt, tz=timezone.utc),
                condition=_condition(row, i),
                t_c=_r(t_c, 0.01),
                t_feel_c=_r(to_c(f.t_feel), 0.01),
                # Rounding can push the dew point a hair above T at saturation.
                dew_point_c=min(_r(dew, 0.01), _r(t_c, 0.01)),
                rh_pct=f.rh,
                wind_ms=_r(to_ms(f.wind), 0.1),
                wind_dir_deg=_direction(f.wind_dir),
                precip_mm=_r(precip, 0.1),
                gust_ms=None if f.gust is None else _r(to_ms(f.gust), 0.1),
                visibility_m=vis,
                pressure_hpa=f.pressure,
                precip_imputed=imputed,
            )
        )
    check_grid(out)
    return out


@dataclass(frozen=True)
class ForecastFetch:
    records: list[HourlyRecord]
    utc_offset_s: int
    raw: bytes
    status: SourceStatus


def parse_forecast(
    body: bytes, version: str, units: str, horizon_h: int, strict_horizon: bool = True
) -> tuple[list[HourlyRecord], int, SourceStatus | None]:
    """Normalize a stored payload and apply the horizon rule.

    Returns the records, the payload's UTC offset and a degraded status when
    a short forecast was accepted under ``strict_horizon=False``.
    """
    raw = json.loads(body)
    records = normalize_hourly(raw, version, units)[:horizon_h]
    offset = payload_utc_offset(raw, version)
    if len(records) < horizon_h:
        message = f"provider returned {len(records)} hourly rows for a {horizon_h} h request"
        if strict_horizon:
            raise GridError(message)
        return records, offset, SourceStatus("openweather", "degraded", "FORECAST_SHORT_HORIZON", 1, message)
    return records, offset, None


def fetch_hourly_forecast(
    loc: GeoLocation,
    horizon_h: int,
    *,
    api_key: str | None,
    client: httpx.Client,
    version: str = "3.0",
    base_url: str | None = None,
    units: str = "standard",
    strict_horizon: bool = True,
    policy: RetryPolicy = RetryPolicy(),
) -> ForecastFetch:
    if not 1 <= horizon_h <= 240:
        raise ValueError(f"horizon {horizon_h} h outside [1, 240]")
    url = base_url or DEFAULT_BASE_URLS[version]
    params: dict[str, Any] = {"lat": loc.latitude, "lon": loc.longitude, "appid": api_key or "", "units": units}
    if version == "3.0":
        params["exclude"] = "current,minutely,daily,alerts"
    else:
        params["cnt"] = horizon_h
    result = get_with_retry(client, url, params, policy)
    if not result.ok:
        status = SourceStatus("openweather", "failed", attempts=result.attempts, detail=result.error)
        raise SourceError(f"forecast fetch failed: {result.error}", status)
    body = result.response.content
    records, offset, degraded = parse_forecast(body, version, units, horizon_h, strict_horizon)
    if degraded is not None:
        log.warning(degraded.detail)
        status = SourceStatus("openweather", "degraded", degraded.degradation_code, result.attempts, degraded.detail)
    else:
        status = SourceStatus("openweather", "ok", attempts=result.attempts)
    return ForecastFetch(records, offset, body, status)
