"""Synthetic five-day October forecasts for Cork, Manila, Chennai and Da Nang.

Each case is built as provider-shaped raw responses (OneCall 3.0 hourly in
Kelvin, reverse geocoding, elevation, encyclopedia summary, Meteostat
normals) so it exercises the same normalize/aggregate path as live data.
The hourly series are generated from per-day and per-window targets:

* temperature follows a cosine between the day's minimum (05 local) and
  maximum (14 local), so the daily extremes are exactly the targets;
* humidity is the inverse image of temperature between ``rh`` bounds,
  raised to ``rh_wet`` in rainy hours;
* 6-hour wind means and directions are exact (symmetric hourly offsets);
* precipitation totals are placed in named 6-hour windows.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

from hiermet.cache import CacheEntry, FileCache, cache_key
from hiermet.config import ServiceConfig
from hiermet.ingestion.openweather import magnus_dew_point
from hiermet.model import ForecastContext, format_ts
from hiermet.pipeline import rebuild_context, source_ids

HORIZON_H = 120
WIND_OFFSETS = (-0.6, -0.2, 0.2, 0.6, 0.2, -0.2)
DIR_OFFSETS = (-4.0, -2.0, 0.0, 0.0, 2.0, 4.0)
T_MIN_HOUR, T_MAX_HOUR = 5, 14


@dataclass(frozen=True)
class CaseSpec:
    name: str
    city: str
    state: str
    country_code: str
    lat: float
    lon: float
    utc_offset_s: int
    start_local: datetime  # naive local midnight of day 0
    elevation_m: float
    summary: str
    t_max: tuple[float, ...]
    t_min: tuple[float, ...]
    rh: tuple[float, float]  # (at daily max, at daily min)
    rh_wet: float
    wind_means: tuple[float, ...]  # 20 six-hour means
    wind_dirs: tuple[float, ...]  # 20 six-hour directions
    rain: dict[int, float]  # six-hour window index -> total mm
    gust_factor: float
    dry_codes: tuple[int, int]  # (night, day)
    climatology: tuple[tuple[float, float, float], ...]  # (t_min, t_max, precip) Jan..Dec
    pressure_hpa: float = 1012.0

    @property
    def start_utc(self) -> datetime:
        return self.start_local.replace(tzinfo=timezone.utc) - timedelta(seconds=self.utc_offset_s)


CASES: dict[str, CaseSpec] = {
    "cork": CaseSpec(
        name="cork", city="Cork", state="Munster", country_code="IE",
        lat=51.903614, lon=-8.468399, utc_offset_s=3600, start_local=datetime(2025, 10, 20),
        elevation_m=18.0,
        summary="Cork is a port city in the south of Ireland, set on the River Lee where it "
        "opens into Cork Harbour on the Atlantic coast.",
        t_max=(15.5, 14.4, 13.0, 11.7, 10.5), t_min=(9.8, 9.0, 8.1, 6.9, 5.8),
        rh=(78.0, 92.0), rh_wet=95.0,
        wind_means=(2.5, 3.0, 3.4, 3.8, 3.5, 3.2, 3.6, 4.1, 3.9, 3.6, 4.0, 4.8,
                    7.2, 6.8, 6.1, 5.5, 5.0, 4.6, 4.2, 3.8),
        wind_dirs=(180, 185, 190, 195, 190, 185, 190, 195, 200, 195, 190, 195,
                   290, 295, 300, 295, 290, 285, 290, 295),
        rain={2: 0.6, 6: 2.1, 11: 1.4, 12: 5.4, 17: 0.8},
        gust_factor=1.6, dry_codes=(804, 803),
        climatology=((3.1, 8.5, 131), (3.0, 8.9, 97), (3.8, 10.6, 93), (4.9, 12.7, 76), (7.3, 15.4, 80),
                     (10.0, 18.1, 74), (11.9, 19.6, 72), (11.7, 19.3, 88), (10.2, 17.3, 91), (8.0, 13.5, 120),
                     (5.4, 10.6, 120), (3.9, 8.9, 131)),
        pressure_hpa=1009.0,
    ),
    "manila": CaseSpec(
        name="manila", city="Manila", state="Metro Manila", country_code="PH",
        lat=14.5995, lon=120.9842, utc_offset_s=28800, start_local=datetime(2025, 10, 20),
        elevation_m=8.0,
        summary="Manila, the capital of the Philippines, lies on the eastern shore of Manila Bay "
        "on the island of Luzon.",
        t_max=(31.8, 30.9, 29.4, 27.6, 30.2), t_min=(26.9, 26.2, 25.8, 25.4, 26.0),
        rh=(66.0, 88.0), rh_wet=90.0,
        wind_means=(1.8, 2.2, 2.8, 3.2, 2.4, 2.6, 3.0, 3.6, 2.0, 2.4, 3.0, 3.3,
                    1.9, 2.3, 2.9, 3.4, 2.1, 2.5, 3.1, 3.5),
        wind_dirs=(95, 100, 105, 110, 115, 120, 115, 110, 105, 100, 100, 105,
                   110, 115, 120, 125, 120, 115, 110, 105),
        rain={7: 1.8, 14: 3.2, 18: 0.6},
        gust_factor=1.6, dry_codes=(800, 801),
        climatology=((23.8, 29.6, 17), (24.1, 30.6, 8), (25.2, 32.1, 10), (26.6, 33.5, 22), (27.0, 33.2, 165),
                     (26.6, 32.0, 265), (26.0, 30.9, 420), (25.9, 30.5, 470), (25.8, 30.9, 355),
                     (25.5, 30.6, 250), (25.0, 30.4, 115), (24.1, 29.5, 57)),
        pressure_hpa=1010.0,
    ),
    "chennai": CaseSpec(
        name="chennai", city="Chennai", state="Tamil Nadu", country_code="IN",
        lat=13.0827, lon=80.2707, utc_offset_s=19800, start_local=datetime(2025, 10, 20),
        elevation_m=7.0,
        summary="Chennai is the capital of Tamil Nadu, on the Coromandel Coast of the Bay of Bengal "
        "in south-eastern India.",
        t_max=(30.2, 30.7, 28.6, 26.9, 25.3), t_min=(26.3, 26.6, 25.4, 24.2, 23.4),
        rh=(73.0, 90.0), rh_wet=92.0,
        wind_means=(3.3, 3.5, 3.8, 4.0, 4.2, 4.5, 4.8, 5.2, 7.4, 7.8, 8.2, 8.6,
                    9.0, 9.5, 9.2, 8.8, 8.4, 8.0, 7.6, 7.2),
        wind_dirs=(90, 95, 100, 95, 90, 95, 100, 95, 200, 210, 220, 235,
                   250, 265, 280, 290, 300, 305, 315, 315),
        rain={2: 18.0, 3: 9.7, 7: 12.4, 8: 6.1, 13: 2.0, 18: 0.4},
        gust_factor=1.5, dry_codes=(803, 803),
        climatology=((21.2, 29.3, 25), (22.1, 31.0, 5), (23.9, 33.0, 3), (26.3, 35.1, 15), (27.8, 37.4, 48),
                     (27.4, 37.0, 54), (26.4, 35.3, 90), (25.9, 34.6, 120), (25.6, 33.8, 130),
                     (24.6, 32.1, 280), (23.0, 29.6, 350), (21.8, 28.8, 140)),
        pressure_hpa=1008.0,
    ),
    "danang": CaseSpec(
        name="danang", city="Da Nang", state="Da Nang", country_code="VN",
        lat=16.0472, lon=108.22, utc_offset_s=25200, start_local=datetime(2025, 10, 21),
        elevation_m=5.0,
        summary="Da Nang is a coastal city in central Vietnam, at the mouth of the Han River "
        "on the South China Sea.",
        t_max=(28.5, 27.2, 25.9, 26.4, 27.8), t_min=(24.6, 24.0, 23.2, 23.4, 24.1),
        rh=(80.0, 94.0), rh_wet=96.0,
        wind_means=(3.0, 3.2, 3.6, 4.0, 4.4, 5.0, 7.2, 7.6, 8.0, 8.6, 8.4, 8.0,
                    7.8, 7.4, 6.8, 6.0, 5.4, 4.8, 4.2, 3.8),
        wind_dirs=(40, 45, 40, 35, 40, 45, 110, 115, 110, 105, 110, 105,
                   170, 175, 180, 175, 170, 175, 180, 175),
        rain={2: 10.5, 3: 8.0, 5: 12.0, 6: 20.2, 7: 14.0, 8: 30.4, 9: 40.0, 10: 36.0, 11: 24.0,
              12: 22.0, 13: 13.0, 17: 8.6},
        gust_factor=1.6, dry_codes=(804, 804),
        climatology=((19.4, 24.8, 96), (20.3, 26.1, 33), (21.8, 28.3, 22), (23.7, 31.2, 27), (25.2, 33.6, 62),
                     (25.9, 34.6, 87), (25.8, 34.6, 86), (25.7, 34.3, 117), (24.5, 32.1, 350),
                     (23.2, 29.5, 612), (21.9, 27.1, 440), (20.2, 25.4, 199)),
        pressure_hpa=1007.0,
    ),
}


def _temperature(spec: CaseSpec, day: int, hour: int) -> float:
    """Piecewise cosine through (05, t_min) and (14, t_max) of each local day."""
    n = len(spec.t_max)
    if hour < T_MIN_HOUR:
        hi = spec.t_max[day - 1] if day > 0 else spec.t_max[0]
        frac = (hour + 24 - T_MAX_HOUR) / (24 - T_MAX_HOUR + T_MIN_HOUR)
        return hi - (hi - spec.t_min[day]) * (1 - math.cos(math.pi * frac)) / 2
    if hour <= T_MAX_HOUR:
        frac = (hour - T_MIN_HOUR) / (T_MAX_HOUR - T_MIN_HOUR)
        return spec.t_min[day] + (spec.t_max[day] - spec.t_min[day]) * (1 - math.cos(math.pi * frac)) / 2
    lo = spec.t_min[day + 1] if day + 1 < n else spec.t_min[day]
    frac = (hour - T_MAX_HOUR) / (24 - T_MAX_HOUR + T_MIN_HOUR)
    return spec.t_max[day] - (spec.t_max[day] - lo) * (1 - math.cos(math.pi * frac)) / 2


def _rain_hours(spec: CaseSpec) -> dict[int, float]:
    """Hour index -> mm, spreading each window total over its first hours in 0.1 mm steps."""
    out: dict[int, float] = {}
    for window, total in spec.rain.items():
        tenths = round(total * 10)
        k = min(6, max(1, tenths // 3))
        base, extra = divmod(tenths, k)
        for j in range(k):
            out[window * 6 + j] = (base + (1 if j < extra else 0)) / 10
    return out


def _rain_code(rate: float) -> int:
    if rate >= 4.0:
        return 502
    return 501 if rate >= 1.0 else 500


def forecast_payload(spec: CaseSpec) -> dict:
    start = spec.start_utc
    rain = _rain_hours(spec)
    rows = []
    for i in range(HORIZON_H):
        day, hour = divmod(i, 24)
        t = _temperature(spec, day, hour)
        span = spec.t_max[day] - spec.t_min[day]
        rh_hi, rh_lo = spec.rh[1], spec.rh[0]
        rh = rh_hi - (rh_hi - rh_lo) * (t - spec.t_min[day]) / span
        precip = rain.get(i)
        if precip:
            rh = spec.rh_wet
        rh = float(min(100, max(0, round(rh))))
        window = i // 6
        wind = round(spec.wind_means[window] + WIND_OFFSETS[i % 6], 1)
        direction = (spec.wind_dirs[window] + DIR_OFFSETS[i % 6]) % 360.0
        row = {
            "dt": int((start + timedelta(hours=i)).timestamp()),
            "temp": round(t + 273.15, 2),
            "feels_like": round(t + 273.15 + (0.08 * (rh - 70) if t > 24 else -0.3 * wind), 2),
            "pressure": round(spec.pressure_hpa + 2.0 * math.sin(2 * math.pi * i / 48.0)),
            "humidity": int(rh),
            "dew_point": round(magnus_dew_point(t, rh) + 273.15, 2),
            "clouds": 90 if spec.dry_codes[0] >= 803 or precip else 15,
            "visibility": 10000 if not precip else max(2000, int(10000 - 900 * precip)),
            "wind_speed": wind,
            "wind_deg": round(direction),
            "wind_gust": round(wind * spec.gust_factor, 1),
            "pop": 0.8 if precip else 0.05,
            "weather": [
                {"id": _rain_code(precip) if precip else spec.dry_codes[1 if 7 <= hour < 19 else 0]}
            ],
        }
        if precip:
            row["rain"] = {"1h": precip}
        rows.append(row)
    return {
        "lat": spec.lat,
        "lon": spec.lon,
        "timezone": f"Etc/GMT{-spec.utc_offset_s // 3600:+d}",
        "timezone_offset": spec.utc_offset_s,
        "hourly": rows,
    }


def _dumps(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=1).encode("utf-8")


def raw_responses(spec: CaseSpec) -> dict[str, bytes]:
    return {
        "forecast": _dumps(forecast_payload(spec)),
        "geocode": _dumps(
            [{"name": spec.city, "state": spec.state, "country": spec.country_code, "lat": spec.lat, "lon": spec.lon}]
        ),
        "elevation": _dumps({"elevation": [spec.elevation_m]}),
        "summary": _dumps({"type": "standard", "title": spec.city, "extract": spec.summary}),
        "climatology": _dumps(
            {
                "meta": {"source": "normals 1991-2020"},
                "data": [
                    {"month": m, "tmin": c[0], "tmax": c[1], "prcp": c[2]}
                    for m, c in enumerate(spec.climatology, start=1)
                ],
            }
        ),
    }


def case_meta(spec: CaseSpec, config: ServiceConfig | None = None) -> tuple[str, dict]:
    config = config or ServiceConfig()
    issued = spec.start_utc
    key = cache_key(spec.lat, spec.lon, issued, source_ids(config), HORIZON_H, "hierarchical")
    meta = {
        "inputs": {
            "lat": spec.lat,
            "lon": spec.lon,
            "horizon_h": HORIZON_H,
            "mode": "hierarchical",
            "include_hourly": False,
            "issued_at_utc": format_ts(issued),
            "strict_horizon": True,
        },
        "raw_manifest": {
            "forecast": "openweather_3.0_standard",
            "geocode": "geocode",
            "elevation": "elevation",
            "summary": "summary",
            "climatology": "meteostat_normals",
        },
        "statuses": [
            {"source": "openweather", "outcome": "ok", "attempts": 1, "detail": "geocoding"},
            {"source": "elevation", "outcome": "ok", "attempts": 1},
            {"source": "wikipedia", "outcome": "ok", "attempts": 1},
            {"source": "openweather", "outcome": "ok", "attempts": 1},
            {"source": "meteostat", "outcome": "ok", "attempts": 1, "detail": "normals"},
        ],
        "fixture": spec.name,
        "created_at": format_ts(issued),
    }
    return key, meta


def case_context(name: str) -> ForecastContext:
    spec = CASES[name]
    key, meta = case_meta(spec)
    return rebuild_context(CacheEntry(key, b"", raw_responses(spec), meta))


def seed_case(cache: FileCache, name: str, config: ServiceConfig | None = None) -> str:
    """Write the case into ``cache`` exactly as a live fetch would; returns the key."""
    spec = CASES[name]
    key, meta = case_meta(spec, config)
    raw = raw_responses(spec)
    ctx = rebuild_context(CacheEntry(key, b"", raw, meta), (config or ServiceConfig()).categorizer_thresholds())
    return cache.put(CacheEntry.build(key, ctx, raw, meta))
