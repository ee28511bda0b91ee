"""Rule-based weather category per forecast hour.

The provider condition code decides the phenomenon (thunderstorm, snow,
drizzle, fog, cloud cover); precipitation amount refines rain intensity.
Codes follow the OpenWeather condition groups (2xx thunderstorm, 3xx
drizzle, 5xx rain, 6xx snow, 7xx atmosphere, 800 clear, 80x clouds).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from hiermet.model import HourlyRecord

CATEGORIES = (
    "clear",
    "partly_cloudy",
    "overcast",
    "light_rain",
    "rain",
    "heavy_rain",
    "snow",
    "thunderstorm",
    "fog",
    "drizzle",
)

# Highest priority first; also breaks ties when picking a window's dominant category.
PRIORITY = (
    "thunderstorm",
    "snow",
    "heavy_rain",
    "rain",
    "drizzle",
    "light_rain",
    "fog",
    "overcast",
    "partly_cloudy",
    "clear",
)

FOG_CODES = frozenset({741})


@dataclass(frozen=True)
class CategorizerThresholds:
    heavy_rain_mm_h: float = 4.0
    rain_mm_h: float = 1.0
    fog_visibility_m: float = 1000.0


DEFAULT_THRESHOLDS = CategorizerThresholds()


def categorize_hour(rec: HourlyRecord, thresholds: CategorizerThresholds = DEFAULT_THRESHOLDS) -> str:
    code = rec.condition
    group = code // 100
    precip = rec.precip_mm
    if group == 2:
        return "thunderstorm"
    if group == 6:
        return "snow"
    if precip >= thresholds.heavy_rain_mm_h:
        return "heavy_rain"
    if precip >= thresholds.rain_mm_h:
        return "rain"
    if group == 3:
        return "drizzle"
    if precip > 0 or group == 5:
        return "light_rain"
    if code in FOG_CODES or (
        rec.visibility_m is not None and rec.visibility_m < thresholds.fog_visibility_m
    ):
        return "fog"
    if code in (803, 804):
        return "overcast"
    if code in (801, 802):
        return "partly_cloudy"
    return "clear"


def assign_categories(
    records: Iterable[HourlyRecord], thresholds: CategorizerThresholds = DEFAULT_THRESHOLDS
) -> tuple[HourlyRecord, ...]:
    return tuple(replace(r, category=categorize_hour(r, thresholds)) for r in records)


def dominant_category(counts: Mapping[str, int]) -> str | None:
    """Most frequent category in a window; ties go to the higher-priority one.

    Window-level categories are an extension, not part of the hourly rules.
    """
    if not counts:
        return None
    return max(PRIORITY, key=lambda c: (counts.get(c, 0), -PRIORITY.index(c)))
