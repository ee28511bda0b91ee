"""Non-overlapping 6-hour and daily aggregates of an hourly forecast table."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Sequence

from hiermet.errors import GridError
from hiermet.model import HourlyRecord, WindowAggregate

EPS_DIR = 0.1
_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


@dataclass(frozen=True)
class WindowSpec:
    width_h: int = 6
    alignment: str = "local_midnight"

    def __post_init__(self) -> None:
        if self.width_h <= 0 or 24 % self.width_h:
            raise ValueError(f"window width {self.width_h} h does not divide 24")
        if self.alignment not in ("local_midnight", "first_timestamp"):
            raise ValueError(f"unknown alignment {self.alignment!r}")


SIX_HOUR = WindowSpec(6)
DAILY = WindowSpec(24)


@dataclass(frozen=True)
class CircularMean:
    """Mean direction in [0, 360), or None when the resultant is too short."""

    angle: float | None
    r: float

    @property
    def defined(self) -> bool:
        return self.angle is not None


def circular_mean_deg(
    angles: Sequence[float], weights: Sequence[float] | None = None, eps: float = EPS_DIR
) -> CircularMean:
    if len(angles) == 0:
        raise ValueError("circular mean of an empty set of angles")
    if weights is None:
        weights = [1.0] * len(angles)
    elif len(weights) != len(angles):
        raise ValueError("weights and angles differ in length")
    total = math.fsum(weights)
    if total <= 0:
        raise ValueError("weights must sum to a positive value")
    s = math.fsum(w * math.sin(math.radians(a)) for a, w in zip(angles, weights)) / total
    c = math.fsum(w * math.cos(math.radians(a)) for a, w in zip(angles, weights)) / total
    r = math.hypot(s, c)
    if r < eps:
        return CircularMean(None, r)
    # Rounding at 1e-9 deg removes sign noise around north so {350, 10} gives 0.0.
    angle = round(math.degrees(math.atan2(s, c)), 9) % 360.0
    if angle >= 360.0:
        angle = 0.0
    return CircularMean(angle, r)


def circular_distance_deg(a: float, b: float) -> float:
    d = abs(a - b) % 360.0
    return min(d, 360.0 - d)


def check_grid(table: Sequence[HourlyRecord]) -> None:
    for i in range(1, len(table)):
        if table[i].ts_utc - table[i - 1].ts_utc != timedelta(hours=1):
            raise GridError(f"non-contiguous hourly grid at record {i}")


def partition_windows(
    table: Sequence[HourlyRecord], spec: WindowSpec, utc_offset_s: int = 0
) -> list[tuple[datetime, list[HourlyRecord]]]:
    """Split a verified hourly table into disjoint, time-ordered windows.

    Windows start on local multiples of the width (``local_midnight``) or on
    multiples counted from the first record (``first_timestamp``). Edge
    windows may hold fewer hours than the width.
    """
    if not table:
        raise ValueError("cannot partition an empty hourly table")
    check_grid(table)
    width_s = spec.width_h * 3600
    if spec.alignment == "local_midnight":
        origin = _EPOCH - timedelta(seconds=utc_offset_s)
    else:
        origin = table[0].ts_utc
    windows: list[tuple[datetime, list[HourlyRecord]]] = []
    current_key: int | None = None
    for rec in table:
        key = int((rec.ts_utc - origin).total_seconds() // width_s)
        if key != current_key:
            windows.append((origin + timedelta(seconds=key * width_s), []))
            current_key = key
        windows[-1][1].append(rec)
    return windows


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def _bounded_mean(values: Sequence[float]) -> float:
    # fsum/n can overshoot the extremes by one ulp.
    return min(max(_mean(values), min(values)), max(values))


def aggregate_window(
    start: datetime, members: Sequence[HourlyRecord], width_h: int, eps: float = EPS_DIR
) -> WindowAggregate:
    temps = [r.t_c for r in members]
    winds = [r.wind_ms for r in members]
    rhs = [r.rh_pct for r in members]
    dews = [r.dew_point_c for r in members]
    gusts = [r.gust_ms for r in members if r.gust_ms is not None]
    vis = [r.visibility_m for r in members if r.visibility_m is not None]
    pressure = [r.pressure_hpa for r in members if r.pressure_hpa is not None]
    categories = Counter(r.category for r in members if r.category is not None)

    direction = None
    r_len = None
    if width_h < 24:
        cm = circular_mean_deg([r.wind_dir_deg for r in members], eps=eps)
        direction, r_len = cm.angle, cm.r

    return WindowAggregate(
        window_start_utc=start,
        window_len_h=width_h,
        n_hours=len(members),
        partial=len(members) < width_h,
        t_mean_c=_bounded_mean(temps),
        t_max_c=max(temps),
        t_min_c=min(temps),
        rh_mean_pct=_bounded_mean(rhs),
        wind_mean_ms=_bounded_mean(winds),
        precip_sum_mm=math.fsum(r.precip_mm for r in members),
        dew_point_mean_c=_bounded_mean(dews),
        wind_max_ms=max(winds),
        gust_max_ms=max(gusts) if gusts else None,
        wind_dir_mean_deg=direction,
        wind_dir_r=r_len,
        visibility_mean_m=_bounded_mean(vis) if vis else None,
        pressure_mean_hpa=_bounded_mean(pressure) if pressure else None,
        categories=dict(sorted(categories.items())),
    )


def aggregate_six_hour(
    table: Sequence[HourlyRecord],
    spec: WindowSpec = SIX_HOUR,
    utc_offset_s: int = 0,
    eps: float = EPS_DIR,
) -> list[WindowAggregate]:
    if spec.width_h == 24:
        raise ValueError("use aggregate_daily for 24 h windows")
    return [
        aggregate_window(start, members, spec.width_h, eps)
        for start, members in partition_windows(table, spec, utc_offset_s)
    ]


def aggregate_daily(
    table: Sequence[HourlyRecord], spec: WindowSpec = DAILY, utc_offset_s: int = 0
) -> list[WindowAggregate]:
    """Daily windows; these never carry a mean wind direction."""
    if spec.width_h != 24:
        raise ValueError("daily aggregation needs a 24 h window spec")
    return [
        aggregate_window(start, members, 24)
        for start, members in partition_windows(table, spec, utc_offset_s)
    ]


def least_squares_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    n = len(xs)
    if n < 2 or n != len(ys):
        raise ValueError("slope needs at least two paired points")
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise ValueError("slope undefined for identical x values")
    return math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
