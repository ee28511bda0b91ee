"""Monthly climatology: Meteostat first, then a packaged ERA5 0.25° grid file."""

from __future__ import annotations

import csv
import json
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

import httpx

from hiermet.errors import SourceError
from hiermet.ingestion.http import RetryPolicy, get_with_retry
from hiermet.model import ClimatologyMonth, GeoLocation, MonthlyClimatology, SourceStatus

log = logging.getLogger(__name__)

METEOSTAT_URL = "https://meteostat.p.rapidapi.com"
ERA5_STEP_DEG = 0.25
EARTH_RADIUS_KM = 6371.0088
AGGREGATE_YEARS = 10


def haversine_km(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dp, dl = p2 - p1, math.radians(lon2 - lon1)
    a = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2 * EARTH_RADIUS_KM * math.asin(math.sqrt(a))


def surrounding_cells(lat: float, lon: float, step: float = ERA5_STEP_DEG) -> list[tuple[float, float]]:
    """The four grid-cell centres enclosing the point (fewer when it sits on a grid line)."""
    lat0 = math.floor(lat / step) * step
    lon0 = math.floor(lon / step) * step
    cells = {(round(a, 6), round(b, 6)) for a in (lat0, lat0 + step) for b in (lon0, lon0 + step)}
    return sorted(c for c in cells if -90 <= c[0] <= 90)


def nearest_cell(lat: float, lon: float, available: set[tuple[float, float]] | None = None) -> tuple[float, float]:
    cells = [c for c in surrounding_cells(lat, lon) if available is None or c in available]
    if not cells:
        raise LookupError(f"no ERA5 cell around ({lat}, {lon})")
    return min(cells, key=lambda c: (haversine_km(lat, lon, *c), c))


def _complete(months: dict[int, ClimatologyMonth]) -> MonthlyClimatology | None:
    if sorted(months) != list(range(1, 13)):
        return None
    return MonthlyClimatology("meteostat", tuple(months[m] for m in range(1, 13)))


def parse_meteostat_normals(body: bytes) -> MonthlyClimatology | None:
    """Normals payload to 12 months, or None when any month is incomplete."""
    months = {}
    for row in json.loads(body).get("data") or []:
        if None in (row.get("tmin"), row.get("tmax"), row.get("prcp")):
            continue
        m = int(row["month"])
        months[m] = ClimatologyMonth(m, float(row["tmin"]), float(row["tmax"]), float(row["prcp"]))
    return _complete(months)


def parse_meteostat_monthly(body: bytes) -> MonthlyClimatology | None:
    """Mean of monthly aggregates per calendar month; None if a month has no complete year."""
    buckets: dict[int, list[tuple[float, float, float]]] = defaultdict(list)
    for row in json.loads(body).get("data") or []:
        if None in (row.get("tmin"), row.get("tmax"), row.get("prcp")):
            continue
        m = int(str(row["date"])[5:7])
        buckets[m].append((float(row["tmin"]), float(row["tmax"]), float(row["prcp"])))
    months = {
        m: ClimatologyMonth(
            m,
            round(math.fsum(r[0] for r in rows) / len(rows), 2),
            round(math.fsum(r[1] for r in rows) / len(rows), 2),
            round(math.fsum(r[2] for r in rows) / len(rows), 1),
        )
        for m, rows in buckets.items()
    }
    return _complete(months)


def read_era5_cell(path: str | Path, lat: float, lon: float) -> tuple[tuple[float, float], list[dict[str, str]]]:
    """Rows of the nearest complete cell in a CSV with lat, lon, month, t_min_c, t_max_c, precip_total_mm."""
    wanted = set(surrounding_cells(lat, lon))
    rows: dict[tuple[float, float], list[dict[str, str]]] = defaultdict(list)
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            cell = (round(float(row["lat"]), 6), round(float(row["lon"]), 6))
            if cell in wanted:
                rows[cell].append(row)
    complete = {c for c, rs in rows.items() if sorted(int(r["month"]) for r in rs) == list(range(1, 13))}
    cell = nearest_cell(lat, lon, complete)
    return cell, sorted(rows[cell], key=lambda r: int(r["month"]))


def parse_era5_rows(body: bytes) -> MonthlyClimatology:
    rows = json.loads(body)["rows"]
    months = tuple(
        ClimatologyMonth(int(r["month"]), float(r["t_min_c"]), float(r["t_max_c"]), float(r["precip_total_mm"]))
        for r in rows
    )
    return MonthlyClimatology("era5_fallback", months)


def climatology_from_raw(kind: str, body: bytes) -> MonthlyClimatology:
    parsers = {"meteostat_normals": parse_meteostat_normals, "meteostat_monthly": parse_meteostat_monthly}
    if kind == "era5":
        return parse_era5_rows(body)
    clim = parsers[kind](body)
    if clim is None:
        raise ValueError(f"stored {kind} payload is incomplete")
    return MonthlyClimatology("meteostat", clim.months)


@dataclass
class ClimatologyFetch:
    climatology: MonthlyClimatology
    statuses: list[SourceStatus]
    raw_kind: str
    raw: bytes = field(repr=False)


def _try_meteostat(
    loc: GeoLocation, api_key: str | None, client: httpx.Client, base_url: str, policy: RetryPolicy, today: date
) -> tuple[str, bytes, int] | tuple[None, str, int]:
    params = {"lat": loc.latitude, "lon": loc.longitude}
    if loc.elevation_m is not None:
        params["alt"] = round(loc.elevation_m)
    headers = {"x-rapidapi-key": api_key} if api_key else None
    attempts = 0
    normals = get_with_retry(
        client, f"{base_url}/point/normals", {**params, "start": 1991, "end": 2020}, policy, headers
    )
    attempts += normals.attempts
    if not normals.ok:
        # Service unreachable: asking for monthly aggregates would only repeat the failure.
        return None, normals.error or "normals request failed", attempts
    if parse_meteostat_normals(normals.response.content) is not None:
        return "meteostat_normals", normals.response.content, attempts
    end_year = today.year - 1
    span = {"start": f"{end_year - AGGREGATE_YEARS + 1}-01-01", "end": f"{end_year}-12-31"}
    monthly = get_with_retry(client, f"{base_url}/point/monthly", {**params, **span}, policy, headers)
    attempts += monthly.attempts
    if monthly.ok and parse_meteostat_monthly(monthly.response.content) is not None:
        return "meteostat_monthly", monthly.response.content, attempts
    reason = monthly.error or "incomplete months"
    return None, reason, attempts


def fetch_climatology(
    loc: GeoLocation,
    *,
    client: httpx.Client,
    meteostat_key: str | None = None,
    era5_path: str | Path | None = None,
    meteostat_url: str = METEOSTAT_URL,
    policy: RetryPolicy = RetryPolicy(),
    today: date | None = None,
) -> ClimatologyFetch:
    """Meteostat normals, then 10-year monthly means, then the ERA5 file.

    The ERA5 file is only opened when Meteostat cannot supply 12 complete
    months.
    """
    kind, payload, attempts = _try_meteostat(loc, meteostat_key, client, meteostat_url, policy, today or date.today())
    if kind is not None:
        status = SourceStatus("meteostat", "ok", attempts=attempts, detail=kind.split("_")[1])
        return ClimatologyFetch(climatology_from_raw(kind, payload), [status], kind, payload)
    meteo_status = SourceStatus("meteostat", "failed", attempts=attempts, detail=str(payload))
    log.warning("Meteostat unavailable (%s); trying ERA5 fallback", payload)
    if era5_path is None:
        era_status = SourceStatus("era5_fallback", "failed", detail="no ERA5 file configured")
        raise SourceError("climatology unavailable", era_status, [meteo_status, era_status])
    try:
        cell, rows = read_era5_cell(era5_path, loc.latitude, loc.longitude)
    except (OSError, LookupError, KeyError, ValueError) as exc:
        era_status = SourceStatus("era5_fallback", "failed", attempts=1, detail=str(exc))
        raise SourceError(f"climatology unavailable: {exc}", era_status, [meteo_status, era_status]) from exc
    body = json.dumps({"cell": list(cell), "rows": rows}, sort_keys=True).encode("utf-8")
    detail = f"nearest cell {cell[0]:.2f}, {cell[1]:.2f}"
    status = SourceStatus("era5_fallback", "degraded", "CLIM_FALLBACK_ERA5", 1, detail)
    return ClimatologyFetch(parse_era5_rows(body), [meteo_status, status], "era5", body)
