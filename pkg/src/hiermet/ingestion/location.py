"""Location metadata: reverse geocoding, elevation and an encyclopedia summary."""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from typing import Any
from urllib.parse import quote

import httpx
import pycountry

from hiermet.errors import SourceError
from hiermet.ingestion.http import RetryPolicy, get_with_retry
from hiermet.model import GeoLocation, SourceStatus

log = logging.getLogger(__name__)

GEOCODE_URL = "https://api.openweathermap.org/geo/1.0/reverse"
ELEVATION_URL = "https://api.open-meteo.com/v1/elevation"
WIKIPEDIA_URL = "https://en.wikipedia.org/api/rest_v1/page/summary/"

_COASTAL = re.compile(r"\b(coast\w*|seaport|port city|harbou?r|bay|estuary|seaside|on the sea|gulf)\b", re.I)


def check_coordinates(lat: float, lon: float) -> None:
    if not -90.0 <= lat <= 90.0:
        raise ValueError(f"latitude {lat} outside [-90, 90]")
    if not -180.0 <= lon <= 180.0:
        raise ValueError(f"longitude {lon} outside [-180, 180]")


def coordinate_label(lat: float, lon: float) -> str:
    """'16.05°N, 108.22°E' style label used when geocoding fails."""
    ns = "N" if lat >= 0 else "S"
    ew = "E" if lon >= 0 else "W"
    return f"{abs(lat):.2f}°{ns}, {abs(lon):.2f}°{ew}"


def coordinate_location(lat: float, lon: float, utc_offset_s: int = 0) -> GeoLocation:
    check_coordinates(lat, lon)
    return GeoLocation(coordinate_label(lat, lon), "", "", lat, lon, utc_offset_s)


def country_name(code: str) -> str:
    entry = pycountry.countries.get(alpha_2=code.upper()) if code else None
    if entry is None:
        return code
    return getattr(entry, "common_name", None) or entry.name


def looks_coastal(text: str | None) -> bool | None:
    if not text:
        return None
    return bool(_COASTAL.search(text))


def parse_geocode(body: bytes) -> dict[str, str]:
    rows = json.loads(body)
    if not rows:
        raise ValueError("reverse geocoding returned no place")
    top = rows[0]
    return {
        "city": top["name"],
        "region": top.get("state", ""),
        "country": country_name(top.get("country", "")),
    }


def parse_elevation(body: bytes) -> float:
    return float(json.loads(body)["elevation"][0])


def parse_summary(body: bytes) -> str | None:
    data = json.loads(body)
    if data.get("type") == "disambiguation":
        return None
    text = (data.get("extract") or "").strip()
    return text or None


@dataclass
class LocationFetch:
    location: GeoLocation
    statuses: list[SourceStatus]
    raw: dict[str, bytes] = field(default_factory=dict)


def assemble_location(
    lat: float,
    lon: float,
    geocode: bytes,
    elevation: bytes | None = None,
    summary: bytes | None = None,
    utc_offset_s: int = 0,
) -> GeoLocation:
    """Pure assembly from stored response bodies (used both live and on replay)."""
    place = parse_geocode(geocode)
    description = parse_summary(summary) if summary is not None else None
    return GeoLocation(
        city=place["city"],
        region=place["region"],
        country=place["country"],
        latitude=lat,
        longitude=lon,
        utc_offset_s=utc_offset_s,
        elevation_m=parse_elevation(elevation) if elevation is not None else None,
        description=description,
        coastal=looks_coastal(description),
    )


def fetch_location_meta(
    lat: float,
    lon: float,
    *,
    api_key: str | None,
    client: httpx.Client,
    geocode_url: str = GEOCODE_URL,
    elevation_url: str = ELEVATION_URL,
    wikipedia_url: str = WIKIPEDIA_URL,
    policy: RetryPolicy = RetryPolicy(),
) -> LocationFetch:
    """Geocode, then enrich; only the geocoding step can fail the call."""
    check_coordinates(lat, lon)
    geo = get_with_retry(client, geocode_url, {"lat": lat, "lon": lon, "limit": 1, "appid": api_key or ""}, policy)
    try:
        if not geo.ok:
            raise ValueError(geo.error)
        place = parse_geocode(geo.response.content)
    except (ValueError, KeyError, TypeError) as exc:
        status = SourceStatus("openweather", "failed", attempts=geo.attempts, detail=f"geocoding: {exc}")
        raise SourceError(f"reverse geocoding failed: {exc}", status) from exc
    raw = {"geocode": geo.response.content}
    statuses = [SourceStatus("openweather", "ok", attempts=geo.attempts, detail="geocoding")]

    elev = get_with_retry(client, elevation_url, {"latitude": lat, "longitude": lon}, policy)
    try:
        if not elev.ok:
            raise ValueError(elev.error)
        parse_elevation(elev.response.content)
        raw["elevation"] = elev.response.content
        statuses.append(SourceStatus("elevation", "ok", attempts=elev.attempts))
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        statuses.append(SourceStatus("elevation", "degraded", "ELEVATION_MISSING", elev.attempts, str(exc)))

    wiki = get_with_retry(client, wikipedia_url + quote(place["city"].replace(" ", "_")), None, policy)
    try:
        if not wiki.ok:
            raise ValueError(wiki.error)
        if parse_summary(wiki.response.content) is None:
            raise ValueError("no usable summary")
        raw["summary"] = wiki.response.content
        statuses.append(SourceStatus("wikipedia", "ok", attempts=wiki.attempts))
    except (ValueError, KeyError, TypeError) as exc:
        log.info("no encyclopedia description for %s: %s", place["city"], exc)
        statuses.append(SourceStatus("wikipedia", "degraded", "DESCRIPTION_MISSING", wiki.attempts, str(exc)))

    loc = assemble_location(lat, lon, raw["geocode"], raw.get("elevation"), raw.get("summary"))
    return LocationFetch(loc, statuses, raw)


def location_from_raw(lat: float, lon: float, raw: dict[str, Any], utc_offset_s: int) -> GeoLocation:
    if "geocode" not in raw:
        return coordinate_location(lat, lon, utc_offset_s)
    return assemble_location(lat, lon, raw["geocode"], raw.get("elevation"), raw.get("summary"), utc_offset_s)
