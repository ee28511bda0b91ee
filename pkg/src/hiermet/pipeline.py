"""Coordinates to cached ForecastContext: concurrent fetches, context build, cache write, replay."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone

import httpx

from hiermet.cache import CacheEntry, FileCache, cache_key, floor_hour
from hiermet.categorizer import DEFAULT_THRESHOLDS, CategorizerThresholds
from hiermet.config import ServiceConfig
from hiermet.context import ModeDecision, build_context, select_mode
from hiermet.errors import SourceError
from hiermet.ingestion.climatology import climatology_from_raw, fetch_climatology
from hiermet.ingestion.location import coordinate_location, fetch_location_meta, location_from_raw
from hiermet.ingestion.openweather import fetch_hourly_forecast, parse_forecast
from hiermet.model import ForecastContext, SourceStatus, format_ts, parse_ts

log = logging.getLogger(__name__)


@dataclass
class AssembledContext:
    context: ForecastContext
    key: str
    statuses: list[SourceStatus] = field(default_factory=list)
    from_cache: bool = False


def source_ids(config: ServiceConfig) -> dict[str, str]:
    ow = config.openweather
    return {
        "forecast": f"openweather-{ow.api_version}-{ow.units}",
        "climatology": "meteostat-normals>meteostat-monthly>era5",
        "location": "openweather-geocoding+open-meteo+wikipedia",
    }


def _statuses(meta: dict) -> list[SourceStatus]:
    return [SourceStatus.from_dict(s) for s in meta.get("statuses", [])]


def assemble_context(
    lat: float,
    lon: float,
    horizon_h: int,
    requested_mode: str,
    config: ServiceConfig,
    cache: FileCache,
    *,
    client: httpx.Client | None = None,
    issued_at: datetime | None = None,
) -> AssembledContext:
    """Cache-first context for a coordinate request.

    A hit returns the stored context untouched. On a miss the three sources
    are fetched concurrently; location and climatology degrade, the forecast
    does not.
    """
    decision = select_mode(horizon_h, requested_mode)
    issued = floor_hour(issued_at or datetime.now(timezone.utc))
    key = cache_key(lat, lon, issued, source_ids(config), horizon_h, decision.mode)
    hit = cache.get(key)
    if hit is not None:
        log.info("cache hit %s", key)
        return AssembledContext(hit.context, key, _statuses(hit.meta), True)

    own_client = client is None
    client = client or httpx.Client()
    policy = config.retry.policy()
    ow = config.openweather
    point = coordinate_location(lat, lon)
    try:
        with ThreadPoolExecutor(max_workers=3) as pool:
            loc_f = pool.submit(
                fetch_location_meta, lat, lon, api_key=ow.api_key, client=client,
                geocode_url=ow.geocode_url, policy=policy,
            )
            fc_f = pool.submit(
                fetch_hourly_forecast, point, horizon_h, api_key=ow.api_key, client=client,
                version=ow.api_version, base_url=ow.base_url, units=ow.units,
                strict_horizon=config.strict_horizon, policy=policy,
            )
            clim_f = pool.submit(
                fetch_climatology, point, client=client, meteostat_key=config.meteostat.api_key,
                era5_path=config.era5_path, meteostat_url=config.meteostat.base_url, policy=policy,
            )
            statuses: list[SourceStatus] = []
            raw: dict[str, bytes] = {}
            manifest: dict[str, str] = {}
            try:
                loc_fetch = loc_f.result()
                statuses.extend(loc_fetch.statuses)
                raw.update(loc_fetch.raw)
                manifest.update({name: name for name in loc_fetch.raw})
            except SourceError as exc:
                log.warning("geocoding failed, using coordinate label: %s", exc)
                statuses.append(
                    SourceStatus("openweather", "degraded", "GEOCODE_FALLBACK_COORDS", exc.status.attempts, str(exc))
                )
            try:
                forecast = fc_f.result()
            except SourceError as exc:
                raise SourceError(str(exc), exc.status, statuses + exc.statuses) from exc
            statuses.append(forecast.status)
            raw["forecast"] = forecast.raw
            manifest["forecast"] = f"openweather_{ow.api_version}_{ow.units}"
            clim = None
            try:
                clim_fetch = clim_f.result()
                clim = clim_fetch.climatology
                statuses.extend(clim_fetch.statuses)
                raw["climatology"] = clim_fetch.raw
                manifest["climatology"] = clim_fetch.raw_kind
            except SourceError as exc:
                if not config.allow_no_climatology:
                    raise SourceError(str(exc), exc.status, statuses + exc.statuses) from exc
                log.warning("proceeding without climatology: %s", exc)
                statuses.extend(exc.statuses)
    finally:
        if own_client:
            client.close()

    inputs = {
        "lat": lat,
        "lon": lon,
        "horizon_h": horizon_h,
        "mode": decision.mode,
        "include_hourly": decision.include_hourly,
        "issued_at_utc": format_ts(issued),
        "strict_horizon": config.strict_horizon,
    }
    meta = {"inputs": inputs, "raw_manifest": manifest, "statuses": [s.to_dict() for s in statuses]}
    entry = CacheEntry(key, b"", raw, meta)
    ctx = rebuild_context(entry, config.categorizer_thresholds())
    cache.put(CacheEntry.build(key, ctx, raw, meta))
    return AssembledContext(ctx, key, statuses, False)


def rebuild_context(
    entry: CacheEntry, categorizer: CategorizerThresholds = DEFAULT_THRESHOLDS
) -> ForecastContext:
    """Context from the stored raw bodies alone; no network access."""
    inputs = entry.meta["inputs"]
    manifest = entry.meta["raw_manifest"]
    _, version, units = manifest["forecast"].split("_")
    records, offset, _ = parse_forecast(
        entry.raw_responses["forecast"], version, units, inputs["horizon_h"], inputs.get("strict_horizon", True)
    )
    lat, lon = inputs["lat"], inputs["lon"]
    loc = location_from_raw(lat, lon, entry.raw_responses, offset)
    loc = replace(loc, utc_offset_s=offset)
    clim = None
    if "climatology" in manifest:
        clim = climatology_from_raw(manifest["climatology"], entry.raw_responses["climatology"])
    decision = ModeDecision(inputs["mode"], inputs["include_hourly"])
    return build_context(
        loc, clim, records, decision, inputs["horizon_h"], parse_ts(inputs["issued_at_utc"]), categorizer
    )


def describe_entry(entry: CacheEntry) -> str:
    inputs = entry.meta.get("inputs", {})
    return json.dumps({"key": entry.key, **inputs}, sort_keys=True)
