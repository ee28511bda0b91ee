import json
from datetime import date, datetime, timezone
from pathlib import Path

import httpx
import pytest

from hiermet.cases import CASES, raw_responses
from hiermet.errors import GridError, NormalizationError, SourceError
from hiermet.ingestion import climatology as clim_mod
from hiermet.ingestion.climatology import (
    fetch_climatology,
    haversine_km,
    nearest_cell,
    parse_meteostat_monthly,
    read_era5_cell,
    surrounding_cells,
)
from hiermet.ingestion.http import RetryPolicy, get_with_retry
from hiermet.ingestion.location import (
    coordinate_label,
    coordinate_location,
    country_name,
    fetch_location_meta,
    looks_coastal,
)
from hiermet.ingestion.openweather import (
    fetch_hourly_forecast,
    magnus_dew_point,
    normalize_hourly,
    parse_forecast,
)

from helpers import Router, live_routes, timeout

ERA5 = Path(__file__).parent / "data" / "era5_sample.csv"
FAST = RetryPolicy(attempts=3, backoff_s=0.0, sleep=lambda s: None)
DT0 = int(datetime(2025, 10, 20, tzinfo=timezone.utc).timestamp())


def row(i=0, **kw):
    base = {
        "dt": DT0 + 3600 * i,
        "temp": 288.15,
        "feels_like": 287.0,
        "humidity": 80,
        "dew_point": 284.8,
        "wind_speed": 4.2,
        "wind_deg": 200,
        "weather": [{"id": 803}],
    }
    base.update(kw)
    return base


# -- normalization ----------------------------------------------------------------


def test_kelvin_to_celsius():
    (rec,) = normalize_hourly([row()])
    assert rec.t_c == 15.0
    assert rec.t_feel_c == 13.85


def test_north_wraps_to_zero():
    (rec,) = normalize_hourly([row(wind_deg=360)])
    assert rec.wind_dir_deg == 0.0


def test_missing_optionals_stay_absent():
    (rec,) = normalize_hourly([row()])
    assert rec.visibility_m is None and rec.gust_ms is None and rec.pressure_hpa is None


def test_dry_hour_is_imputed_and_rain_is_not():
    dry, wet = normalize_hourly([row(0), row(1, rain={"1h": 2.34}, snow={"1h": 0.5})])
    assert dry.precip_mm == 0.0 and dry.precip_imputed
    assert wet.precip_mm == 2.8 and not wet.precip_imputed


def test_metric_and_imperial_units():
    (m,) = normalize_hourly([row(temp=15.0, feels_like=14.0, dew_point=10.0)], units="metric")
    assert m.t_c == 15.0
    (i,) = normalize_hourly([row(temp=59.0, feels_like=57.2, dew_point=50.0, wind_speed=10)], units="imperial")
    assert i.t_c == 15.0 and i.wind_ms == 4.5


def test_version_25_derives_dew_point():
    rows = [{
        "dt": DT0, "main": {"temp": 293.15, "feels_like": 293.0, "humidity": 50, "pressure": 1015},
        "wind": {"speed": 3.0, "deg": 90}, "weather": [{"id": 800}], "visibility": 10000,
    }]
    (rec,) = normalize_hourly({"list": rows}, version="2.5")
    assert rec.dew_point_c == round(magnus_dew_point(20.0, 50.0), 2) == 9.26
    assert rec.pressure_hpa == 1015.0 and rec.visibility_m == 10000.0


def test_normalization_error_names_index_and_field():
    with pytest.raises(NormalizationError) as err:
        normalize_hourly([row(0), row(1, temp="warm")])
    assert (err.value.index, err.value.field) == (1, "temp")
    with pytest.raises(NormalizationError) as err:
        normalize_hourly([row(0, humidity=130)])
    assert err.value.field == "humidity"


def test_gap_in_grid_is_rejected():
    with pytest.raises(GridError):
        normalize_hourly([row(0), row(2)])


# -- forecast fetch -----------------------------------------------------------------


def forecast_body(n):
    return json.dumps({"timezone_offset": 3600, "hourly": [row(i) for i in range(n)]}).encode()


def test_forecast_truncated_to_horizon():
    router = Router({"onecall": httpx.Response(200, content=forecast_body(240))})
    loc = coordinate_location(51.9, -8.47)
    fetch = fetch_hourly_forecast(loc, 120, api_key="k", client=router.client(), policy=FAST)
    assert len(fetch.records) == 120
    assert fetch.utc_offset_s == 3600
    assert fetch.status.outcome == "ok"
    assert router.calls[0].url.params["appid"] == "k"


def test_short_forecast_strict_and_lenient():
    body = forecast_body(96)
    with pytest.raises(GridError):
        parse_forecast(body, "3.0", "standard", 120, strict_horizon=True)
    records, _, status = parse_forecast(body, "3.0", "standard", 120, strict_horizon=False)
    assert len(records) == 96
    assert status.degradation_code == "FORECAST_SHORT_HORIZON"


def test_forecast_failure_raises_source_error():
    router = Router({"onecall": httpx.Response(503)})
    with pytest.raises(SourceError) as err:
        fetch_hourly_forecast(coordinate_location(0, 0), 24, api_key=None, client=router.client(), policy=FAST)
    assert err.value.status.outcome == "failed"
    assert router.count("onecall") == 3


# -- retries ------------------------------------------------------------------------


def test_retry_bounded_with_backoff():
    sleeps = []
    policy = RetryPolicy(attempts=4, backoff_s=0.5, sleep=sleeps.append)
    router = Router({"x": timeout})
    result = get_with_retry(router.client(), "https://x.test/a", policy=policy)
    assert not result.ok and result.attempts == 4
    assert sleeps == [0.5, 1.0, 2.0]


def test_no_retry_on_client_error():
    router = Router({"x": httpx.Response(401)})
    result = get_with_retry(router.client(), "https://x.test/a", policy=FAST)
    assert result.attempts == 1 and not result.ok


def test_recovers_after_server_error():
    answers = iter([httpx.Response(500), httpx.Response(200, json={})])
    router = Router({"x": lambda r: next(answers)})
    result = get_with_retry(router.client(), "https://x.test/a", policy=FAST)
    assert result.ok and result.attempts == 2


# -- location -------------------------------------------------------------------------


def test_location_cork_and_manila():
    for case, country in (("cork", "Ireland"), ("manila", "Philippines")):
        spec = CASES[case]
        router = Router(live_routes(case))
        fetch = fetch_location_meta(spec.lat, spec.lon, api_key="k", client=router.client(), policy=FAST)
        assert fetch.location.city == spec.city
        assert fetch.location.country == country
        assert fetch.location.elevation_m == spec.elevation_m
        assert [s.outcome for s in fetch.statuses] == ["ok", "ok", "ok"]


def test_country_names():
    assert country_name("VN") == "Vietnam"
    assert country_name("IE") == "Ireland"
    assert country_name("") == ""


def test_coordinates_checked():
    with pytest.raises(ValueError):
        fetch_location_meta(95, 0, api_key=None, client=Router({}).client())
    assert coordinate_label(16.0472, 108.2199) == "16.05°N, 108.22°E"
    assert coordinate_label(-33.9, -70.6) == "33.90°S, 70.60°W"


def test_wikipedia_failure_degrades():
    routes = live_routes("cork")
    routes["wikipedia"] = httpx.Response(404)
    fetch = fetch_location_meta(51.8985, -8.4756, api_key="k", client=Router(routes).client(), policy=FAST)
    assert fetch.location.description is None
    assert fetch.statuses[-1].degradation_code == "DESCRIPTION_MISSING"


def test_disambiguation_page_counts_as_missing():
    routes = live_routes("cork")
    routes["wikipedia"] = httpx.Response(200, json={"type": "disambiguation", "extract": "Cork may refer to"})
    fetch = fetch_location_meta(51.8985, -8.4756, api_key="k", client=Router(routes).client(), policy=FAST)
    assert fetch.location.description is None


def test_geocode_failure_raises():
    routes = live_routes("cork")
    routes["geo/1.0/reverse"] = httpx.Response(200, json=[])
    with pytest.raises(SourceError):
        fetch_location_meta(51.8985, -8.4756, api_key="k", client=Router(routes).client(), policy=FAST)


def test_coastal_hint():
    assert looks_coastal("A port city on the south coast.") is True
    assert looks_coastal("An inland market town.") is False
    assert looks_coastal(None) is None


# -- climatology --------------------------------------------------------------------------


DANANG = coordinate_location(16.0472, 108.22)


def test_meteostat_normals():
    router = Router(live_routes("danang"))
    fetch = fetch_climatology(DANANG, client=router.client(), meteostat_key="m", policy=FAST)
    assert fetch.climatology.source == "meteostat"
    assert fetch.climatology.month(10).precip_total_mm == CASES["danang"].climatology[9][2]
    assert router.calls[0].headers["x-rapidapi-key"] == "m"


def test_meteostat_timeouts_fall_back_to_era5():
    router = Router({"point/": timeout})
    fetch = fetch_climatology(DANANG, client=router.client(), era5_path=ERA5, policy=FAST)
    assert router.count("point/normals") == 3
    assert router.count("point/monthly") == 0
    assert fetch.climatology.source == "era5_fallback"
    assert fetch.statuses[0].outcome == "failed"
    assert fetch.statuses[1].degradation_code == "CLIM_FALLBACK_ERA5"
    assert fetch.statuses[1].detail == "nearest cell 16.00, 108.25"


def test_both_climatology_sources_fail():
    router = Router({"point/": httpx.Response(500)})
    with pytest.raises(SourceError) as err:
        fetch_climatology(DANANG, client=router.client(), era5_path=None, policy=FAST)
    assert [s.source for s in err.value.statuses] == ["meteostat", "era5_fallback"]


def test_incomplete_normals_use_monthly_aggregates():
    normals = {"data": [{"month": m, "tmin": 20, "tmax": 28, "prcp": None if m == 2 else 50} for m in range(1, 13)]}
    monthly = {"data": [
        {"date": f"{y}-{m:02d}-01", "tmin": 20 + y % 2, "tmax": 28, "prcp": 40 + y % 2}
        for y in range(2015, 2025) for m in range(1, 13)
    ]}
    router = Router({
        "point/normals": httpx.Response(200, json=normals),
        "point/monthly": httpx.Response(200, json=monthly),
    })
    fetch = fetch_climatology(DANANG, client=router.client(), policy=FAST, today=date(2025, 10, 20))
    assert fetch.raw_kind == "meteostat_monthly"
    assert fetch.climatology.month(2).t_min_c == 20.5
    assert router.calls[1].url.params["start"] == "2015-01-01"


def test_monthly_parser_needs_every_month():
    body = json.dumps({"data": [{"date": "2020-01-01", "tmin": 1, "tmax": 5, "prcp": 10}]}).encode()
    assert parse_meteostat_monthly(body) is None


def test_era5_not_opened_when_normals_complete(monkeypatch):
    def boom(*a, **k):
        raise AssertionError("ERA5 file opened")

    monkeypatch.setattr(clim_mod, "read_era5_cell", boom)
    router = Router(live_routes("danang"))
    fetch_climatology(DANANG, client=router.client(), era5_path=ERA5, policy=FAST)


def test_nearest_cell():
    assert nearest_cell(16.0472, 108.22) == (16.0, 108.25)
    assert surrounding_cells(16.0472, 108.22) == [(16.0, 108.0), (16.0, 108.25), (16.25, 108.0), (16.25, 108.25)]
    cell, rows = read_era5_cell(ERA5, 16.2, 108.24)
    # (16.25, 108.25) is closer but lacks July
    assert cell == (16.0, 108.25)
    assert len(rows) == 12
    assert haversine_km(0, 0, 0, 1) == pytest.approx(111.195, abs=1e-3)
