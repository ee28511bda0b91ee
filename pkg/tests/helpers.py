"""Random but physically consistent inputs shared by the property suites."""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

from hiermet.context import build_context, select_mode
from hiermet.model import ClimatologyMonth, ForecastContext, GeoLocation, HourlyRecord, MonthlyClimatology

CODES = (800, 801, 802, 803, 804, 500, 501, 502, 300, 741, 200, 600)


def random_record(rng: random.Random, ts: datetime) -> HourlyRecord:
    t = round(rng.uniform(-10, 35), 2)
    code = rng.choice(CODES)
    wet = code // 100 in (2, 3, 5, 6)
    precip = round(rng.uniform(0.1, 8.0), 1) if wet else 0.0
    wind = round(rng.uniform(0, 14), 1)
    return HourlyRecord(
        ts_utc=ts,
        condition=code,
        t_c=t,
        t_feel_c=round(t - rng.uniform(0, 3), 2),
        dew_point_c=round(t - rng.uniform(0, 12), 2),
        rh_pct=float(rng.randint(20, 100)),
        wind_ms=wind,
        wind_dir_deg=round(rng.uniform(0, 359.9), 1),
        precip_mm=precip,
        gust_ms=round(wind * rng.uniform(1.0, 1.8), 1) if rng.random() < 0.8 else None,
        visibility_m=float(rng.randint(200, 10000)) if rng.random() < 0.7 else None,
        pressure_hpa=round(rng.uniform(980, 1035), 1) if rng.random() < 0.5 else None,
        precip_imputed=not wet,
    )


def random_table(rng: random.Random, n: int, start: datetime | None = None) -> list[HourlyRecord]:
    if start is None:
        start = datetime(2025, 1, 1, tzinfo=timezone.utc) + timedelta(hours=rng.randint(0, 24 * 300))
    return [random_record(rng, start + timedelta(hours=i)) for i in range(n)]


def random_climatology(rng: random.Random) -> MonthlyClimatology:
    months = []
    for m in range(1, 13):
        lo = round(rng.uniform(-5, 22), 1)
        months.append(ClimatologyMonth(m, lo, round(lo + rng.uniform(4, 12), 1), round(rng.uniform(5, 400), 1)))
    return MonthlyClimatology("meteostat", tuple(months))


def random_context(rng: random.Random, horizon_h: int | None = None, mode: str = "auto") -> ForecastContext:
    h = horizon_h or rng.randint(24, 240)
    offset = rng.choice((-5, 0, 1, 3, 5.5, 7, 8, 10)) * 3600
    loc = GeoLocation(
        city=f"Town{rng.randint(1, 999)}",
        region="",
        country="Testland",
        latitude=round(rng.uniform(-60, 60), 4),
        longitude=round(rng.uniform(-179, 179), 4),
        utc_offset_s=int(offset),
        coastal=rng.random() < 0.5,
    )
    table = random_table(rng, h)
    issued = table[0].ts_utc - timedelta(hours=1)
    return build_context(loc, random_climatology(rng), table, select_mode(h, mode), h, issued)


class Router:
    """httpx mock transport that dispatches on URL fragments and records every request."""

    def __init__(self, routes: dict):
        self.routes = routes
        self.calls: list = []

    def __call__(self, request):
        import httpx

        self.calls.append(request)
        for fragment, handler in self.routes.items():
            if fragment in str(request.url):
                return handler(request) if callable(handler) else handler
        return httpx.Response(404, json={"message": "not found"})

    def client(self):
        import httpx

        return httpx.Client(transport=httpx.MockTransport(self))

    def count(self, fragment: str) -> int:
        return sum(fragment in str(r.url) for r in self.calls)


def timeout(request):
    import httpx

    raise httpx.ConnectTimeout("simulated timeout", request=request)


def live_routes(case: str) -> dict:
    """Routes answering every upstream as it would for one of the October cases."""
    import httpx

    from hiermet.cases import CASES, raw_responses

    raw = raw_responses(CASES[case])
    return {
        "onecall": httpx.Response(200, content=raw["forecast"]),
        "geo/1.0/reverse": httpx.Response(200, content=raw["geocode"]),
        "open-meteo": httpx.Response(200, content=raw["elevation"]),
        "wikipedia": httpx.Response(200, content=raw["summary"]),
        "point/normals": httpx.Response(200, content=raw["climatology"]),
    }
