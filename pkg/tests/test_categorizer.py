from datetime import datetime, timezone

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hiermet.categorizer import (
    CATEGORIES,
    CategorizerThresholds,
    assign_categories,
    categorize_hour,
    dominant_category,
)
from hiermet.model import HourlyRecord

TS = datetime(2025, 10, 20, tzinfo=timezone.utc)


def hour(condition=800, precip=0.0, visibility=10000.0):
    return HourlyRecord(TS, condition, 12.0, 11.0, 8.0, 75.0, 3.0, 200.0, precip, visibility_m=visibility)


@pytest.mark.parametrize(
    ("record", "expected"),
    [
        (hour(800, 0.0, 10000.0), "clear"),
        (hour(502, 5.5), "heavy_rain"),
        (hour(800, 0.0, 600.0), "fog"),
        (hour(741, 0.0, None), "fog"),
        (hour(501, 1.0), "rain"),
        (hour(500, 0.3), "light_rain"),
        (hour(500, 0.0), "light_rain"),
        (hour(300, 0.0), "drizzle"),
        (hour(211, 0.0), "thunderstorm"),
        (hour(211, 9.0), "thunderstorm"),
        (hour(601, 6.0), "snow"),
        (hour(804), "overcast"),
        (hour(802), "partly_cloudy"),
        (hour(800, 0.0, None), "clear"),
    ],
)
def test_rule_table(record, expected):
    assert categorize_hour(record) == expected


def test_thresholds_are_configurable():
    strict = CategorizerThresholds(heavy_rain_mm_h=8.0)
    assert categorize_hour(hour(502, 5.5), strict) == "rain"


def test_assign_and_dominant():
    rows = assign_categories([hour(500, 0.2), hour(500, 0.2), hour(800)])
    assert [r.category for r in rows] == ["light_rain", "light_rain", "clear"]
    assert dominant_category({"clear": 2, "light_rain": 2}) == "light_rain"
    assert dominant_category({}) is None


RANK = {"heavy_rain": 4, "rain": 3, "drizzle": 2, "light_rain": 1}

codes = st.sampled_from([200, 300, 500, 501, 502, 600, 701, 741, 800, 801, 802, 803, 804])
vis = st.one_of(st.none(), st.floats(0, 20000))


@given(codes, vis, st.floats(0, 50), st.floats(0, 50))
def test_total_and_monotone_in_precipitation(code, visibility, p1, p2):
    lo, hi = sorted((p1, p2))
    a = categorize_hour(hour(code, lo, visibility))
    b = categorize_hour(hour(code, hi, visibility))
    assert a in CATEGORIES and b in CATEGORIES
    assert RANK.get(b, 0) >= RANK.get(a, 0)
