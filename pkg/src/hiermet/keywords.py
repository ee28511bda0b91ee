"""Controlled keyword vocabulary and its structural proof signatures."""

from __future__ import annotations

VOCABULARY = (
    "cooling_trend",
    "warming_trend",
    "light_rain",
    "heavy_rain",
    "moist_conditions",
    "dry_conditions",
    "frontal_passage",
    "autumn_transition",
    "stable_conditions",
    "unstable_airmass",
    "marine_influence",
    "warm_anomaly",
    "cold_anomaly",
    "clear_sky",
    "overcast",
    "strong_wind",
    "calm_wind",
    "fog_risk",
    "snow",
    "thunderstorm_risk",
)

# Not decidable from the tables alone: they warn, never fail.
CONTEXTUAL = frozenset({"marine_influence", "autumn_transition"})

# Ranking used when more keywords fire than fit in the 3-5 slot budget.
SEVERITY = (
    "thunderstorm_risk",
    "heavy_rain",
    "strong_wind",
    "snow",
    "frontal_passage",
    "unstable_airmass",
    "fog_risk",
    "cooling_trend",
    "warming_trend",
    "warm_anomaly",
    "cold_anomaly",
    "light_rain",
    "moist_conditions",
    "dry_conditions",
    "overcast",
    "clear_sky",
    "calm_wind",
    "stable_conditions",
    "autumn_transition",
    "marine_influence",
)

# Pairs whose predicates cannot both fire; at most one member is ever emitted.
EXCLUSIVE = {
    "cooling_trend": "warming_trend",
    "warming_trend": "cooling_trend",
    "warm_anomaly": "cold_anomaly",
    "cold_anomaly": "warm_anomaly",
    "heavy_rain": "light_rain",
    "light_rain": "heavy_rain",
    "moist_conditions": "dry_conditions",
    "dry_conditions": "moist_conditions",
    "strong_wind": "calm_wind",
    "calm_wind": "strong_wind",
    "overcast": "clear_sky",
    "clear_sky": "overcast",
}

Signature = frozenset[tuple[str, str]]

# (variable, pattern) pairs a proof signal must carry to back each keyword.
# Keywords that can appear together never share a pair.
SIGNATURES: dict[str, Signature] = {
    "cooling_trend": frozenset({("T", "trend_down")}),
    "warming_trend": frozenset({("T", "trend_up")}),
    "warm_anomaly": frozenset({("T", "exceedance")}),
    "cold_anomaly": frozenset({("T", "exceedance")}),
    "heavy_rain": frozenset({("P", "exceedance")}),
    "light_rain": frozenset({("P", "persistence")}),
    "moist_conditions": frozenset({("RH", "exceedance")}),
    "dry_conditions": frozenset({("RH", "exceedance")}),
    "strong_wind": frozenset({("U", "exceedance")}),
    "calm_wind": frozenset({("U", "persistence")}),
    "overcast": frozenset({("Vis", "persistence")}),
    "clear_sky": frozenset({("Vis", "persistence")}),
    "frontal_passage": frozenset({("theta", "shift")}),
    "unstable_airmass": frozenset({("U", "shift"), ("P", "shift")}),
    "stable_conditions": frozenset({("T", "persistence"), ("pressure", "persistence")}),
    "fog_risk": frozenset({("Vis", "exceedance"), ("RH", "persistence")}),
    "snow": frozenset({("Vis", "trend_down")}),
    "thunderstorm_risk": frozenset({("P", "trend_up")}),
    "autumn_transition": frozenset({("T", "shift")}),
    "marine_influence": frozenset({("theta", "persistence")}),
}


def strength(keyword: str) -> str:
    return "contextual" if keyword in CONTEXTUAL else "hard"


def check_keyword(keyword: str) -> None:
    if keyword not in SIGNATURES:
        raise KeyError(f"keyword {keyword!r} is outside the controlled vocabulary")
