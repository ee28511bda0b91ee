"""Context mode selection and assembly."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Sequence

from hiermet.aggregation import DAILY, EPS_DIR, SIX_HOUR, aggregate_daily, aggregate_six_hour, check_grid
from hiermet.categorizer import DEFAULT_THRESHOLDS, CategorizerThresholds, assign_categories
from hiermet.errors import ContextValidationError, HorizonError
from hiermet.model import ForecastContext, GeoLocation, HourlyRecord, MonthlyClimatology
from hiermet.schema import MAX_HORIZON_H, SHORT_RANGE_LIMIT_H, validate_context

REQUESTABLE_MODES = ("auto", "baseline", "hierarchical")


@dataclass(frozen=True)
class ModeDecision:
    mode: str
    include_hourly: bool


def select_mode(horizon_h: int, requested: str = "auto") -> ModeDecision:
    if horizon_h > MAX_HORIZON_H:
        raise HorizonError(f"horizon {horizon_h} h is beyond 10-day support")
    if horizon_h < 1:
        raise HorizonError(f"horizon {horizon_h} h must be at least 1 h")
    if requested not in REQUESTABLE_MODES:
        raise ValueError(f"unknown mode {requested!r}; expected one of {REQUESTABLE_MODES}")
    if requested == "baseline":
        return ModeDecision("baseline", True)
    return ModeDecision("hierarchical", horizon_h < SHORT_RANGE_LIMIT_H)


def build_context(
    loc: GeoLocation,
    clim: MonthlyClimatology | None,
    hourly_table: Sequence[HourlyRecord],
    decision: ModeDecision,
    horizon_h: int,
    issued_at: datetime,
    categorizer: CategorizerThresholds = DEFAULT_THRESHOLDS,
    eps: float = EPS_DIR,
) -> ForecastContext:
    """Assemble and validate the payload handed to the meteorologist."""
    check_grid(hourly_table)
    table = tuple(assign_categories(hourly_table, categorizer))
    if decision.mode == "baseline":
        ctx = ForecastContext("baseline", loc, horizon_h, issued_at, clim, hourly=table)
    else:
        ctx = ForecastContext(
            "hierarchical",
            loc,
            horizon_h,
            issued_at,
            clim,
            daily=tuple(aggregate_daily(table, DAILY, loc.utc_offset_s)),
            six_hour=tuple(aggregate_six_hour(table, SIX_HOUR, loc.utc_offset_s, eps)),
            hourly=table if decision.include_hourly else None,
        )
    problems = validate_context(ctx)
    if problems:
        raise ContextValidationError(problems)
    return ctx
