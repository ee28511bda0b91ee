"""Prompt composition from the versioned templates in ``agents/prompts``."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from string import Template
from typing import Sequence

from hiermet.canonical import canonical_bytes
from hiermet.keywords import VOCABULARY
from hiermet.model import AnalysisResult, ForecastContext, format_ts
from hiermet.schema import load_schema

PROMPT_VERSION = "v1"


@lru_cache(maxsize=None)
def load_template(name: str, version: str = PROMPT_VERSION) -> Template:
    path = resources.files("hiermet.agents.prompts").joinpath(f"{name}_{version}.txt")
    return Template(path.read_text("utf-8"))


@dataclass(frozen=True)
class PromptPayload:
    system: str
    user: str
    version: str = PROMPT_VERSION

    def messages(self) -> list[dict[str, str]]:
        return [{"role": "system", "content": self.system}, {"role": "user", "content": self.user}]

    @property
    def size(self) -> int:
        return len(self.system.encode("utf-8")) + len(self.user.encode("utf-8"))


def _rows(rows: Sequence) -> str:
    return "\n".join(canonical_bytes(r).decode("utf-8") for r in rows)


def render_tables(ctx: ForecastContext) -> str:
    blocks = []
    if ctx.daily is not None:
        blocks.append("DAILY TABLE (one JSON row per local day):\n" + _rows(ctx.daily))
    if ctx.six_hour is not None:
        blocks.append("6-HOUR TABLE (one JSON row per window):\n" + _rows(ctx.six_hour))
    if ctx.hourly is not None:
        blocks.append("HOURLY TABLE (one JSON row per hour):\n" + _rows(ctx.hourly))
    return "\n\n".join(blocks)


def compose_meteorologist_prompt(ctx: ForecastContext, vocabulary: Sequence[str] = VOCABULARY) -> PromptPayload:
    system = load_template("meteorologist").substitute(
        vocabulary="\n".join(vocabulary),
        schema=json.dumps(load_schema("analysis_result"), sort_keys=True),
    )
    clim = ctx.climatology
    clim_text = (
        _rows(clim.months) + f"\n(source: {clim.source})" if clim is not None else "unavailable"
    )
    user = load_template("meteorologist_context").substitute(
        location=canonical_bytes(ctx.location).decode("utf-8"),
        mode=ctx.mode,
        issued_at=format_ts(ctx.issued_at_utc),
        horizon_h=ctx.horizon_h,
        climatology=clim_text,
        tables=render_tables(ctx),
    )
    return PromptPayload(system, user)


def compose_writer_prompt(analysis: AnalysisResult, location_label: str, style) -> PromptPayload:
    user = load_template("writer").substitute(
        tone=style.tone,
        length=style.length,
        domain=style.domain,
        location=location_label,
        analysis=json.dumps(analysis.to_dict(), sort_keys=True, indent=1, ensure_ascii=False),
    )
    return PromptPayload("You return one JSON object and nothing else.", user)
