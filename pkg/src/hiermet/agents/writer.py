"""Writer stage: restyles an analysis for a reader without touching its facts."""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Any, Mapping

from hiermet.agents.prompting import compose_writer_prompt
from hiermet.canonical import canonical_bytes
from hiermet.errors import ProviderError
from hiermet.model import AnalysisResult, ForecastContext, HazardWarning, ProofEntry, Report, SourceStatus

log = logging.getLogger(__name__)

TONES = ("neutral", "technical", "public")
LENGTHS = ("brief", "standard", "detailed")
DOMAINS = ("general", "energy", "urban_planning", "agronomy", "risk")

DOMAIN_FRAMING = {
    "general": "Prepared for a general audience.",
    "energy": "Framed for energy operations: temperature drives load, wind drives generation and line ratings.",
    "urban_planning": "Framed for urban planning: drainage, heat and wind exposure of the built environment.",
    "agronomy": "Framed for agronomy: rainfall, humidity and temperature as they affect field work and crops.",
    "risk": "Framed for risk analysis: hazards, their timing and the evidence behind each flag.",
}
TONE_LEAD = {
    "neutral": "",
    "technical": "Aggregates referenced below are daily and 6-hour window statistics. ",
    "public": "In plain terms: ",
}


@dataclass(frozen=True)
class StylePreferences:
    tone: str = "neutral"
    length: str = "standard"
    domain: str = "general"

    def __post_init__(self) -> None:
        for name, allowed in (("tone", TONES), ("length", LENGTHS), ("domain", DOMAINS)):
            value = getattr(self, name)
            if value not in allowed:
                raise ValueError(f"style {name} {value!r} not in {allowed}")

    def to_dict(self) -> dict[str, str]:
        return {"tone": self.tone, "length": self.length, "domain": self.domain}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any] | None) -> StylePreferences:
        data = data or {}
        return cls(
            tone=data.get("tone", "neutral"),
            length=data.get("length", "standard"),
            domain=data.get("domain", "general"),
        )


def _title(ctx: ForecastContext | None, style: StylePreferences) -> str:
    base = f"Weather outlook for {ctx.location.label}" if ctx is not None else "Weather outlook"
    if style.domain != "general":
        base += f" ({style.domain.replace('_', ' ')})"
    return base


def _information(ctx: ForecastContext | None, style: StylePreferences) -> str:
    parts = []
    if ctx is not None:
        loc = ctx.location
        where = ", ".join(p for p in (loc.city, loc.region, loc.country) if p)
        elev = f", {loc.elevation_m:.0f} m above sea level" if loc.elevation_m is not None else ""
        parts.append(
            f"{where} ({loc.latitude:.4f}, {loc.longitude:.4f}{elev}). "
            f"{ctx.horizon_h} h forecast, {ctx.mode} context."
        )
        if loc.description:
            parts.append(loc.description)
    parts.append(DOMAIN_FRAMING[style.domain])
    return " ".join(parts)


def _restyle_summary(analysis: AnalysisResult, style: StylePreferences) -> str:
    paragraphs = analysis.summary.split("\n\n")
    if style.length == "brief":
        paragraphs = paragraphs[:1]
    elif style.length == "detailed":
        paragraphs = paragraphs + ["Evidence: " + " ".join(p.claim for p in analysis.proof)]
    text = "\n\n".join(paragraphs)
    return TONE_LEAD[style.tone] + text


def template_report(
    analysis: AnalysisResult, ctx: ForecastContext | None, style: StylePreferences = StylePreferences()
) -> Report:
    """Report that wraps the analysis verbatim apart from summary layout."""
    restyled = AnalysisResult(
        summary=_restyle_summary(analysis, style),
        proof=analysis.proof,
        keywords=analysis.keywords,
        warnings=analysis.warnings,
    )
    return Report(_title(ctx, style), _information(ctx, style), restyled, ctx)


def fact_drift(original: AnalysisResult, candidate: AnalysisResult) -> list[str]:
    """Differences in keywords, warnings or proof signals; empty when facts are preserved."""
    problems = []
    if set(original.keywords) != set(candidate.keywords) or len(candidate.keywords) != len(original.keywords):
        problems.append("keyword set changed")
    warn = lambda a: Counter(canonical_bytes(w) for w in a.warnings)  # noqa: E731
    if warn(original) != warn(candidate):
        problems.append("warning set changed")
    sigs = lambda a: Counter(canonical_bytes([s.to_dict() for s in p.signals]) for p in a.proof)  # noqa: E731
    if sigs(original) != sigs(candidate):
        problems.append("proof signals changed")
    return problems


def _remote_report(
    raw: str, analysis: AnalysisResult, ctx: ForecastContext | None
) -> tuple[Report | None, list[str]]:
    try:
        payload = json.loads(raw)
        header = payload["header"]
        body = payload["analysis"]
        candidate = AnalysisResult(
            summary=str(body["summary"]),
            proof=tuple(ProofEntry.from_dict(p) for p in body["proof"]),
            keywords=tuple(body["keywords"]),
            warnings=tuple(HazardWarning.from_dict(w) for w in body.get("warnings", ())),
        )
        title, information = str(header["title"]), str(header["information"])
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        return None, [f"unparseable writer output: {exc}"]
    problems = fact_drift(analysis, candidate)
    if ctx is not None and ctx.location.city not in title:
        problems.append("title lacks the location name")
    if problems:
        return None, problems
    return Report(title, information, candidate, ctx), []


def run_writer(
    analysis: AnalysisResult,
    ctx: ForecastContext | None,
    style: StylePreferences = StylePreferences(),
    provider=None,
) -> tuple[Report, list[SourceStatus]]:
    """Compose the final report; never fails.

    Remote output whose facts drift from the analysis is discarded in favour
    of the template writer, and the status list records why.
    """
    if provider is None or provider.kind == "rule_based":
        return template_report(analysis, ctx, style), [SourceStatus("writer", "ok")]
    label = ctx.location.label if ctx is not None else "the requested location"
    prompt = compose_writer_prompt(analysis, label, style)
    try:
        raw = provider.complete(prompt.messages(), source="writer")
    except ProviderError as exc:
        log.warning("writer provider failed, using template: %s", exc)
        status = SourceStatus("writer", "degraded", "WRITER_FALLBACK_TEMPLATE", 1, str(exc))
        return template_report(analysis, ctx, style), [status]
    report, problems = _remote_report(raw, analysis, ctx)
    if report is None:
        log.warning("writer output rejected: %s", "; ".join(problems))
        status = SourceStatus("writer", "degraded", "WRITER_FACT_DRIFT", 1, "; ".join(problems))
        return template_report(analysis, ctx, style), [status]
    return report, [SourceStatus("writer", "ok", attempts=1)]
