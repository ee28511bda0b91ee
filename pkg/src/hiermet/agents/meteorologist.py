from __future__ import annotations

import json
import logging
from typing import Sequence

from hiermet.agents.analysis import deterministic_analysis
from hiermet.agents.prompting import compose_meteorologist_prompt
from hiermet.errors import AnalysisSchemaError, ContextValidationError
from hiermet.keywords import VOCABULARY
from hiermet.model import AnalysisResult, ForecastContext
from hiermet.schema import Violation, validate_analysis, validate_context
from hiermet.validator import DEFAULT_PREDICATES, PredicateThresholds

log = logging.getLogger(__name__)


def _parse(raw: str, ctx: ForecastContext, vocabulary: Sequence[str]) -> tuple[AnalysisResult | None, list[Violation]]:
    try:
        payload = json.loads(raw)
    except (TypeError, ValueError) as exc:
        return None, [Violation("$", f"output is not valid JSON: {exc}")]
    violations = validate_analysis(payload, ctx, vocabulary)
    if violations:
        return None, violations
    return AnalysisResult.from_dict(payload), []


def run_meteorologist(
    ctx: ForecastContext,
    provider,
    vocabulary: Sequence[str] = VOCABULARY,
    thresholds: PredicateThresholds = DEFAULT_PREDICATES,
) -> AnalysisResult:
    """Structured analysis of a validated context.

    Remote output is parsed strictly; schema failures are sent back with the
    violation list for up to ``provider.max_repair_attempts`` repairs, and
    vocabulary violations get a single repair round at most.
    """
    problems = validate_context(ctx)
    if problems:
        raise ContextValidationError(problems)
    if provider.kind == "rule_based":
        return deterministic_analysis(ctx, thresholds)

    prompt = compose_meteorologist_prompt(ctx, vocabulary)
    messages = prompt.messages()
    repairs_left = provider.max_repair_attempts
    vocab_repairs_left = min(1, repairs_left)
    while True:
        raw = provider.complete(messages, source="meteorologist")
        result, violations = _parse(raw, ctx, vocabulary)
        if result is not None:
            return result
        vocab_issue = any("controlled vocabulary" in v.message for v in violations)
        allowed = vocab_repairs_left if vocab_issue else repairs_left
        if allowed <= 0:
            count = next((v for v in violations if "keyword count out of range" in v.message), None)
            message = "keyword count out of range" if count else f"analysis failed validation: {violations[0].message}"
            raise AnalysisSchemaError(message, raw, violations)
        repairs_left -= 1
        if vocab_issue:
            vocab_repairs_left -= 1
        log.info("meteorologist output rejected (%d violations); requesting repair", len(violations))
        listing = "\n".join(f"- {v.path}: {v.message}" for v in violations)
        messages = messages + [
            {"role": "assistant", "content": raw},
            {
                "role": "user",
                "content": "Your output failed schema validation:\n"
                + listing
                + "\nReturn the corrected JSON object only.",
            },
        ]
