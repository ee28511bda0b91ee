"""HTTP gateway: ``POST /analysis`` and ``POST /report``."""

from __future__ import annotations

import json
import logging
from typing import Any

import httpx
from fastapi import FastAPI, Request
from fastapi.responses import Response
from starlette.concurrency import run_in_threadpool

from hiermet.agents.meteorologist import run_meteorologist
from hiermet.agents.providers import RemoteLLMProvider, RuleBasedProvider
from hiermet.agents.writer import StylePreferences, run_writer
from hiermet.cache import CacheEntry, FileCache, context_digest
from hiermet.canonical import canonical_bytes
from hiermet.config import ServiceConfig
from hiermet.errors import AnalysisSchemaError, ContextValidationError, HorizonError, ProviderError, SourceError
from hiermet.model import AnalysisResult, ForecastContext, SourceStatus
from hiermet.pipeline import assemble_context
from hiermet.schema import MAX_HORIZON_H, Violation, schema_violations, validate_analysis, validate_context
from hiermet.validator import validate

log = logging.getLogger(__name__)


def make_provider(config: ServiceConfig):
    if config.provider == "rule":
        return RuleBasedProvider()
    llm = config.llm
    if not llm.endpoint or not llm.model:
        raise ValueError("remote provider needs llm.endpoint and llm.model")
    return RemoteLLMProvider(
        endpoint=llm.endpoint,
        model=llm.model,
        api_key=llm.api_key,
        timeout_s=llm.timeout_s,
        max_repair_attempts=llm.max_repair_attempts,
    )


def _json(status_code: int, body: Any) -> Response:
    return Response(canonical_bytes(body), status_code=status_code, media_type="application/json")


def _violations(status_code: int, violations: list[Violation], statuses: list[SourceStatus] = ()) -> Response:
    return _json(
        status_code,
        {"violations": [v.to_dict() for v in violations], "status": [s.to_dict() for s in statuses]},
    )


def _error(status_code: int, message: str, statuses: list[SourceStatus] = (), **extra: Any) -> Response:
    return _json(status_code, {"error": message, "status": [s.to_dict() for s in statuses], **extra})


def _horizon_too_long(body: Any) -> bool:
    h = body.get("horizon_h") if isinstance(body, dict) else None
    return isinstance(h, int) and not isinstance(h, bool) and h > MAX_HORIZON_H


def create_app(
    config: ServiceConfig | None = None,
    cache: FileCache | None = None,
    meteorologist=None,
    writer=None,
    client: httpx.Client | None = None,
) -> FastAPI:
    config = config or ServiceConfig()
    cache = cache or FileCache(config.cache_dir)
    meteorologist = meteorologist or make_provider(config)
    writer = writer or meteorologist
    thresholds = config.predicates()
    app = FastAPI(title="hiermet", version="0.1.0")
    app.state.config, app.state.cache = config, cache

    def _analyse(ctx: ForecastContext) -> tuple[AnalysisResult, SourceStatus]:
        analysis = run_meteorologist(ctx, meteorologist, thresholds=thresholds)
        return analysis, SourceStatus("meteorologist", "ok", attempts=1, detail=meteorologist.kind)

    @app.post("/analysis")
    async def analysis_endpoint(request: Request) -> Response:
        try:
            body = json.loads(await request.body())
        except ValueError as exc:
            return _violations(400, [Violation("$", f"body is not valid JSON: {exc}")])
        if not isinstance(body, dict):
            return _violations(400, [Violation("$", "body must be a JSON object")])
        if _horizon_too_long(body):
            return _error(422, f"horizon {body['horizon_h']} h is beyond 10-day support")
        return await run_in_threadpool(_analysis_sync, body)

    def _analysis_sync(body: dict) -> Response:
        statuses: list[SourceStatus] = []
        if "lat" in body or "lon" in body:
            problems = schema_violations("coordinate_request", body)
            if problems:
                return _violations(400, problems)
            try:
                built = assemble_context(
                    body["lat"], body["lon"], body["horizon_h"], body.get("mode", "auto"), config, cache,
                    client=client,
                )
            except HorizonError as exc:
                return _error(422, str(exc))
            except SourceError as exc:
                return _error(502, str(exc), exc.statuses)
            except ContextValidationError as exc:
                return _violations(502, exc.violations)
            ctx, key, statuses = built.context, built.key, list(built.statuses)
        else:
            problems = validate_context(body)
            if problems:
                return _violations(400, problems)
            ctx = ForecastContext.from_dict(body)
            key = context_digest(ctx)
            cache.put(CacheEntry.build(key, ctx, meta={"inputs": {"submitted": True}}))
        try:
            analysis, agent_status = _analyse(ctx)
        except ProviderError as exc:
            return _error(502, str(exc), statuses + [exc.status])
        except AnalysisSchemaError as exc:
            failed = SourceStatus("meteorologist", "failed", attempts=1 + meteorologist.max_repair_attempts)
            return _error(
                502, str(exc), statuses + [failed],
                violations=[v.to_dict() for v in exc.violations], raw_output=exc.raw_output,
            )
        report = validate(analysis, ctx, thresholds)
        payload = analysis.to_dict()
        outgoing = schema_violations("analysis_result", payload)
        if outgoing:
            log.error("outgoing analysis failed its schema: %s", outgoing)
            return _violations(500, outgoing)
        return _json(
            200,
            {
                "analysis": payload,
                "validation": report.to_dict(),
                "context_key": key,
                "status": [s.to_dict() for s in statuses + [agent_status]],
            },
        )

    @app.post("/report")
    async def report_endpoint(request: Request) -> Response:
        try:
            body = json.loads(await request.body())
        except ValueError as exc:
            return _violations(400, [Violation("$", f"body is not valid JSON: {exc}")])
        if not isinstance(body, dict):
            return _violations(400, [Violation("$", "body must be a JSON object")])
        return await run_in_threadpool(_report_sync, body)

    def _report_sync(body: dict) -> Response:
        try:
            style = StylePreferences.from_dict(body.get("style"))
        except (ValueError, AttributeError) as exc:
            return _violations(400, [Violation("style", str(exc))])
        ctx = None
        statuses: list[SourceStatus] = []
        key = body.get("context_key")
        if key is not None:
            entry = cache.get(key) if isinstance(key, str) else None
            if entry is None:
                return _error(404, f"unknown context_key {key!r}")
            ctx = entry.context
        elif body.get("context") is not None:
            problems = validate_context(body["context"])
            if problems:
                return _violations(400, [Violation(f"context.{v.path}", v.message) for v in problems])
            ctx = ForecastContext.from_dict(body["context"])

        raw_analysis = body.get("analysis")
        if raw_analysis is not None:
            problems = validate_analysis(raw_analysis, ctx)
            if problems:
                return _violations(400, [Violation(f"analysis.{v.path}", v.message) for v in problems])
            analysis = AnalysisResult.from_dict(raw_analysis)
        elif ctx is not None:
            # Only a context was given: run the meteorologist on it first.
            try:
                analysis, agent_status = _analyse(ctx)
            except ProviderError as exc:
                return _error(502, str(exc), [exc.status])
            except AnalysisSchemaError as exc:
                return _error(502, str(exc), [SourceStatus("meteorologist", "failed")], raw_output=exc.raw_output)
            statuses.append(agent_status)
        else:
            return _violations(400, [Violation("$", "provide analysis, context_key or context")])

        report, writer_statuses = run_writer(analysis, ctx, style, writer)
        statuses.extend(writer_statuses)
        payload = report.to_dict()
        outgoing = schema_violations("report", payload)
        if outgoing:
            log.error("outgoing report failed its schema: %s", outgoing)
            return _violations(500, outgoing)
        return _json(200, {**payload, "status": [s.to_dict() for s in statuses]})

    return app
