import json
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone

import httpx
import pytest

from hiermet.agents.analysis import compass, deterministic_analysis
from hiermet.agents.meteorologist import run_meteorologist
from hiermet.agents.prompting import compose_meteorologist_prompt, compose_writer_prompt, render_tables
from hiermet.agents.providers import RemoteLLMProvider, RuleBasedProvider
from hiermet.agents.writer import DOMAIN_FRAMING, StylePreferences, fact_drift, run_writer, template_report
from hiermet.context import build_context, select_mode
from hiermet.errors import AnalysisSchemaError, ContextValidationError, ProviderError
from hiermet.keywords import VOCABULARY
from hiermet.model import GeoLocation, HourlyRecord, SourceStatus, WindowRef
from hiermet.schema import schema_violations, validate_analysis


@dataclass
class ScriptedProvider:
    """Returns canned completions in order and records the conversations it saw."""

    outputs: list
    kind: str = "remote_llm"
    timeout_s: float = 1.0
    max_repair_attempts: int = 1
    seen: list = field(default_factory=list)

    def complete(self, messages, *, source="meteorologist"):
        self.seen.append(list(messages))
        out = self.outputs.pop(0)
        if isinstance(out, Exception):
            raise out
        return out


def calm_context(h=120):
    loc = GeoLocation("Stillwater", "", "Nowhere", 10.0, 10.0, 0)
    t0 = datetime(2025, 6, 1, tzinfo=timezone.utc)
    rows = [HourlyRecord(t0 + timedelta(hours=i), 800, 15.0, 15.0, 8.0, 60.0, 0.0, 0.0, 0.0) for i in range(h)]
    return build_context(loc, None, rows, select_mode(h), h, t0)


# -- prompts -------------------------------------------------------------------------


def test_prompt_mirrors_context_tables(case_contexts):
    ctx = case_contexts["cork"]
    prompt = compose_meteorologist_prompt(ctx)
    assert "DAILY TABLE" in prompt.user and "6-HOUR TABLE" in prompt.user
    assert "HOURLY TABLE" not in prompt.user
    for kw in VOCABULARY:
        assert f"\n{kw}\n" in f"\n{prompt.system}\n"
    assert prompt.version == "v1" and prompt.size > 1000
    assert prompt.messages()[0]["role"] == "system"


def test_prompt_with_hourly_table():
    ctx = calm_context(48)
    assert "HOURLY TABLE" in render_tables(ctx)


def test_writer_prompt_carries_style(case_contexts):
    analysis = deterministic_analysis(case_contexts["cork"])
    prompt = compose_writer_prompt(analysis, "Cork, Ireland", StylePreferences(tone="public", domain="energy"))
    assert "public" in prompt.user and "energy" in prompt.user and "Cork, Ireland" in prompt.user


# -- deterministic analysis --------------------------------------------------------------


def test_calm_weather_keywords():
    assert set(deterministic_analysis(calm_context()).keywords) == {"stable_conditions", "clear_sky", "calm_wind"}


@pytest.mark.parametrize(
    ("case", "expected"),
    [
        ("cork", {"cooling_trend", "light_rain", "moist_conditions"}),
        ("chennai", {"heavy_rain", "strong_wind", "frontal_passage"}),
        ("danang", {"heavy_rain", "strong_wind"}),
        ("manila", {"light_rain", "stable_conditions"}),
    ],
)
def test_case_keywords(case_contexts, case, expected):
    analysis = deterministic_analysis(case_contexts[case])
    assert expected <= set(analysis.keywords)
    assert 3 <= len(analysis.keywords) <= 5
    assert validate_analysis(analysis, case_contexts[case]) == []
    assert schema_violations("analysis_result", analysis.to_dict()) == []
    assert bool(analysis.warnings) == (case == "danang")


def test_danang_warning_content(case_contexts):
    analysis = deterministic_analysis(case_contexts["danang"])
    assert [w.kind for w in analysis.warnings] == ["heavy_rain"]
    assert "130.4" in analysis.warnings[0].text


def test_analysis_is_deterministic(case_contexts):
    ctx = case_contexts["chennai"]
    assert deterministic_analysis(ctx) == deterministic_analysis(ctx)


def test_baseline_context_is_aggregated_internally(case_contexts):
    cork = case_contexts["cork"]
    # rebuild the Cork case as a baseline payload from the same hours
    from hiermet.cases import CASES, raw_responses
    from hiermet.ingestion.openweather import parse_forecast
    from hiermet.categorizer import assign_categories

    records, _, _ = parse_forecast(raw_responses(CASES["cork"])["forecast"], "3.0", "standard", 120)
    base = replace(cork, mode="baseline", daily=None, six_hour=None, hourly=tuple(assign_categories(records)))
    assert deterministic_analysis(base).keywords == deterministic_analysis(cork).keywords


def test_compass():
    assert [compass(d) for d in (0, 44, 90, 300, 359)] == ["N", "NE", "E", "WNW", "N"]


# -- meteorologist orchestration ------------------------------------------------------------


def test_rule_provider_path(case_contexts):
    ctx = case_contexts["cork"]
    assert run_meteorologist(ctx, RuleBasedProvider()) == deterministic_analysis(ctx)


def test_invalid_context_never_reaches_provider(case_contexts):
    ctx = case_contexts["cork"]
    bad = replace(ctx, daily=None)
    spy = ScriptedProvider([])
    with pytest.raises(ContextValidationError):
        run_meteorologist(bad, spy)
    assert spy.seen == []


def good_output(ctx):
    return json.dumps(deterministic_analysis(ctx).to_dict())


def test_repair_loop_recovers(case_contexts):
    ctx = case_contexts["cork"]
    two = json.loads(good_output(ctx))
    two["keywords"] = two["keywords"][:2]
    provider = ScriptedProvider([json.dumps(two), good_output(ctx)])
    result = run_meteorologist(ctx, provider)
    assert result == deterministic_analysis(ctx)
    assert len(provider.seen) == 2
    repair = provider.seen[1][-1]["content"]
    assert "keyword count out of range" in repair


def test_persistent_count_error(case_contexts):
    ctx = case_contexts["cork"]
    two = json.loads(good_output(ctx))
    two["keywords"] = two["keywords"][:2]
    provider = ScriptedProvider([json.dumps(two)] * 3)
    with pytest.raises(AnalysisSchemaError, match="keyword count out of range") as err:
        run_meteorologist(ctx, provider)
    assert len(provider.seen) == 2
    assert err.value.raw_output == json.dumps(two)


def test_non_json_output(case_contexts):
    provider = ScriptedProvider(["Sure! Here is the analysis."] * 2)
    with pytest.raises(AnalysisSchemaError, match="not valid JSON"):
        run_meteorologist(case_contexts["cork"], provider)


def test_vocabulary_errors_get_one_repair(case_contexts):
    ctx = case_contexts["cork"]
    out = json.loads(good_output(ctx))
    out["keywords"][0] = "drizzly_gloom"
    provider = ScriptedProvider([json.dumps(out)] * 5, max_repair_attempts=3)
    with pytest.raises(AnalysisSchemaError):
        run_meteorologist(ctx, provider)
    assert len(provider.seen) == 2


def test_provider_error_propagates(case_contexts):
    status = SourceStatus("meteorologist", "failed", detail="timeout")
    provider = ScriptedProvider([ProviderError("timed out", status)])
    with pytest.raises(ProviderError):
        run_meteorologist(case_contexts["cork"], provider)


def test_remote_provider_http(case_contexts):
    reply = {"choices": [{"message": {"content": "{}"}}]}
    seen = []

    def handler(request):
        seen.append(json.loads(request.content))
        return httpx.Response(200, json=reply)

    client = httpx.Client(transport=httpx.MockTransport(handler))
    provider = RemoteLLMProvider("https://llm.test/v1", "m", api_key="k", client=client)
    assert provider.complete([{"role": "user", "content": "hi"}]) == "{}"
    assert seen[0]["model"] == "m" and seen[0]["temperature"] == 0.0

    def slow(request):
        raise httpx.ReadTimeout("slow", request=request)

    provider.client = httpx.Client(transport=httpx.MockTransport(slow))
    with pytest.raises(ProviderError) as err:
        provider.complete([], source="writer")
    assert err.value.status.source == "writer" and err.value.status.detail == "timeout"


# -- writer ----------------------------------------------------------------------------------


def test_template_writer_keeps_facts(case_contexts):
    ctx = case_contexts["danang"]
    analysis = deterministic_analysis(ctx)
    report, statuses = run_writer(analysis, ctx, StylePreferences(), RuleBasedProvider())
    assert report.analysis.keywords == analysis.keywords
    assert report.analysis.warnings == analysis.warnings
    assert report.title == "Weather outlook for Da Nang, Vietnam"
    assert statuses[0].outcome == "ok"
    assert schema_violations("report", report.to_dict()) == []


def test_domain_framing(case_contexts):
    ctx = case_contexts["cork"]
    analysis = deterministic_analysis(ctx)
    plain = template_report(analysis, ctx)
    energy = template_report(analysis, ctx, StylePreferences(domain="energy"))
    assert DOMAIN_FRAMING["energy"] in energy.information
    assert DOMAIN_FRAMING["energy"] not in plain.information
    assert fact_drift(plain.analysis, energy.analysis) == []


def test_lengths_and_tones(case_contexts):
    ctx = case_contexts["chennai"]
    analysis = deterministic_analysis(ctx)
    brief = template_report(analysis, ctx, StylePreferences(length="brief")).analysis.summary
    detailed = template_report(analysis, ctx, StylePreferences(length="detailed")).analysis.summary
    public = template_report(analysis, ctx, StylePreferences(tone="public")).analysis
    assert len(brief) < len(analysis.summary) < len(detailed)
    assert public.summary.startswith("In plain terms")
    assert public.keywords == analysis.keywords


def test_style_validation():
    with pytest.raises(ValueError):
        StylePreferences(tone="poetic")
    assert StylePreferences.from_dict({"domain": "risk"}).to_dict() == {
        "tone": "neutral", "length": "standard", "domain": "risk"
    }


def remote_report_json(analysis, title="Outlook for Da Nang"):
    return json.dumps({"header": {"title": title, "information": "i"}, "analysis": analysis.to_dict()})


def test_remote_writer_accepted_when_faithful(case_contexts):
    ctx = case_contexts["danang"]
    analysis = deterministic_analysis(ctx)
    restyled = replace(analysis, summary="Rewritten summary.")
    report, statuses = run_writer(analysis, ctx, StylePreferences(), ScriptedProvider([remote_report_json(restyled)]))
    assert report.analysis.summary == "Rewritten summary."
    assert statuses[0].outcome == "ok"


def test_remote_writer_dropping_warning_falls_back(case_contexts):
    ctx = case_contexts["danang"]
    analysis = deterministic_analysis(ctx)
    dropped = replace(analysis, warnings=())
    report, statuses = run_writer(analysis, ctx, StylePreferences(), ScriptedProvider([remote_report_json(dropped)]))
    assert report.analysis.warnings == analysis.warnings
    assert statuses[0].degradation_code == "WRITER_FACT_DRIFT"
    assert "warning set changed" in statuses[0].detail


def test_remote_writer_failure_and_garbage(case_contexts):
    ctx = case_contexts["cork"]
    analysis = deterministic_analysis(ctx)
    err = ProviderError("down", SourceStatus("writer", "failed"))
    report, statuses = run_writer(analysis, ctx, StylePreferences(), ScriptedProvider([err]))
    assert statuses[0].degradation_code == "WRITER_FALLBACK_TEMPLATE"
    assert report.analysis.keywords == analysis.keywords
    _, statuses = run_writer(analysis, ctx, StylePreferences(), ScriptedProvider(["not json"]))
    assert statuses[0].degradation_code == "WRITER_FACT_DRIFT"
    _, statuses = run_writer(analysis, ctx, StylePreferences(), ScriptedProvider([remote_report_json(analysis, "Outlook")]))
    assert "title lacks the location name" in statuses[0].detail


def test_fact_drift_detects_signal_change(case_contexts):
    analysis = deterministic_analysis(case_contexts["cork"])
    entry = analysis.proof[0]
    sig = replace(entry.signals[0], pattern="trend_up" if entry.signals[0].pattern != "trend_up" else "shift")
    moved = replace(analysis, proof=(replace(entry, signals=(sig,) + entry.signals[1:]),) + analysis.proof[1:])
    assert fact_drift(analysis, moved) == ["proof signals changed"]
    assert fact_drift(analysis, replace(analysis, keywords=analysis.keywords[:-1])) == ["keyword set changed"]
