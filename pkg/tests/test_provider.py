"""Provider contract: scripted mock, token budget, HTTP client, retries."""

from __future__ import annotations

import json

import httpx
import pytest

from examsim.core.grading import GradeValue, percent_to_grade
from examsim.provider.base import (
    ProviderRequest,
    estimated_request_tokens,
    fit_to_budget,
)
from examsim.provider.errors import AuthError, ProtocolError, RateLimited, Timeout
from examsim.provider.http import OpenAICompatibleProvider
from examsim.provider.mock import ScriptedProvider, ScriptError, parse_script

from tests.conftest import DEFAULT_RULES


def request(**overrides) -> ProviderRequest:
    defaults = dict(
        instructions="You are the examiner.",
        transcript=(("examiner", "What is a process?"), ("student", "A program in execution.")),
        directive_note="Respond per your instructions.",
        directive_kind="answer",
        answered_in_segment=1,
    )
    defaults.update(overrides)
    return ProviderRequest(**defaults)


class TestRequestValidation:
    def test_instructions_required(self) -> None:
        with pytest.raises(ValueError):
            ProviderRequest(instructions="")

    def test_temperature_range(self) -> None:
        with pytest.raises(ValueError):
            ProviderRequest(instructions="x", temperature=2.5)

    def test_defaults(self) -> None:
        req = ProviderRequest(instructions="x")
        assert req.temperature == 0.2
        assert req.max_output_tokens == 1024


class TestScriptParsing:
    def test_comments_and_blanks_skipped(self) -> None:
        rules = parse_script("# comment\n\n* | * | * | fallback\n")
        assert len(rules) == 1
        assert rules[0].is_catch_all

    def test_missing_catch_all_rejected(self) -> None:
        with pytest.raises(ScriptError):
            parse_script("question | 0 | * | hello")

    def test_empty_script_rejected(self) -> None:
        with pytest.raises(ScriptError):
            parse_script("# nothing here\n")

    def test_bad_field_count(self) -> None:
        with pytest.raises(ScriptError):
            parse_script("question | 0 | hello")

    def test_unknown_step(self) -> None:
        with pytest.raises(ScriptError):
            parse_script("greeting | 0 | * | hello\n* | * | * | x")

    def test_bad_segment(self) -> None:
        with pytest.raises(ScriptError):
            parse_script("question | few | * | hello\n* | * | * | x")

    def test_newline_escapes(self) -> None:
        rules = parse_script(r"* | * | * | line one\nline two")
        assert rules[0].response == "line one\nline two"


class TestScriptedProvider:
    def test_first_match_wins(self) -> None:
        provider = ScriptedProvider.from_script(DEFAULT_RULES)
        grade_5 = provider.complete(request(directive_kind="grade", answered_in_segment=5))
        assert grade_5.text.startswith("%GRADE:2.0:80%")
        grade_3 = provider.complete(request(directive_kind="grade", answered_in_segment=3))
        assert grade_3.text.startswith("%GRADE:1.7:87%")

    def test_scripted_grades_consistent_with_mapping(self) -> None:
        # the authored script must never force an inconsistent grade record
        assert percent_to_grade(80) is GradeValue.G2_0
        assert percent_to_grade(87) is GradeValue.G1_7

    def test_keyword_matches_last_student_text(self) -> None:
        provider = ScriptedProvider.from_script(DEFAULT_RULES)
        reply = provider.complete(
            request(transcript=(("examiner", "q"), ("student", "the SCHEDULER does it")))
        )
        assert "scheduler" in reply.text

    def test_catch_all_and_latency(self) -> None:
        provider = ScriptedProvider.from_script(DEFAULT_RULES)
        reply = provider.complete(request(directive_kind=None, answered_in_segment=None, transcript=()))
        assert reply.text.startswith("Noted.")
        assert reply.latency_ms >= 0.0

    def test_deterministic_across_sequences(self) -> None:
        requests = [
            request(directive_kind="question", answered_in_segment=0, transcript=()),
            request(directive_kind="hint"),
            request(directive_kind="grade", answered_in_segment=5),
        ]
        first = [ScriptedProvider.from_script(DEFAULT_RULES).complete(r).text for r in requests]
        second = [ScriptedProvider.from_script(DEFAULT_RULES).complete(r).text for r in requests]
        assert first == second


class TestTokenBudget:
    def test_under_budget_untouched(self) -> None:
        req = request()
        assert fit_to_budget(req, budget=8000) is req

    def test_oldest_pairs_dropped_first(self) -> None:
        pairs = []
        for i in range(10):
            pairs.append(("examiner", f"question {i} " + "q" * 400))
            pairs.append(("student", f"answer {i} " + "a" * 400))
        req = request(transcript=tuple(pairs))
        fitted = fit_to_budget(req, budget=600)
        assert fitted.instructions == req.instructions
        assert fitted.directive_note == req.directive_note
        assert len(fitted.transcript) < len(req.transcript)
        assert fitted.transcript == req.transcript[len(req.transcript) - len(fitted.transcript):]
        assert estimated_request_tokens(fitted) <= 600

    def test_newest_two_entries_survive(self) -> None:
        req = request(transcript=(("examiner", "q" * 4000), ("student", "a" * 4000)))
        fitted = fit_to_budget(req, budget=100)
        assert len(fitted.transcript) == 2

    def test_instructions_never_dropped(self) -> None:
        req = request(instructions="i" * 100_000, transcript=tuple())
        fitted = fit_to_budget(req, budget=100)
        assert fitted.instructions == req.instructions


def http_provider(handler, **overrides) -> tuple[OpenAICompatibleProvider, list[float]]:
    sleeps: list[float] = []
    defaults = dict(
        base_url="https://llm.example",
        model="exam-model",
        api_key="key-123",
        transport=httpx.MockTransport(handler),
        sleep=sleeps.append,
    )
    defaults.update(overrides)
    return OpenAICompatibleProvider(**defaults), sleeps


def ok_response(text: str = "Good answer.") -> httpx.Response:
    return httpx.Response(
        200,
        json={
            "choices": [{"message": {"role": "assistant", "content": text}}],
            "usage": {"prompt_tokens": 10, "completion_tokens": 5},
        },
    )


class TestHttpProvider:
    def test_happy_path_payload_shape(self) -> None:
        seen: list[httpx.Request] = []

        def handler(req: httpx.Request) -> httpx.Response:
            seen.append(req)
            return ok_response()

        provider, _ = http_provider(handler)
        reply = provider.complete(request())
        assert reply.text == "Good answer."
        assert reply.usage == {"prompt_tokens": 10, "completion_tokens": 5}
        assert reply.latency_ms >= 0.0

        sent = json.loads(seen[0].content)
        assert seen[0].headers["Authorization"] == "Bearer key-123"
        assert seen[0].url.path == "/v1/chat/completions"
        assert sent["model"] == "exam-model"
        roles = [message["role"] for message in sent["messages"]]
        assert roles == ["system", "assistant", "user", "system"]
        assert sent["messages"][0]["content"] == "You are the examiner."
        assert sent["messages"][-1]["content"] == "Respond per your instructions."

    def test_missing_key_rejected_at_construction(self, monkeypatch) -> None:
        monkeypatch.delenv("EXAMSIM_PROVIDER_KEY", raising=False)
        with pytest.raises(AuthError):
            OpenAICompatibleProvider(base_url="https://llm.example", model="m")

    def test_invalid_token_maps_to_auth_error(self) -> None:
        provider, sleeps = http_provider(lambda req: httpx.Response(401, json={}))
        with pytest.raises(AuthError):
            provider.complete(request())
        assert sleeps == []  # auth failures are not retried

    def test_rate_limit_retried_with_backoff(self) -> None:
        calls = {"count": 0}

        def handler(req: httpx.Request) -> httpx.Response:
            calls["count"] += 1
            if calls["count"] < 3:
                return httpx.Response(429, json={})
            return ok_response("finally")

        provider, sleeps = http_provider(handler)
        reply = provider.complete(request())
        assert reply.text == "finally"
        assert calls["count"] == 3
        assert sleeps == [0.5, 1.0]

    def test_at_most_three_attempts(self) -> None:
        calls = {"count": 0}

        def handler(req: httpx.Request) -> httpx.Response:
            calls["count"] += 1
            return httpx.Response(429, json={})

        provider, sleeps = http_provider(handler)
        with pytest.raises(RateLimited):
            provider.complete(request())
        assert calls["count"] == 3
        assert sleeps == [0.5, 1.0]

    def test_timeout_retried_then_raised(self) -> None:
        calls = {"count": 0}

        def handler(req: httpx.Request) -> httpx.Response:
            calls["count"] += 1
            raise httpx.ReadTimeout("deadline", request=req)

        provider, _ = http_provider(handler)
        with pytest.raises(Timeout):
            provider.complete(request())
        assert calls["count"] == 3

    def test_malformed_reply_is_protocol_error(self) -> None:
        provider, sleeps = http_provider(lambda req: httpx.Response(200, json={"nope": True}))
        with pytest.raises(ProtocolError):
            provider.complete(request())
        assert sleeps == []  # protocol errors are not retried

    def test_server_error_is_protocol_error(self) -> None:
        provider, _ = http_provider(lambda req: httpx.Response(503, text="downstream down"))
        with pytest.raises(ProtocolError):
            provider.complete(request())

    def test_configured_temperature_overrides_request(self) -> None:
        seen: list[httpx.Request] = []

        def handler(req: httpx.Request) -> httpx.Response:
            seen.append(req)
            return ok_response()

        provider, _ = http_provider(handler, temperature=0.7)
        provider.complete(request(temperature=0.1))
        assert json.loads(seen[0].content)["temperature"] == 0.7
