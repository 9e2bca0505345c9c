"""Drive one engine directive through a provider, including the grade retry."""

from __future__ import annotations

from examsim.core.engine import ApplyOutcome, EngineDirective, ExamEngine
from examsim.core.session import ExamSession
from examsim.provider.base import Provider, ProviderResponse


def complete_directive(
    engine: ExamEngine,
    provider: Provider,
    session: ExamSession,
    directive: EngineDirective,
) -> tuple[ApplyOutcome, ProviderResponse]:
    """Round-trip the directive; follows the single grade-fallback retry."""
    response = provider.complete(directive.request)
    outcome = engine.apply_provider_response(session, directive, response)
    while outcome.followup is not None:
        followup = outcome.followup
        response = provider.complete(followup.request)
        outcome = engine.apply_provider_response(session, followup, response)
    return outcome, response
