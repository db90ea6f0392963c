"""Model-backed capabilities: contracts, reference implementations, remote clients."""

from ..config import ProviderEndpoints
from .base import (
    EntityCard,
    EntityLookup,
    EventSummarizer,
    GeneratedQuestion,
    ProviderSet,
    QaVerdict,
    QuestionAnswerer,
    QuestionGenerator,
)
from .reference import (
    ReferenceEntityLookup,
    ReferenceEventSummarizer,
    ReferenceQuestionAnswerer,
    ReferenceQuestionGenerator,
)
from .remote import (
    RemoteEntityLookup,
    RemoteEventSummarizer,
    RemoteQuestionAnswerer,
    RemoteQuestionGenerator,
)


def reference_providers(
    reply_word_target: int = 30, entity_table: str | None = None
) -> ProviderSet:
    return ProviderSet(
        question_generator=ReferenceQuestionGenerator(),
        question_answerer=ReferenceQuestionAnswerer(),
        event_summarizer=ReferenceEventSummarizer(max_words=reply_word_target),
        entity_lookup=ReferenceEntityLookup(table_path=entity_table),
    )


def providers_from_endpoints(
    endpoints: ProviderEndpoints, reply_word_target: int = 30
) -> ProviderSet:
    """Remote client per configured URL, reference provider otherwise."""
    timeout = endpoints.timeout_seconds
    qg = (
        RemoteQuestionGenerator(endpoints.question_generator_url, timeout)
        if endpoints.question_generator_url
        else ReferenceQuestionGenerator()
    )
    qa = (
        RemoteQuestionAnswerer(endpoints.question_answerer_url, timeout)
        if endpoints.question_answerer_url
        else ReferenceQuestionAnswerer()
    )
    summarizer = (
        RemoteEventSummarizer(endpoints.event_summarizer_url, timeout)
        if endpoints.event_summarizer_url
        else ReferenceEventSummarizer(max_words=reply_word_target)
    )
    entities = (
        RemoteEntityLookup(endpoints.entity_lookup_url, timeout)
        if endpoints.entity_lookup_url
        else ReferenceEntityLookup(table_path=endpoints.entity_table)
    )
    return ProviderSet(
        question_generator=qg,
        question_answerer=qa,
        event_summarizer=summarizer,
        entity_lookup=entities,
    )
