"""Contracts for the four model-backed capabilities.

The engine only ever talks to these interfaces. Reference implementations
(deterministic, model-free) live in `reference`; thin HTTP clients for
real model servers live in `remote`. Providers are stateless: same input,
same output, across process restarts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

from ..corpus import Paragraph


@dataclass(frozen=True)
class GeneratedQuestion:
    """One candidate question for a paragraph, with its rank-derived score."""

    text: str
    score: float
    paragraph_id: str


@dataclass(frozen=True)
class QaVerdict:
    """Confidence that a paragraph answers a question, plus the answer span.

    The span is (start, end) character offsets into the paragraph text and
    is present exactly when confidence > 0.
    """

    confidence: float
    answer_span: tuple[int, int] | None


@dataclass(frozen=True)
class EntityCard:
    """Encyclopedia-style card: name, a summary of at most two paragraph
    blocks, and coordinates when the entity is a place."""

    name: str
    summary: str
    geo: tuple[float, float] | None = None


@runtime_checkable
class QuestionGenerator(Protocol):
    def generate(self, paragraph: Paragraph, k: int) -> list[GeneratedQuestion]: ...


@runtime_checkable
class QuestionAnswerer(Protocol):
    def answer(self, question: str, paragraph: Paragraph) -> QaVerdict: ...


@runtime_checkable
class EventSummarizer(Protocol):
    def summarize(self, headline_pool: Sequence[str]) -> str: ...


@runtime_checkable
class EntityLookup(Protocol):
    def lookup(self, surface: str, kind: str) -> EntityCard | None: ...


@dataclass(frozen=True)
class ProviderSet:
    question_generator: QuestionGenerator
    question_answerer: QuestionAnswerer
    event_summarizer: EventSummarizer
    entity_lookup: EntityLookup
