"""Per-session conversation state over a story's pruned graph.

The state is three monotone sets: paragraphs shown to the user, questions
those paragraphs answer (always exactly the union of graph neighbors of
the read set), and events already displayed. A paragraph becomes
uninformative once every question it answers has been answered; answering
then prefers paragraphs that still answer the most open questions, and
only falls back to an uninformative paragraph (tagged repeat) when no
informative one is confident enough.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

from .config import EngineConfig
from .corpus import Corpus, format_timestamp, parse_timestamp
from .errors import DomainError, NotReadyError, ProviderTransportError
from .pq_graph import PQGraph
from .providers.base import QaVerdict, QuestionAnswerer


@dataclass(frozen=True)
class AskedQuestion:
    text: str
    timestamp: datetime
    origin: str  # "recommended" | "free_form"


@dataclass
class ConversationState:
    session_id: str
    story_id: str
    read_paragraphs: set[str] = field(default_factory=set)
    answered_questions: set[str] = field(default_factory=set)
    shown_events: set[str] = field(default_factory=set)
    asked_questions: list[AskedQuestion] = field(default_factory=list)


@dataclass(frozen=True)
class AnswerSelection:
    paragraph_id: str
    verdict: QaVerdict
    repeat: bool


@dataclass
class AnswerCache:
    """Precomputed selections for the current recommendation list, valid
    only while the read set is unchanged (its size only grows)."""

    read_version: int
    entries: dict[str, AnswerSelection] = field(default_factory=dict)

    def valid_for(self, state: ConversationState) -> bool:
        return self.read_version == len(state.read_paragraphs)


def new_state(session_id: str, story_id: str, graph: PQGraph) -> ConversationState:
    if not graph.pruned:
        raise NotReadyError(f"story '{story_id}' graph is not pruned")
    return ConversationState(session_id=session_id, story_id=story_id)


def _require_member(graph: PQGraph, paragraph_id: str) -> None:
    if paragraph_id not in graph.p_adj:
        raise DomainError(
            f"paragraph '{paragraph_id}' is not part of story '{graph.story_id}'"
        )


def mark_read(state: ConversationState, graph: PQGraph, paragraph_id: str) -> set[str]:
    """Record a served paragraph; returns the questions newly answered by
    it. Re-reading a paragraph returns an empty set."""
    _require_member(graph, paragraph_id)
    newly = graph.p_adj[paragraph_id] - state.answered_questions
    state.read_paragraphs.add(paragraph_id)
    state.answered_questions |= newly
    return set(newly)


def is_uninformative(state: ConversationState, graph: PQGraph, paragraph_id: str) -> bool:
    """True iff every question the paragraph answers is already answered
    (vacuously true for paragraphs with no question edges)."""
    _require_member(graph, paragraph_id)
    return graph.p_adj[paragraph_id] <= state.answered_questions


def select_answer_paragraph(
    state: ConversationState,
    graph: PQGraph,
    corpus: Corpus,
    question: str,
    qa: QuestionAnswerer,
    cfg: EngineConfig,
) -> AnswerSelection | None:
    """Pick the paragraph to answer a question with.

    Confident paragraphs (verdict >= qa_threshold) that are still
    informative are ranked by how many unanswered questions they answer,
    then by confidence, then by paragraph id. When every confident
    paragraph is uninformative the best one is returned anyway, tagged
    repeat=True. None when nothing clears the threshold.
    """
    confident: list[tuple[str, QaVerdict]] = []
    attempts = 0
    failures = 0
    for paragraph in corpus.story_paragraphs(state.story_id):
        attempts += 1
        try:
            verdict = qa.answer(question, paragraph)
        except ProviderTransportError:
            failures += 1
            continue
        if verdict.confidence >= cfg.qa_threshold:
            confident.append((paragraph.id, verdict))
    if attempts and failures == attempts:
        raise ProviderTransportError("answer unavailable: every paragraph lookup failed")
    if not confident:
        return None

    informative = [
        (pid, verdict)
        for pid, verdict in confident
        if not is_uninformative(state, graph, pid)
    ]
    if informative:
        def open_count(pid: str) -> int:
            return len(graph.p_adj[pid] - state.answered_questions)

        pid, verdict = min(
            informative, key=lambda item: (-open_count(item[0]), -item[1].confidence, item[0])
        )
        return AnswerSelection(paragraph_id=pid, verdict=verdict, repeat=False)

    pid, verdict = min(confident, key=lambda item: (-item[1].confidence, item[0]))
    return AnswerSelection(paragraph_id=pid, verdict=verdict, repeat=True)


def recommend(state: ConversationState, graph: PQGraph, cfg: EngineConfig) -> list[str]:
    """Unanswered covering questions ranked by unread neighbor paragraphs
    descending, then total degree descending, then id ascending; at most
    recommend_n."""
    unanswered = [qid for qid in graph.q_adj if qid not in state.answered_questions]

    def rank(qid: str):
        neighbors = graph.q_adj[qid]
        unread = len(neighbors - state.read_paragraphs)
        return (-unread, -len(neighbors), qid)

    unanswered.sort(key=rank)
    return unanswered[: cfg.recommend_n]


def precompute_answers(
    state: ConversationState,
    graph: PQGraph,
    corpus: Corpus,
    qa: QuestionAnswerer,
    cfg: EngineConfig,
) -> AnswerCache:
    """Answer every currently recommended question ahead of time. A failed
    precomputation leaves that question out; serving falls back to a live
    call."""
    cache = AnswerCache(read_version=len(state.read_paragraphs))
    for qid in recommend(state, graph, cfg):
        try:
            selection = select_answer_paragraph(
                state, graph, corpus, graph.question_texts[qid], qa, cfg
            )
        except ProviderTransportError:
            continue
        if selection is not None:
            cache.entries[qid] = selection
    return cache


# --- persistence ------------------------------------------------------------


def state_to_document(state: ConversationState) -> dict:
    return {
        "session_id": state.session_id,
        "story_id": state.story_id,
        "read_paragraphs": sorted(state.read_paragraphs),
        "answered_questions": sorted(state.answered_questions),
        "shown_events": sorted(state.shown_events),
        "asked_questions": [
            {
                "text": a.text,
                "timestamp": format_timestamp(a.timestamp),
                "origin": a.origin,
            }
            for a in state.asked_questions
        ],
    }


def state_from_document(doc: dict) -> ConversationState:
    return ConversationState(
        session_id=doc["session_id"],
        story_id=doc["story_id"],
        read_paragraphs=set(doc["read_paragraphs"]),
        answered_questions=set(doc["answered_questions"]),
        shown_events=set(doc["shown_events"]),
        asked_questions=[
            AskedQuestion(
                text=a["text"],
                timestamp=parse_timestamp(a["timestamp"]),
                origin=a["origin"],
            )
            for a in doc["asked_questions"]
        ],
    )
