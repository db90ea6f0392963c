"""Chatroom service: rooms, sessions, message routing, reply trimming.

One room per story. A session binds to one room and owns a conversation
state; operations on a single session are serialized with a lock, while
distinct sessions share the immutable corpus and graphs freely. Session
state and message history persist after every mutation so a user can
leave a chatroom and come back to the conversation.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

from ..config import AppConfig
from ..conversation import (
    AnswerCache,
    AnswerSelection,
    AskedQuestion,
    ConversationState,
    mark_read,
    new_state,
    precompute_answers,
    recommend,
    select_answer_paragraph,
    state_from_document,
    state_to_document,
)
from ..corpus import Corpus, Event, format_timestamp, parse_timestamp
from ..errors import (
    DomainError,
    NotFoundError,
    NotReadyError,
    ProviderTransportError,
)
from ..pq_graph import PQGraph
from ..providers.base import ProviderSet
from ..store import DocumentStore
from ..textutil import count_words, split_sentences
from .classify import CLARIFICATION, OPEN_QUESTION, UtteranceClassifier

CAPABILITY_NOTICE = (
    "I can only talk about this story: ask me a question about it, tap a "
    "recommended question, or ask who/where/what-does-it-stand-for about "
    "a name in the news."
)

ORIGIN_FREE_FORM = "free_form"
ORIGIN_RECOMMENDED = "recommended"


class Clock:
    """Wall clock; swap for LogicalClock to make transcripts reproducible."""

    def now(self) -> datetime:
        return datetime.now(timezone.utc)


class LogicalClock(Clock):
    """Deterministic clock: fixed start, one second per tick. The default
    start sits after any plausible corpus timestamp so that session activity
    sorts ahead of event-time baselines."""

    def __init__(self, start: str = "2030-01-01T00:00:00Z"):
        self._next = parse_timestamp(start)
        self._lock = threading.Lock()

    def now(self) -> datetime:
        with self._lock:
            current = self._next
            self._next = current + timedelta(seconds=1)
            return current


@dataclass(frozen=True)
class RecommendedQuestion:
    question_id: str
    text: str


@dataclass(frozen=True)
class ChatMessage:
    id: str
    room_id: str
    sender: str  # "user" | "system"
    kind: str  # event | answer | clarification | no_answer | error | recommendations | user
    text: str
    timestamp: datetime
    answer_span: tuple[int, int] | None = None
    source: str | None = None
    repeat: bool = False
    event_id: str | None = None
    recommendations: tuple[RecommendedQuestion, ...] = ()
    geo: tuple[float, float] | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "room_id": self.room_id,
            "sender": self.sender,
            "kind": self.kind,
            "text": self.text,
            "timestamp": format_timestamp(self.timestamp),
            "answer_span": list(self.answer_span) if self.answer_span else None,
            "source": self.source,
            "repeat": self.repeat,
            "event_id": self.event_id,
            "recommendations": [
                {"question_id": r.question_id, "text": r.text}
                for r in self.recommendations
            ],
            "geo": {"lat": self.geo[0], "lon": self.geo[1]} if self.geo else None,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ChatMessage":
        geo = raw.get("geo")
        return cls(
            id=raw["id"],
            room_id=raw["room_id"],
            sender=raw["sender"],
            kind=raw["kind"],
            text=raw["text"],
            timestamp=parse_timestamp(raw["timestamp"]),
            answer_span=tuple(raw["answer_span"]) if raw.get("answer_span") else None,
            source=raw.get("source"),
            repeat=raw.get("repeat", False),
            event_id=raw.get("event_id"),
            recommendations=tuple(
                RecommendedQuestion(r["question_id"], r["text"])
                for r in raw.get("recommendations", [])
            ),
            geo=(geo["lat"], geo["lon"]) if geo else None,
        )


@dataclass(frozen=True)
class Room:
    story_id: str
    title: str
    last_active: datetime
    open_sessions: int


@dataclass(frozen=True)
class RoomView:
    session_id: str
    story_id: str
    messages: tuple[ChatMessage, ...]
    has_previous: bool
    recommendations: tuple[RecommendedQuestion, ...]


@dataclass
class ChatSession:
    state: ConversationState
    messages: list[ChatMessage] = field(default_factory=list)
    next_seq: int = 0
    cache: AnswerCache | None = None
    last_recommended: tuple[RecommendedQuestion, ...] = ()
    lock: threading.RLock = field(default_factory=threading.RLock, repr=False)


def trim_reply(
    paragraph_text: str, answer_span: tuple[int, int], cfg_target: int
) -> tuple[str, tuple[int, int]]:
    """Cut a paragraph down to roughly the reply word target.

    The sentence(s) containing the answer span are always shown whole;
    neighboring sentences are added (preceding preferred) while the total
    stays within the target. Returns the display text and the answer span
    re-based onto it.
    """
    spans = split_sentences(paragraph_text)
    if not spans:
        return paragraph_text, answer_span
    start, end = answer_span
    lo = 0
    hi = len(spans) - 1
    for idx, (a, b) in enumerate(spans):
        if b > start:
            lo = idx
            break
    for idx in range(len(spans) - 1, -1, -1):
        if spans[idx][0] < end:
            hi = idx
            break
    if hi < lo:
        hi = lo

    def words(i: int, j: int) -> int:
        return count_words(paragraph_text[spans[i][0] : spans[j][1]])

    if words(lo, hi) <= cfg_target:
        grew = True
        while grew:
            grew = False
            if lo > 0 and words(lo - 1, hi) <= cfg_target:
                lo -= 1
                grew = True
            elif hi < len(spans) - 1 and words(lo, hi + 1) <= cfg_target:
                hi += 1
                grew = True
    base = spans[lo][0]
    display = paragraph_text[base : spans[hi][1]]
    return display, (start - base, end - base)


class ChatService:
    def __init__(
        self,
        corpus: Corpus,
        store: DocumentStore,
        config: AppConfig,
        providers: ProviderSet,
        clock: Clock | None = None,
    ):
        self.corpus = corpus
        self.store = store
        self.config = config
        self.providers = providers
        self.clock = clock or Clock()
        self.classifier = UtteranceClassifier(
            config.clarification_patterns, config.small_talk
        )
        self._graphs: dict[str, PQGraph] = {}
        self._sessions: dict[str, ChatSession] = {}
        self._room_activity: dict[str, datetime] = {}
        self._room_sessions: dict[str, set[str]] = {}
        self._registry_lock = threading.Lock()

    # --- shared plumbing -------------------------------------------------

    def _blocked(self, story_id: str) -> bool:
        return story_id in self.config.story_blocklist

    def pruned_graph(self, story_id: str) -> PQGraph:
        graph = self._graphs.get(story_id)
        if graph is None:
            from ..pq_graph import graph_key, prune

            doc = self.store.load(graph_key(story_id))
            if doc is None:
                raise NotReadyError(
                    f"story '{story_id}' has no graph; run "
                    f"`storychat build-bank` and `storychat build-graph` first"
                )
            graph = prune(PQGraph.from_document(doc))
            self._graphs[story_id] = graph
        return graph

    def _session(self, session_id: str) -> ChatSession:
        with self._registry_lock:
            session = self._sessions.get(session_id)
            if session is None:
                doc = self.store.load(f"sessions/{session_id}")
                if doc is None:
                    raise NotFoundError(f"unknown session '{session_id}'")
                session = ChatSession(
                    state=state_from_document(doc["state"]),
                    messages=[ChatMessage.from_dict(m) for m in doc["messages"]],
                    next_seq=doc["next_seq"],
                )
                graph = self.pruned_graph(session.state.story_id)
                session.last_recommended = self._recommendations(session, graph)
                self._sessions[session_id] = session
            return session

    def _persist(self, session: ChatSession) -> None:
        self.store.save(
            f"sessions/{session.state.session_id}",
            {
                "state": state_to_document(session.state),
                "messages": [m.to_dict() for m in session.messages],
                "next_seq": session.next_seq,
            },
        )

    def _next_message_id(self, session: ChatSession) -> str:
        seq = session.next_seq
        session.next_seq += 1
        return f"{session.state.session_id}:m{seq:04d}"

    def _system_message(self, session: ChatSession, kind: str, text: str, **extra) -> ChatMessage:
        return ChatMessage(
            id=self._next_message_id(session),
            room_id=session.state.story_id,
            sender="system",
            kind=kind,
            text=text,
            timestamp=self.clock.now(),
            **extra,
        )

    def _event_message(self, session: ChatSession, event: Event) -> ChatMessage:
        summary = self.providers.event_summarizer.summarize(list(event.headline_pool))
        session.state.shown_events.add(event.id)
        return self._system_message(session, "event", summary, event_id=event.id)

    def _recommendations(
        self, session: ChatSession, graph: PQGraph
    ) -> tuple[RecommendedQuestion, ...]:
        ids = recommend(session.state, graph, self.config.engine)
        return tuple(
            RecommendedQuestion(question_id=qid, text=graph.question_texts[qid])
            for qid in ids
        )

    def _recommendations_message(
        self, session: ChatSession, recs: tuple[RecommendedQuestion, ...]
    ) -> ChatMessage:
        if recs:
            lines = [f"{i + 1}) {r.text}" for i, r in enumerate(recs)]
            text = "You could ask: " + "  ".join(lines)
        else:
            text = "No more suggested questions for this story."
        return self._system_message(
            session, "recommendations", text, recommendations=recs
        )

    def _touch_room(self, story_id: str, when: datetime) -> None:
        current = self._room_activity.get(story_id)
        if current is None or when > current:
            self._room_activity[story_id] = when

    # --- rooms ------------------------------------------------------------

    def list_rooms(self) -> list[Room]:
        rooms = []
        for summary in self.corpus.list_stories():
            if self._blocked(summary.id):
                continue
            baseline = summary.latest_event_at or datetime.fromtimestamp(0, timezone.utc)
            last_active = self._room_activity.get(summary.id, baseline)
            rooms.append(
                Room(
                    story_id=summary.id,
                    title=summary.name,
                    last_active=last_active,
                    open_sessions=len(self._room_sessions.get(summary.id, ())),
                )
            )
        rooms.sort(key=lambda r: (-r.last_active.timestamp(), r.story_id))
        return rooms

    def open_room(self, session_id: str | None, story_id: str) -> RoomView:
        if self._blocked(story_id):
            raise NotFoundError(f"unknown story '{story_id}'")
        story = self.corpus.story(story_id)
        graph = self.pruned_graph(story_id)
        session_id = session_id or uuid.uuid4().hex

        try:
            session = self._session(session_id)
        except NotFoundError:
            session = None

        events = self.corpus.story_events(story_id)
        has_previous = len(events) > 2

        if session is not None:
            if session.state.story_id != story_id:
                raise DomainError(
                    f"session '{session_id}' is bound to story "
                    f"'{session.state.story_id}'"
                )
            with session.lock:
                recs = self._recommendations(session, graph)
                session.last_recommended = recs
                view = RoomView(
                    session_id=session_id,
                    story_id=story_id,
                    messages=tuple(session.messages),
                    has_previous=has_previous,
                    recommendations=recs,
                )
        else:
            state = new_state(session_id, story_id, graph)
            session = ChatSession(state=state)
            with session.lock:
                messages = [self._event_message(session, e) for e in events[-2:]]
                recs = self._recommendations(session, graph)
                session.last_recommended = recs
                messages.append(self._recommendations_message(session, recs))
                session.messages.extend(messages)
                self._persist(session)
                view = RoomView(
                    session_id=session_id,
                    story_id=story_id,
                    messages=tuple(messages),
                    has_previous=has_previous,
                    recommendations=recs,
                )
        with self._registry_lock:
            self._sessions[session_id] = session
            self._room_sessions.setdefault(story_id, set()).add(session_id)
        self._touch_room(story_id, view.messages[-1].timestamp if view.messages else self.clock.now())
        return view

    def session_story(self, session_id: str) -> str:
        return self._session(session_id).state.story_id

    def earlier_events(self, session_id: str, before: str, limit: int) -> list[ChatMessage]:
        session = self._session(session_id)
        with session.lock:
            events = self.corpus.story_events(session.state.story_id)
            ids = [e.id for e in events]
            if before not in ids:
                raise DomainError(f"unknown anchor event '{before}'")
            older = events[: ids.index(before)]
            if limit <= 0 or not older:
                return []
            picked = list(reversed(older[-limit:]))  # newest first
            messages = [self._event_message(session, e) for e in picked]
            session.messages.extend(messages)
            self._persist(session)
            return messages

    # --- messaging ----------------------------------------------------------

    def post_message(
        self, session_id: str, text: str, origin: str = ORIGIN_FREE_FORM
    ) -> list[ChatMessage]:
        if origin not in (ORIGIN_FREE_FORM, ORIGIN_RECOMMENDED):
            raise DomainError(f"unknown origin '{origin}'")
        session = self._session(session_id)
        with session.lock:
            now = self.clock.now()
            session.state.asked_questions.append(
                AskedQuestion(text=text, timestamp=now, origin=origin)
            )
            user_message = ChatMessage(
                id=self._next_message_id(session),
                room_id=session.state.story_id,
                sender="user",
                kind="user",
                text=text,
                timestamp=now,
            )
            session.messages.append(user_message)

            # recommended clicks are engine-generated questions; classification
            # is for typed input only
            if origin == ORIGIN_RECOMMENDED:
                replies = self._question_reply(session, text, origin)
            else:
                utterance = self.classifier.classify(text)
                if utterance.kind == CLARIFICATION:
                    replies = [self._clarification_reply(session, utterance)]
                elif utterance.kind == OPEN_QUESTION:
                    replies = self._question_reply(session, text, origin)
                else:
                    replies = [
                        self._system_message(session, "no_answer", CAPABILITY_NOTICE)
                    ]

            session.messages.extend(replies)
            self._persist(session)
            self._touch_room(session.state.story_id, replies[-1].timestamp)
            return replies

    def _clarification_reply(self, session: ChatSession, utterance) -> ChatMessage:
        try:
            card = self.providers.entity_lookup.lookup(
                utterance.surface, utterance.entity_kind
            )
        except ProviderTransportError:
            return self._system_message(session, "error", "lookup unavailable")
        if card is None:
            return self._system_message(
                session, "no_answer", f"No entry found for '{utterance.surface}'."
            )
        return self._system_message(
            session,
            "clarification",
            f"{card.name}: {card.summary}",
            geo=card.geo,
        )

    def _question_reply(
        self, session: ChatSession, text: str, origin: str
    ) -> list[ChatMessage]:
        graph = self.pruned_graph(session.state.story_id)
        state = session.state

        selection: AnswerSelection | None = None
        served_from_cache = False
        if origin == ORIGIN_RECOMMENDED:
            qid = next(
                (r.question_id for r in session.last_recommended if r.text == text),
                None,
            )
            if (
                qid is not None
                and session.cache is not None
                and session.cache.valid_for(state)
                and qid in session.cache.entries
            ):
                selection = session.cache.entries[qid]
                served_from_cache = True

        if not served_from_cache:
            try:
                selection = select_answer_paragraph(
                    state, graph, self.corpus, text, self.providers.question_answerer,
                    self.config.engine,
                )
            except ProviderTransportError:
                return [self._system_message(session, "error", "answer unavailable")]

        if selection is None:
            return [
                self._system_message(
                    session,
                    "no_answer",
                    "I could not find an answer to that in this story.",
                )
            ]

        paragraph = self.corpus.paragraph(selection.paragraph_id)
        article = self.corpus.article(paragraph.article_id)
        display, span = trim_reply(
            paragraph.text, selection.verdict.answer_span, self.config.engine.reply_word_target
        )
        answer = self._system_message(
            session,
            "answer",
            display,
            answer_span=span,
            source=article.source,
            repeat=selection.repeat,
        )
        mark_read(state, graph, selection.paragraph_id)
        recs = self._recommendations(session, graph)
        session.last_recommended = recs
        return [answer, self._recommendations_message(session, recs)]

    def recommendations(self, session_id: str) -> tuple[RecommendedQuestion, ...]:
        session = self._session(session_id)
        with session.lock:
            graph = self.pruned_graph(session.state.story_id)
            recs = self._recommendations(session, graph)
            session.last_recommended = recs
            return recs

    def refresh_precomputed(self, session_id: str) -> int:
        """Precompute answers for the session's current recommendations.

        Runs outside the serve path (background task or between REPL
        turns); returns the number of cached entries.
        """
        session = self._session(session_id)
        with session.lock:
            graph = self.pruned_graph(session.state.story_id)
            session.cache = precompute_answers(
                session.state,
                graph,
                self.corpus,
                self.providers.question_answerer,
                self.config.engine,
            )
            return len(session.cache.entries)

    # --- replay ---------------------------------------------------------------

    def replay_session(self, session_id: str) -> tuple[ConversationState, bool]:
        """Rebuild a session's Q&A state by re-posting its asked-question log
        through a shadow service; returns (shadow state, matches persisted).

        Event displays are not part of the log; shown_events is compared via
        the persisted message history instead.
        """
        from ..store import MemoryStore

        session = self._session(session_id)
        with session.lock:
            asked = list(session.state.asked_questions)
            story_id = session.state.story_id
            persisted_read = set(session.state.read_paragraphs)
            persisted_answered = set(session.state.answered_questions)

        shadow_store = MemoryStore()
        graph_doc = self.store.load(f"graphs/{story_id}")
        if graph_doc is None:
            raise NotReadyError(f"story '{story_id}' has no graph")
        shadow_store.save(f"graphs/{story_id}", graph_doc)
        shadow = ChatService(
            corpus=self.corpus,
            store=shadow_store,
            config=self.config,
            providers=self.providers,
            clock=LogicalClock(),
        )
        view = shadow.open_room("replay", story_id)
        for entry in asked:
            shadow.post_message(view.session_id, entry.text, entry.origin)
        shadow_state = shadow._session(view.session_id).state
        matches = (
            shadow_state.read_paragraphs == persisted_read
            and shadow_state.answered_questions == persisted_answered
        )
        return shadow_state, matches
