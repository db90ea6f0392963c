"""News corpus: stories, events, articles, paragraphs.

The corpus file is line-delimited JSON; each record is tagged with
kind ∈ {story, event, article}. Articles carry their paragraph texts
inline; events list their member articles. Story clustering and event
grouping are inputs, not computed here.

Ingest validates structure (with line numbers), merges idempotently with
any previously persisted corpus, enforces referential integrity, derives
paragraph sentence spans and event headline pools, and persists one
deterministic corpus document.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import (
    CorpusFormatError,
    IngestConflictError,
    NotFoundError,
    NotReadyError,
    ReferentialIntegrityError,
)
from .store import DocumentStore
from .textutil import split_sentences

CORPUS_KEY = "corpus"

_EPOCH_FLOOR = datetime(1, 1, 1, tzinfo=timezone.utc)


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 timestamp; naive values are taken as UTC."""
    s = value.strip()
    if s.endswith(("Z", "z")):
        s = s[:-1] + "+00:00"
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_timestamp(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


@dataclass(frozen=True)
class Paragraph:
    id: str
    article_id: str
    index: int
    text: str
    sentence_spans: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Article:
    id: str
    story_id: str
    source: str
    headline: str
    published_at: datetime
    paragraph_ids: tuple[str, ...]


@dataclass(frozen=True)
class Event:
    id: str
    story_id: str
    occurred_at: datetime
    article_ids: tuple[str, ...]
    headline_pool: tuple[str, ...]  # one headline per member article


@dataclass(frozen=True)
class Story:
    id: str
    name: str
    event_ids: tuple[str, ...]  # chronological
    article_ids: tuple[str, ...]  # union of event members, event order


@dataclass(frozen=True)
class CorpusSummary:
    stories: int
    events: int
    articles: int
    paragraphs: int


@dataclass(frozen=True)
class StorySummary:
    id: str
    name: str
    events: int
    articles: int
    latest_event_at: datetime | None


@dataclass
class Corpus:
    stories: dict[str, Story] = field(default_factory=dict)
    events: dict[str, Event] = field(default_factory=dict)
    articles: dict[str, Article] = field(default_factory=dict)
    paragraphs: dict[str, Paragraph] = field(default_factory=dict)

    def summary(self) -> CorpusSummary:
        return CorpusSummary(
            stories=len(self.stories),
            events=len(self.events),
            articles=len(self.articles),
            paragraphs=len(self.paragraphs),
        )

    def story(self, story_id: str) -> Story:
        try:
            return self.stories[story_id]
        except KeyError:
            raise NotFoundError(f"unknown story '{story_id}'") from None

    def event(self, event_id: str) -> Event:
        try:
            return self.events[event_id]
        except KeyError:
            raise NotFoundError(f"unknown event '{event_id}'") from None

    def article(self, article_id: str) -> Article:
        try:
            return self.articles[article_id]
        except KeyError:
            raise NotFoundError(f"unknown article '{article_id}'") from None

    def paragraph(self, paragraph_id: str) -> Paragraph:
        try:
            return self.paragraphs[paragraph_id]
        except KeyError:
            raise NotFoundError(f"unknown paragraph '{paragraph_id}'") from None

    def story_events(self, story_id: str) -> list[Event]:
        """Events of a story in chronological order."""
        return [self.events[eid] for eid in self.story(story_id).event_ids]

    def story_paragraphs(self, story_id: str) -> list[Paragraph]:
        """All paragraphs of a story in canonical order: event chronology,
        then article order within the event, then paragraph index."""
        out: list[Paragraph] = []
        for event in self.story_events(story_id):
            for aid in event.article_ids:
                article = self.articles[aid]
                out.extend(self.paragraphs[pid] for pid in article.paragraph_ids)
        return out

    def story_of_paragraph(self, paragraph_id: str) -> str:
        return self.articles[self.paragraph(paragraph_id).article_id].story_id

    def list_stories(self) -> list[StorySummary]:
        """Stories sorted by most recent event timestamp descending, ties by
        id ascending."""
        summaries = []
        for story in self.stories.values():
            latest = max(
                (self.events[eid].occurred_at for eid in story.event_ids),
                default=None,
            )
            summaries.append(
                StorySummary(
                    id=story.id,
                    name=story.name,
                    events=len(story.event_ids),
                    articles=len(story.article_ids),
                    latest_event_at=latest,
                )
            )
        summaries.sort(key=lambda s: (-(s.latest_event_at or _EPOCH_FLOOR).timestamp(), s.id))
        return summaries

    def validate(self) -> None:
        """Referential integrity and chronology over the whole corpus."""
        owner_event: dict[str, str] = {}
        for event in self.events.values():
            if event.story_id not in self.stories:
                raise ReferentialIntegrityError(
                    f"event '{event.id}' references unknown story '{event.story_id}'"
                )
            if not event.article_ids:
                raise ReferentialIntegrityError(f"event '{event.id}' has no articles")
            if len(event.headline_pool) != len(event.article_ids):
                raise ReferentialIntegrityError(
                    f"event '{event.id}' headline pool does not match its articles"
                )
            for aid in event.article_ids:
                article = self.articles.get(aid)
                if article is None:
                    raise ReferentialIntegrityError(
                        f"event '{event.id}' references unknown article '{aid}'"
                    )
                if article.story_id != event.story_id:
                    raise ReferentialIntegrityError(
                        f"event '{event.id}' claims article '{aid}' from story "
                        f"'{article.story_id}'"
                    )
                if aid in owner_event:
                    raise ReferentialIntegrityError(
                        f"article '{aid}' belongs to events '{owner_event[aid]}' "
                        f"and '{event.id}'"
                    )
                owner_event[aid] = event.id
        for article in self.articles.values():
            if article.story_id not in self.stories:
                raise ReferentialIntegrityError(
                    f"article '{article.id}' references unknown story "
                    f"'{article.story_id}'"
                )
            if article.id not in owner_event:
                raise ReferentialIntegrityError(
                    f"article '{article.id}' is not a member of any event"
                )
            if not article.paragraph_ids:
                raise ReferentialIntegrityError(
                    f"article '{article.id}' has no paragraphs"
                )
            for pid in article.paragraph_ids:
                if pid not in self.paragraphs:
                    raise ReferentialIntegrityError(
                        f"article '{article.id}' references unknown paragraph '{pid}'"
                    )
        for paragraph in self.paragraphs.values():
            if paragraph.article_id not in self.articles:
                raise ReferentialIntegrityError(
                    f"paragraph '{paragraph.id}' references unknown article "
                    f"'{paragraph.article_id}'"
                )
        for story in self.stories.values():
            stamps = [self.events[eid].occurred_at for eid in story.event_ids]
            if any(a > b for a, b in zip(stamps, stamps[1:])):
                raise ReferentialIntegrityError(
                    f"story '{story.id}' events are not in chronological order"
                )

    def to_document(self) -> dict:
        return {
            "stories": {
                s.id: {
                    "id": s.id,
                    "name": s.name,
                    "event_ids": list(s.event_ids),
                    "article_ids": list(s.article_ids),
                }
                for s in self.stories.values()
            },
            "events": {
                e.id: {
                    "id": e.id,
                    "story_id": e.story_id,
                    "occurred_at": format_timestamp(e.occurred_at),
                    "article_ids": list(e.article_ids),
                    "headline_pool": list(e.headline_pool),
                }
                for e in self.events.values()
            },
            "articles": {
                a.id: {
                    "id": a.id,
                    "story_id": a.story_id,
                    "source": a.source,
                    "headline": a.headline,
                    "published_at": format_timestamp(a.published_at),
                    "paragraph_ids": list(a.paragraph_ids),
                }
                for a in self.articles.values()
            },
            "paragraphs": {
                p.id: {
                    "id": p.id,
                    "article_id": p.article_id,
                    "index": p.index,
                    "text": p.text,
                    "sentence_spans": [list(sp) for sp in p.sentence_spans],
                }
                for p in self.paragraphs.values()
            },
        }

    @classmethod
    def from_document(cls, doc: dict) -> "Corpus":
        corpus = cls()
        for raw in doc.get("paragraphs", {}).values():
            corpus.paragraphs[raw["id"]] = Paragraph(
                id=raw["id"],
                article_id=raw["article_id"],
                index=raw["index"],
                text=raw["text"],
                sentence_spans=tuple(tuple(sp) for sp in raw["sentence_spans"]),
            )
        for raw in doc.get("articles", {}).values():
            corpus.articles[raw["id"]] = Article(
                id=raw["id"],
                story_id=raw["story_id"],
                source=raw["source"],
                headline=raw["headline"],
                published_at=parse_timestamp(raw["published_at"]),
                paragraph_ids=tuple(raw["paragraph_ids"]),
            )
        for raw in doc.get("events", {}).values():
            corpus.events[raw["id"]] = Event(
                id=raw["id"],
                story_id=raw["story_id"],
                occurred_at=parse_timestamp(raw["occurred_at"]),
                article_ids=tuple(raw["article_ids"]),
                headline_pool=tuple(raw["headline_pool"]),
            )
        for raw in doc.get("stories", {}).values():
            corpus.stories[raw["id"]] = Story(
                id=raw["id"],
                name=raw["name"],
                event_ids=tuple(raw["event_ids"]),
                article_ids=tuple(raw["article_ids"]),
            )
        return corpus


def load_corpus(store: DocumentStore) -> Corpus:
    doc = store.load(CORPUS_KEY)
    if doc is None:
        raise NotReadyError("no corpus ingested; run `storychat ingest` first")
    return Corpus.from_document(doc)


# --- ingest -----------------------------------------------------------------

_REQUIRED = {
    "story": ("id", "name"),
    "event": ("id", "story_id", "occurred_at", "article_ids"),
    "article": ("id", "story_id", "source", "headline", "published_at", "paragraphs"),
}


def _require(record: dict, kind: str, line_no: int) -> None:
    for fieldname in _REQUIRED[kind]:
        if fieldname not in record:
            raise CorpusFormatError(line_no, fieldname, f"missing in {kind} record")


def _parse_records(path: str | Path):
    """Yield (line_no, kind, record) for each non-blank line."""
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(line_no, "json", str(exc)) from None
            if not isinstance(record, dict):
                raise CorpusFormatError(line_no, "json", "record is not an object")
            kind = record.get("kind")
            if kind not in _REQUIRED:
                raise CorpusFormatError(
                    line_no, "kind", f"expected story/event/article, got {kind!r}"
                )
            _require(record, kind, line_no)
            yield line_no, kind, record


def _check_duplicate(bucket: dict, key: str, payload: dict, what: str, line_no: int):
    if key in bucket and bucket[key] != payload:
        raise IngestConflictError(
            f"line {line_no}: {what} '{key}' re-ingested with different content"
        )
    bucket[key] = payload


def ingest_corpus(path: str | Path, store: DocumentStore) -> CorpusSummary:
    """Ingest a line-delimited corpus file and persist the merged corpus.

    Re-ingesting identical records is a no-op; an id that reappears with
    different content raises IngestConflictError. Returns counts for the
    whole persisted corpus.
    """
    existing = store.load(CORPUS_KEY)
    corpus = Corpus.from_document(existing) if existing else Corpus()

    # normalized raw payloads keyed by id, for duplicate detection
    raw_stories: dict[str, dict] = {
        s.id: {"name": s.name} for s in corpus.stories.values()
    }
    raw_events: dict[str, dict] = {
        e.id: {
            "story_id": e.story_id,
            "occurred_at": format_timestamp(e.occurred_at),
            "article_ids": list(e.article_ids),
        }
        for e in corpus.events.values()
    }
    raw_articles: dict[str, dict] = {
        a.id: {
            "story_id": a.story_id,
            "source": a.source,
            "headline": a.headline,
            "published_at": format_timestamp(a.published_at),
            "paragraphs": [corpus.paragraphs[p].text for p in a.paragraph_ids],
        }
        for a in corpus.articles.values()
    }

    for line_no, kind, record in _parse_records(path):
        if kind == "story":
            payload = {"name": record["name"]}
            if not str(record["name"]).strip():
                raise CorpusFormatError(line_no, "name", "story name is empty")
            _check_duplicate(raw_stories, record["id"], payload, "story", line_no)
        elif kind == "event":
            try:
                occurred = format_timestamp(parse_timestamp(record["occurred_at"]))
            except ValueError as exc:
                raise CorpusFormatError(line_no, "occurred_at", str(exc)) from None
            if not record["article_ids"]:
                raise CorpusFormatError(line_no, "article_ids", "event has no articles")
            payload = {
                "story_id": record["story_id"],
                "occurred_at": occurred,
                "article_ids": list(record["article_ids"]),
            }
            _check_duplicate(raw_events, record["id"], payload, "event", line_no)
        else:
            if not str(record["source"]).strip():
                raise CorpusFormatError(line_no, "source", "article source is empty")
            try:
                published = format_timestamp(parse_timestamp(record["published_at"]))
            except ValueError as exc:
                raise CorpusFormatError(line_no, "published_at", str(exc)) from None
            texts = record["paragraphs"]
            if not isinstance(texts, list) or not texts:
                raise CorpusFormatError(
                    line_no, "paragraphs", "article must carry at least one paragraph"
                )
            for i, text in enumerate(texts):
                if not isinstance(text, str) or not text.strip():
                    raise CorpusFormatError(
                        line_no, "paragraphs", f"paragraph {i} is empty"
                    )
            payload = {
                "story_id": record["story_id"],
                "source": record["source"],
                "headline": record["headline"],
                "published_at": published,
                "paragraphs": list(texts),
            }
            _check_duplicate(raw_articles, record["id"], payload, "article", line_no)

    corpus = _assemble(raw_stories, raw_events, raw_articles)
    corpus.validate()
    store.save(CORPUS_KEY, corpus.to_document())
    return corpus.summary()


def _assemble(
    raw_stories: dict[str, dict],
    raw_events: dict[str, dict],
    raw_articles: dict[str, dict],
) -> Corpus:
    corpus = Corpus()

    for aid in sorted(raw_articles):
        raw = raw_articles[aid]
        pids = []
        for index, text in enumerate(raw["paragraphs"]):
            pid = f"{aid}:p{index}"
            corpus.paragraphs[pid] = Paragraph(
                id=pid,
                article_id=aid,
                index=index,
                text=text,
                sentence_spans=tuple(split_sentences(text)),
            )
            pids.append(pid)
        corpus.articles[aid] = Article(
            id=aid,
            story_id=raw["story_id"],
            source=raw["source"],
            headline=raw["headline"],
            published_at=parse_timestamp(raw["published_at"]),
            paragraph_ids=tuple(pids),
        )

    for eid in sorted(raw_events):
        raw = raw_events[eid]
        pool = []
        for aid in raw["article_ids"]:
            if aid in corpus.articles:
                pool.append(corpus.articles[aid].headline)
            else:
                raise ReferentialIntegrityError(
                    f"event '{eid}' references unknown article '{aid}'"
                )
        corpus.events[eid] = Event(
            id=eid,
            story_id=raw["story_id"],
            occurred_at=parse_timestamp(raw["occurred_at"]),
            article_ids=tuple(raw["article_ids"]),
            headline_pool=tuple(pool),
        )

    for sid in sorted(raw_stories):
        events = sorted(
            (e for e in corpus.events.values() if e.story_id == sid),
            key=lambda e: (e.occurred_at, e.id),
        )
        article_ids = []
        for event in events:
            article_ids.extend(event.article_ids)
        corpus.stories[sid] = Story(
            id=sid,
            name=raw_stories[sid]["name"],
            event_ids=tuple(e.id for e in events),
            article_ids=tuple(article_ids),
        )
    return corpus
