from __future__ import annotations

from pathlib import Path

import pytest

from storychat.config import AppConfig, EngineConfig
from storychat.corpus import Article, Corpus, Event, Paragraph, Story, parse_timestamp
from storychat.engine import Engine
from storychat.pq_graph import PQGraph
from storychat.store import MemoryStore
from storychat.textutil import split_sentences

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS_FILE = FIXTURES / "corpus.jsonl"

STORY_IDS = ("lakeport-flood", "northgate-strike", "saltmere-fog")


def make_paragraph(text: str, pid: str = "p0", article_id: str = "a0", index: int = 0) -> Paragraph:
    return Paragraph(
        id=pid,
        article_id=article_id,
        index=index,
        text=text,
        sentence_spans=tuple(split_sentences(text)),
    )


def make_graph(
    edges: dict[str, set[str]],
    paragraphs: set[str] | None = None,
    confidences: dict[tuple[str, str], float] | None = None,
    threshold: float = 0.5,
    pruned: bool = False,
    cover: tuple[str, ...] | None = None,
) -> PQGraph:
    """Hand-built graph: `edges` maps question id -> paragraph neighbors."""
    all_paragraphs = set(paragraphs or set())
    for pids in edges.values():
        all_paragraphs |= pids
    edge_map = {}
    for qid, pids in edges.items():
        for pid in pids:
            edge_map[(pid, qid)] = (confidences or {}).get((pid, qid), 1.0)
    graph = PQGraph(
        story_id="story",
        paragraph_ids=tuple(sorted(all_paragraphs)),
        question_texts={qid: f"question {qid}?" for qid in edges},
        edges=edge_map,
        qa_threshold=threshold,
        pruned=pruned,
    )
    if cover is not None:
        graph.covering_questions = cover
    return graph


def make_pruned_graph(
    edges: dict[str, set[str]],
    paragraphs: set[str] | None = None,
    confidences: dict[tuple[str, str], float] | None = None,
    threshold: float = 0.5,
) -> PQGraph:
    """A graph already in pruned form whose covering set is every listed
    question; lets state-tracking tests pick exact question/paragraph shapes."""
    return make_graph(
        edges,
        paragraphs=paragraphs,
        confidences=confidences,
        threshold=threshold,
        pruned=True,
        cover=tuple(sorted(edges)),
    )


def make_mini_corpus(
    paragraph_texts: dict[str, str], story_id: str = "story", source: str = "wire.example"
) -> Corpus:
    """Single story / event / article corpus with caller-chosen paragraph ids."""
    corpus = Corpus()
    pids = tuple(paragraph_texts)
    for index, (pid, text) in enumerate(paragraph_texts.items()):
        corpus.paragraphs[pid] = Paragraph(
            id=pid,
            article_id="a0",
            index=index,
            text=text,
            sentence_spans=tuple(split_sentences(text)),
        )
    stamp = parse_timestamp("2024-01-01T00:00:00Z")
    corpus.articles["a0"] = Article(
        id="a0",
        story_id=story_id,
        source=source,
        headline="Mini corpus headline",
        published_at=stamp,
        paragraph_ids=pids,
    )
    corpus.events["e0"] = Event(
        id="e0",
        story_id=story_id,
        occurred_at=stamp,
        article_ids=("a0",),
        headline_pool=("Mini corpus headline",),
    )
    corpus.stories[story_id] = Story(
        id=story_id, name="Mini Story", event_ids=("e0",), article_ids=("a0",)
    )
    return corpus


@pytest.fixture(scope="session")
def template_store() -> MemoryStore:
    """Fixture corpus ingested and fully built, reused read-only."""
    store = MemoryStore()
    engine = Engine(store)
    engine.ingest(CORPUS_FILE)
    for summary in engine.corpus.list_stories():
        engine.build_bank(summary.id)
        engine.build_graph(summary.id)
    return store


@pytest.fixture
def built_store(template_store: MemoryStore) -> MemoryStore:
    return template_store.clone()


@pytest.fixture
def built_engine(built_store: MemoryStore) -> Engine:
    return Engine(built_store)


@pytest.fixture
def app_config() -> AppConfig:
    return AppConfig()


@pytest.fixture
def engine_config() -> EngineConfig:
    return EngineConfig()
