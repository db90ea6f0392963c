"""Assembly root: wires store, corpus, config, and providers together and
orchestrates the offline builds (ingest, question bank, graph)."""

from __future__ import annotations

from pathlib import Path

from filelock import FileLock

from .chat.service import ChatService, Clock
from .config import AppConfig
from .corpus import Corpus, CorpusSummary, ingest_corpus, load_corpus
from .errors import NotReadyError
from .pq_graph import PQGraph, build_graph, graph_key, greedy_set_cover
from .providers import providers_from_endpoints
from .providers.base import ProviderSet
from .question_bank import (
    Question,
    bank_from_document,
    bank_key,
    bank_to_document,
    build_question_bank,
)
from .store import DocumentStore, JsonFileStore


class Engine:
    def __init__(
        self,
        store: DocumentStore,
        config: AppConfig | None = None,
        providers: ProviderSet | None = None,
        lock_path: str | Path | None = None,
    ):
        self.store = store
        self.config = config or AppConfig()
        self.providers = providers or providers_from_endpoints(
            self.config.providers, self.config.engine.reply_word_target
        )
        self._lock_path = lock_path
        self._corpus: Corpus | None = None

    @classmethod
    def at(
        cls,
        data_dir: str | Path,
        config: AppConfig | None = None,
        providers: ProviderSet | None = None,
    ) -> "Engine":
        data_dir = Path(data_dir)
        return cls(
            JsonFileStore(data_dir),
            config=config,
            providers=providers,
            lock_path=data_dir / ".ingest.lock",
        )

    @property
    def corpus(self) -> Corpus:
        if self._corpus is None:
            self._corpus = load_corpus(self.store)
        return self._corpus

    def ingest(self, corpus_path: str | Path) -> CorpusSummary:
        """Single-writer ingest; readers see the corpus only once persisted."""
        if self._lock_path is not None:
            with FileLock(str(self._lock_path)):
                summary = ingest_corpus(corpus_path, self.store)
        else:
            summary = ingest_corpus(corpus_path, self.store)
        self._corpus = None
        return summary

    def build_bank(self, story_id: str) -> list[Question]:
        story = self.corpus.story(story_id)
        bank = build_question_bank(
            story, self.corpus, self.providers.question_generator, self.config.engine
        )
        self.store.save(
            bank_key(story_id), bank_to_document(story_id, bank, self.config.engine)
        )
        return bank

    def load_bank(self, story_id: str) -> list[Question]:
        doc = self.store.load(bank_key(story_id))
        if doc is None:
            raise NotReadyError(
                f"story '{story_id}' has no question bank; run build-bank first"
            )
        return bank_from_document(doc)

    def build_graph(self, story_id: str) -> PQGraph:
        story = self.corpus.story(story_id)
        bank = self.load_bank(story_id)
        graph = build_graph(
            story, self.corpus, bank, self.providers.question_answerer, self.config.engine
        )
        graph.covering_questions = greedy_set_cover(graph)
        self.store.save(graph_key(story_id), graph.to_document())
        return graph

    def load_graph(self, story_id: str) -> PQGraph:
        doc = self.store.load(graph_key(story_id))
        if doc is None:
            raise NotReadyError(
                f"story '{story_id}' has no graph; run build-graph first"
            )
        return PQGraph.from_document(doc)

    def chat_service(self, clock: Clock | None = None) -> ChatService:
        return ChatService(
            corpus=self.corpus,
            store=self.store,
            config=self.config,
            providers=self.providers,
            clock=clock,
        )
