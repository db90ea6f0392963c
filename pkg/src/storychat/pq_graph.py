"""Paragraph/question bipartite graph with set-cover pruning.

Every (paragraph, question) pair of a story is scored by the answering
provider; an edge exists when confidence clears the threshold
(inclusive). Questions with identical text are merged into a single node
before scoring. Pruning keeps the greedy set cover over coverable
paragraphs: repeatedly take the question answering the most not-yet-covered
paragraphs, breaking ties by higher summed edge confidence over those
paragraphs, then by question id. Paragraph nodes always survive pruning.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .config import EngineConfig
from .corpus import Corpus, Story
from .errors import NotFoundError, ProviderTransportError
from .providers.base import QuestionAnswerer
from .question_bank import Question

log = logging.getLogger(__name__)


@dataclass
class PQGraph:
    story_id: str
    paragraph_ids: tuple[str, ...]
    question_texts: dict[str, str]  # question id -> text
    edges: dict[tuple[str, str], float]  # (paragraph id, question id) -> confidence
    qa_threshold: float
    pruned: bool = False
    covering_questions: tuple[str, ...] | None = None
    qa_failures: int = 0
    p_adj: dict[str, set[str]] = field(default_factory=dict, repr=False)
    q_adj: dict[str, set[str]] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._index()

    def _index(self) -> None:
        self.p_adj = {pid: set() for pid in self.paragraph_ids}
        self.q_adj = {qid: set() for qid in self.question_texts}
        for (pid, qid), confidence in self.edges.items():
            if pid not in self.p_adj or qid not in self.q_adj:
                raise ValueError(f"edge ({pid}, {qid}) references a non-member node")
            if confidence < self.qa_threshold:
                raise ValueError(f"edge ({pid}, {qid}) below threshold")
            self.p_adj[pid].add(qid)
            self.q_adj[qid].add(pid)

    # --- metrics -------------------------------------------------------

    def question_neighbors(self, question_id: str) -> frozenset[str]:
        if question_id not in self.q_adj:
            raise NotFoundError(f"unknown question '{question_id}'")
        return frozenset(self.q_adj[question_id])

    def paragraph_neighbors(self, paragraph_id: str) -> frozenset[str]:
        if paragraph_id not in self.p_adj:
            raise NotFoundError(f"unknown paragraph '{paragraph_id}'")
        return frozenset(self.p_adj[paragraph_id])

    def question_importance(self, question_id: str) -> int:
        """Degree of a question node: how many distinct paragraphs answer it."""
        return len(self.question_neighbors(question_id))

    def paragraph_degree(self, paragraph_id: str) -> int:
        return len(self.paragraph_neighbors(paragraph_id))

    def related_questions(self, question_id: str) -> list[tuple[str, int]]:
        """Other questions sharing at least one paragraph neighbor, with
        intersection sizes, sorted by size descending then id ascending."""
        mine = self.question_neighbors(question_id)
        related = []
        for other, neighbors in self.q_adj.items():
            if other == question_id:
                continue
            shared = len(mine & neighbors)
            if shared > 0:
                related.append((other, shared))
        related.sort(key=lambda item: (-item[1], item[0]))
        return related

    # --- persistence ---------------------------------------------------

    def to_document(self) -> dict:
        return {
            "story_id": self.story_id,
            "qa_threshold": self.qa_threshold,
            "paragraph_ids": sorted(self.paragraph_ids),
            "questions": [
                {"id": qid, "text": self.question_texts[qid]}
                for qid in sorted(self.question_texts)
            ],
            "edges": [
                [pid, qid, self.edges[(pid, qid)]]
                for pid, qid in sorted(self.edges)
            ],
            "covering_question_ids": list(self.covering_questions or []),
            "qa_failures": self.qa_failures,
        }

    @classmethod
    def from_document(cls, doc: dict) -> "PQGraph":
        graph = cls(
            story_id=doc["story_id"],
            paragraph_ids=tuple(doc["paragraph_ids"]),
            question_texts={q["id"]: q["text"] for q in doc["questions"]},
            edges={(pid, qid): conf for pid, qid, conf in doc["edges"]},
            qa_threshold=doc["qa_threshold"],
            qa_failures=doc.get("qa_failures", 0),
        )
        cover = doc.get("covering_question_ids")
        if cover:
            graph.covering_questions = tuple(cover)
        return graph


def build_graph(
    story: Story,
    corpus: Corpus,
    bank: list[Question],
    qa: QuestionAnswerer,
    cfg: EngineConfig,
) -> PQGraph:
    """Unpruned graph over all story paragraphs and all distinct bank
    question texts. A provider failure on a pair counts as no edge."""
    paragraphs = corpus.story_paragraphs(story.id)
    question_texts: dict[str, str] = {}
    for question in bank:
        question_texts.setdefault(question.id, question.text)

    edges: dict[tuple[str, str], float] = {}
    failures = 0
    for paragraph in paragraphs:
        for qid, text in question_texts.items():
            try:
                verdict = qa.answer(text, paragraph)
            except ProviderTransportError as exc:
                failures += 1
                log.warning("qa failed for (%s, %s): %s", paragraph.id, qid, exc)
                continue
            if verdict.confidence >= cfg.qa_threshold:
                edges[(paragraph.id, qid)] = verdict.confidence

    return PQGraph(
        story_id=story.id,
        paragraph_ids=tuple(p.id for p in paragraphs),
        question_texts=question_texts,
        edges=edges,
        qa_threshold=cfg.qa_threshold,
        qa_failures=failures,
    )


def greedy_set_cover(graph: PQGraph) -> tuple[str, ...]:
    """Greedy cover of all coverable paragraphs (those with at least one
    edge), in selection order. Deterministic: candidates are compared by
    (uncovered paragraphs answered, summed confidence over them) with
    question id ascending as the final tie-break."""
    uncovered = {pid for pid, qids in graph.p_adj.items() if qids}
    remaining = set(graph.q_adj)
    cover: list[str] = []
    while uncovered:
        best_qid = None
        best_rank: tuple[int, float] | None = None
        for qid in sorted(remaining):
            gained = graph.q_adj[qid] & uncovered
            if not gained:
                continue
            rank = (len(gained), sum(graph.edges[(pid, qid)] for pid in gained))
            if best_rank is None or rank > best_rank:
                best_rank = rank
                best_qid = qid
        if best_qid is None:
            break  # unreachable: every uncovered paragraph has an edge
        cover.append(best_qid)
        remaining.discard(best_qid)
        uncovered -= graph.q_adj[best_qid]
    return tuple(cover)


def prune(graph: PQGraph) -> PQGraph:
    """Subgraph restricted to the covering questions. Paragraph nodes are
    kept unchanged; the cover is computed first if absent."""
    cover = graph.covering_questions
    if cover is None:
        cover = greedy_set_cover(graph)
    keep = set(cover)
    pruned = PQGraph(
        story_id=graph.story_id,
        paragraph_ids=graph.paragraph_ids,
        question_texts={qid: t for qid, t in graph.question_texts.items() if qid in keep},
        edges={(pid, qid): c for (pid, qid), c in graph.edges.items() if qid in keep},
        qa_threshold=graph.qa_threshold,
        pruned=True,
        qa_failures=graph.qa_failures,
    )
    pruned.covering_questions = tuple(cover)
    return pruned


def graph_key(story_id: str) -> str:
    return f"graphs/{story_id}"
