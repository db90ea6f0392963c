"""Candidate question bank for a story.

Per paragraph: generate up to k_beam candidates, drop questions outside
the word-count bounds, then greedily deduplicate lexically close ones
(keeping the higher-scoring of any close pair). Deduplication is scoped to
a single paragraph; cross-paragraph redundancy is resolved later by graph
pruning. Identical texts from different paragraphs share an id (hash of
story id + text) and merge into one graph node downstream.
"""

from __future__ import annotations

import hashlib
import logging
from collections import Counter
from dataclasses import dataclass

from .config import EngineConfig
from .corpus import Corpus, Story
from .errors import ProviderTransportError
from .providers.base import GeneratedQuestion, QuestionGenerator
from .textutil import question_tokens, question_word_count

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Question:
    id: str
    text: str
    tokens: tuple[str, ...]
    source_paragraph_id: str
    score: float


def question_id(story_id: str, text: str) -> str:
    digest = hashlib.sha1(f"{story_id}\n{text}".encode("utf-8")).hexdigest()
    return f"q{digest[:16]}"


def word_count(text: str) -> int:
    """Whitespace words with the terminal question mark stripped; pure
    punctuation tokens do not count."""
    return question_word_count(text)


def length_filter(candidates: list[Question], cfg: EngineConfig) -> list[Question]:
    """Keep candidates with min_words <= word_count <= max_words, in order."""
    return [
        q for q in candidates if cfg.min_words <= word_count(q.text) <= cfg.max_words
    ]


def lexical_distance(a: Question, b: Question) -> int:
    """Bag-of-words distance: the larger side of the multiset difference.

    max(|tokens(a) \\ tokens(b)|, |tokens(b) \\ tokens(a)|) over multisets,
    which counts substitutions once and length changes by their size.
    """
    ca, cb = Counter(a.tokens), Counter(b.tokens)
    left = sum((ca - cb).values())
    right = sum((cb - ca).values())
    return max(left, right)


def dedup_questions(candidates: list[Question], cfg: EngineConfig) -> list[Question]:
    """Greedy sweep over score-descending candidates: keep a candidate iff
    it is farther than dup_word_delta from every question already kept."""
    kept: list[Question] = []
    for candidate in candidates:
        if all(lexical_distance(candidate, k) > cfg.dup_word_delta for k in kept):
            kept.append(candidate)
    return kept


def _to_question(story: Story, generated: GeneratedQuestion) -> Question:
    return Question(
        id=question_id(story.id, generated.text),
        text=generated.text,
        tokens=question_tokens(generated.text),
        source_paragraph_id=generated.paragraph_id,
        score=generated.score,
    )


def build_question_bank(
    story: Story,
    corpus: Corpus,
    qg: QuestionGenerator,
    cfg: EngineConfig,
) -> list[Question]:
    """Filtered, per-paragraph deduplicated candidate set for one story.

    A provider failure on a paragraph skips that paragraph (warning logged)
    and the build continues.
    """
    bank: list[Question] = []
    for paragraph in corpus.story_paragraphs(story.id):
        try:
            generated = qg.generate(paragraph, cfg.k_beam)
        except ProviderTransportError as exc:
            log.warning(
                "question generation failed for paragraph %s: %s", paragraph.id, exc
            )
            continue
        candidates = [_to_question(story, g) for g in generated]
        candidates.sort(key=lambda q: -q.score)
        candidates = length_filter(candidates, cfg)
        bank.extend(dedup_questions(candidates, cfg))
    return bank


def bank_to_document(story_id: str, bank: list[Question], cfg: EngineConfig) -> dict:
    return {
        "story_id": story_id,
        "k_beam": cfg.k_beam,
        "min_words": cfg.min_words,
        "max_words": cfg.max_words,
        "dup_word_delta": cfg.dup_word_delta,
        "questions": [
            {
                "id": q.id,
                "text": q.text,
                "tokens": list(q.tokens),
                "source_paragraph_id": q.source_paragraph_id,
                "score": q.score,
            }
            for q in bank
        ],
    }


def bank_from_document(doc: dict) -> list[Question]:
    return [
        Question(
            id=raw["id"],
            text=raw["text"],
            tokens=tuple(raw["tokens"]),
            source_paragraph_id=raw["source_paragraph_id"],
            score=raw["score"],
        )
        for raw in doc["questions"]
    ]


def bank_key(story_id: str) -> str:
    return f"banks/{story_id}"
