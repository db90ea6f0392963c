"""Deterministic reference providers.

These are intentionally model-free. The question generator applies fixed
templates per sentence; the answerer scores lexical overlap of content
tokens; the summarizer picks the longest headline; the entity lookup reads
a local fixture table. They exercise exactly the same downstream pipeline
as real model servers, which makes every stage reproducible on a desk.
"""

from __future__ import annotations

import json
import re
from importlib import resources
from pathlib import Path
from typing import Sequence

from ..corpus import Paragraph
from ..textutil import STOPWORDS, content_tokens, count_words, keyword_of, tokenize
from .base import EntityCard, GeneratedQuestion, QaVerdict

_NUMBER_RE = re.compile(r"\d[\d,.]*")
_CAP_WORD_RE = re.compile(r"^[A-Z][a-z]+$")
_DATE_RE = re.compile(
    r"\b(?:january|february|march|april|may|june|july|august|september|"
    r"october|november|december|19\d\d|20\d\d)\b",
    re.IGNORECASE,
)


def _first_alpha_after(sentence: str, end: int) -> str | None:
    m = re.search(r"[A-Za-z]+", sentence[end:])
    return m.group(0).lower() if m else None


def _name_run(sentence: str) -> str | None:
    """First run of capitalized words that does not open the sentence."""
    words = sentence.split()
    run: list[str] = []
    for i, raw in enumerate(words):
        word = raw.strip("\"'“”‘’.,;:!?()[]")
        if i > 0 and _CAP_WORD_RE.match(word) and word.lower() not in STOPWORDS:
            run.append(word)
        elif run:
            break
    if not run:
        return None
    return " ".join(run[:3])


def _question_for_number(sentence: str) -> str | None:
    m = _NUMBER_RE.search(sentence)
    if not m:
        return None
    unit = _first_alpha_after(sentence, m.end())
    if unit is None or unit in STOPWORDS:
        return None
    others = [
        t for t in tokenize(sentence) if t.isalpha() and t not in STOPWORDS and t != unit
    ]
    keyword = max(others, key=len) if others else "story"
    return f"How many {unit} are there in the {keyword}?"


def _question_for_person(sentence: str) -> str | None:
    name = _name_run(sentence)
    if name is None:
        return None
    return f"Who is {name} and what did they do?"


def _question_for_date(sentence: str) -> str | None:
    if not _DATE_RE.search(sentence):
        return None
    keyword = keyword_of(sentence)
    if keyword is None:
        return None
    return f"When did the {keyword} happen?"


def _question_default(sentence: str) -> str | None:
    keyword = keyword_of(sentence)
    if keyword is None:
        return None
    return f"What is said about {keyword}?"


_TEMPLATES = (
    _question_for_number,
    _question_for_person,
    _question_for_date,
    _question_default,
)


class ReferenceQuestionGenerator:
    """Template question generation: per sentence, up to one question per
    matched template, scored 1/(1+rank) in emission order."""

    def generate(self, paragraph: Paragraph, k: int) -> list[GeneratedQuestion]:
        if k < 1:
            raise ValueError("k must be >= 1")
        texts: list[str] = []
        seen: set[str] = set()
        for start, end in paragraph.sentence_spans:
            sentence = paragraph.text[start:end]
            for template in _TEMPLATES:
                question = template(sentence)
                if question is not None and question not in seen:
                    seen.add(question)
                    texts.append(question)
        candidates = [
            GeneratedQuestion(text=text, score=1.0 / (1.0 + rank), paragraph_id=paragraph.id)
            for rank, text in enumerate(texts)
        ]
        candidates.sort(key=lambda q: (-q.score, q.text))
        return candidates[:k]


class ReferenceQuestionAnswerer:
    """Lexical-overlap answering.

    confidence = |question content tokens found in the paragraph| /
    |question content tokens|; the answer span is the sentence sharing the
    most question tokens, earliest sentence on ties.
    """

    def __init__(self) -> None:
        self._question_memo: dict[str, frozenset[str]] = {}
        self._paragraph_memo: dict[str, tuple[frozenset[str], list[frozenset[str]]]] = {}

    def _question_tokens(self, question: str) -> frozenset[str]:
        cached = self._question_memo.get(question)
        if cached is None:
            cached = content_tokens(question)
            self._question_memo[question] = cached
        return cached

    def _paragraph_tokens(self, paragraph: Paragraph):
        cached = self._paragraph_memo.get(paragraph.text)
        if cached is None:
            whole = content_tokens(paragraph.text)
            per_sentence = [
                content_tokens(paragraph.text[a:b]) for a, b in paragraph.sentence_spans
            ]
            cached = (whole, per_sentence)
            self._paragraph_memo[paragraph.text] = cached
        return cached

    def answer(self, question: str, paragraph: Paragraph) -> QaVerdict:
        q_tokens = self._question_tokens(question)
        if not q_tokens:
            return QaVerdict(confidence=0.0, answer_span=None)
        p_tokens, sentence_tokens = self._paragraph_tokens(paragraph)
        shared = q_tokens & p_tokens
        if not shared:
            return QaVerdict(confidence=0.0, answer_span=None)
        confidence = len(shared) / len(q_tokens)
        best_idx = 0
        best_overlap = -1
        for idx, tokens in enumerate(sentence_tokens):
            overlap = len(q_tokens & tokens)
            if overlap > best_overlap:
                best_overlap = overlap
                best_idx = idx
        span = paragraph.sentence_spans[best_idx]
        return QaVerdict(confidence=confidence, answer_span=(span[0], span[1]))


class ReferenceEventSummarizer:
    """Longest headline by word count (lexicographically smallest on ties),
    cut to `max_words` words with a trailing ellipsis when truncated."""

    def __init__(self, max_words: int = 30):
        self.max_words = max_words

    def summarize(self, headline_pool: Sequence[str]) -> str:
        if not headline_pool:
            raise ValueError("headline pool is empty")
        best = sorted(headline_pool, key=lambda h: (-count_words(h), h))[0]
        words = best.split()
        if len(words) <= self.max_words:
            return best
        return " ".join(words[: self.max_words]) + "..."


class ReferenceEntityLookup:
    """Entity cards from a local JSON fixture table keyed by lowercase
    surface form. Summaries are clipped to two paragraph blocks; geo comes
    through only when the table carries coordinates."""

    def __init__(self, table_path: str | Path | None = None):
        if table_path is None:
            raw = resources.files("storychat.data").joinpath("entities.json").read_text("utf-8")
        else:
            raw = Path(table_path).read_text("utf-8")
        self._table: dict[str, dict] = json.loads(raw)

    def lookup(self, surface: str, kind: str) -> EntityCard | None:
        entry = self._table.get(surface.strip().lower())
        if entry is None:
            return None
        blocks = [b for b in entry["summary"].split("\n\n") if b.strip()]
        geo = entry.get("geo")
        return EntityCard(
            name=entry["name"],
            summary="\n\n".join(blocks[:2]),
            geo=(geo["lat"], geo["lon"]) if geo else None,
        )
