"""Routing of user utterances.

Three buckets: patterned clarification questions (who/where/acronym,
answered from the entity table), a fixed list of greetings and phatic
phrases, and everything else as an open question for the news corpus.
The clarification pattern set is configuration, so deployments can extend
it beyond the three defaults.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

CLARIFICATION = "clarification"
OPEN_QUESTION = "open_question"
SMALL_TALK = "small_talk"


@dataclass(frozen=True)
class Utterance:
    kind: str  # CLARIFICATION | OPEN_QUESTION | SMALL_TALK
    entity_kind: str | None = None  # person | org | place | acronym
    surface: str | None = None


def _normalize(text: str) -> str:
    return re.sub(r"[^a-z0-9' ]+", "", text.lower()).strip()


class UtteranceClassifier:
    def __init__(
        self,
        patterns: tuple[tuple[str, str], ...],
        small_talk: tuple[str, ...],
    ):
        self._patterns = [
            (re.compile(pattern, re.IGNORECASE), kind) for pattern, kind in patterns
        ]
        self._small_talk = {_normalize(phrase) for phrase in small_talk}

    def classify(self, text: str) -> Utterance:
        stripped = text.strip().rstrip("?!.").strip()
        if not stripped:
            return Utterance(kind=SMALL_TALK)
        if _normalize(stripped) in self._small_talk:
            return Utterance(kind=SMALL_TALK)
        for pattern, kind in self._patterns:
            m = pattern.match(stripped)
            if m:
                surface = m.group("surface").strip().strip("\"'")
                if surface:
                    return Utterance(kind=CLARIFICATION, entity_kind=kind, surface=surface)
        return Utterance(kind=OPEN_QUESTION)
