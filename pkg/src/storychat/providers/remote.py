"""HTTP clients for model servers.

Wire format, JSON over POST:

  question generation:  {"paragraph_text": ...}              -> {"questions": [{"text": ..., "score": ...}]}
  question answering:   {"paragraph_text": ..., "question": ...} -> {"confidence": ..., "span": [start, end] | null}
  event summarization:  {"headlines": [...]}                 -> {"summary": ...}
  entity lookup:        {"surface": ..., "kind": ...}        -> {"card": {...} | null}

Any transport failure or malformed payload raises ProviderTransportError;
requests are never retried here (the engine decides how to degrade).
"""

from __future__ import annotations

from typing import Sequence

import httpx

from ..corpus import Paragraph
from ..errors import ProviderTransportError
from .base import EntityCard, GeneratedQuestion, QaVerdict

DEFAULT_TIMEOUT = 10.0


class _RemoteBase:
    def __init__(self, url: str, timeout: float = DEFAULT_TIMEOUT, client: httpx.Client | None = None):
        self.url = url
        self.timeout = timeout
        self._client = client

    def _post(self, payload: dict) -> dict:
        try:
            if self._client is not None:
                response = self._client.post(self.url, json=payload, timeout=self.timeout)
            else:
                response = httpx.post(self.url, json=payload, timeout=self.timeout)
            response.raise_for_status()
            body = response.json()
        except httpx.HTTPError as exc:
            raise ProviderTransportError(f"{self.url}: {exc}") from exc
        except ValueError as exc:
            raise ProviderTransportError(f"{self.url}: invalid JSON response") from exc
        if not isinstance(body, dict):
            raise ProviderTransportError(f"{self.url}: response is not an object")
        return body


class RemoteQuestionGenerator(_RemoteBase):
    def generate(self, paragraph: Paragraph, k: int) -> list[GeneratedQuestion]:
        body = self._post({"paragraph_text": paragraph.text})
        try:
            questions = [
                GeneratedQuestion(
                    text=item["text"], score=float(item["score"]), paragraph_id=paragraph.id
                )
                for item in body["questions"]
            ]
        except (KeyError, TypeError) as exc:
            raise ProviderTransportError(f"{self.url}: malformed questions payload") from exc
        questions.sort(key=lambda q: (-q.score, q.text))
        return questions[:k]


class RemoteQuestionAnswerer(_RemoteBase):
    def answer(self, question: str, paragraph: Paragraph) -> QaVerdict:
        body = self._post({"paragraph_text": paragraph.text, "question": question})
        try:
            confidence = float(body["confidence"])
            span = body.get("span")
        except (KeyError, TypeError) as exc:
            raise ProviderTransportError(f"{self.url}: malformed verdict payload") from exc
        if confidence <= 0.0:
            return QaVerdict(confidence=0.0, answer_span=None)
        if (
            not isinstance(span, (list, tuple))
            or len(span) != 2
            or not 0 <= int(span[0]) < int(span[1]) <= len(paragraph.text)
        ):
            raise ProviderTransportError(f"{self.url}: span missing or out of bounds")
        return QaVerdict(confidence=confidence, answer_span=(int(span[0]), int(span[1])))


class RemoteEventSummarizer(_RemoteBase):
    def summarize(self, headline_pool: Sequence[str]) -> str:
        body = self._post({"headlines": list(headline_pool)})
        summary = body.get("summary")
        if not isinstance(summary, str):
            raise ProviderTransportError(f"{self.url}: malformed summary payload")
        return summary


class RemoteEntityLookup(_RemoteBase):
    def lookup(self, surface: str, kind: str) -> EntityCard | None:
        body = self._post({"surface": surface, "kind": kind})
        card = body.get("card")
        if card is None:
            return None
        try:
            geo = card.get("geo")
            return EntityCard(
                name=card["name"],
                summary=card["summary"],
                geo=(float(geo["lat"]), float(geo["lon"])) if geo else None,
            )
        except (KeyError, TypeError) as exc:
            raise ProviderTransportError(f"{self.url}: malformed card payload") from exc
