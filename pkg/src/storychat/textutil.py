"""Text primitives shared across the engine.

Tokenization, word counting, and rule-based sentence splitting. The
stopword and abbreviation lists are versioned data files shipped with the
package; everything here is deterministic by construction.
"""

from __future__ import annotations

import re
from importlib import resources

_WORD_RE = re.compile(r"[a-z0-9]+(?:['’.,][a-z0-9]+)*")
_HAS_ALNUM_RE = re.compile(r"[A-Za-z0-9]")
_TOKEN_STRIP = "\"'“”‘’.,;:!?()[]{}<>«»-–—*"
_TERMINALS = ".!?"
_CLOSERS = "\"')]’”"


def _load_wordlist(name: str) -> frozenset[str]:
    text = resources.files("storychat.data").joinpath(name).read_text("utf-8")
    words = []
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.append(line)
    return frozenset(words)


STOPWORDS = _load_wordlist("stopwords.txt")
ABBREVIATIONS = _load_wordlist("abbreviations.txt")


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens; internal punctuation like 2,000 or u.s is kept."""
    return _WORD_RE.findall(text.lower())


def content_tokens(text: str) -> frozenset[str]:
    """Distinct lowercased tokens with stopwords removed."""
    return frozenset(t for t in tokenize(text) if t not in STOPWORDS)


def count_words(text: str) -> int:
    """Whitespace-delimited tokens that contain at least one alphanumeric."""
    return sum(1 for tok in text.split() if _HAS_ALNUM_RE.search(tok))


def question_word_count(text: str) -> int:
    """Word count of a question with its terminal question mark stripped."""
    return count_words(text.rstrip().rstrip("?"))


def question_tokens(text: str) -> tuple[str, ...]:
    """Lowercased word list used for lexical comparison between questions."""
    toks = []
    for tok in text.rstrip().rstrip("?").split():
        t = tok.strip(_TOKEN_STRIP).lower()
        if t:
            toks.append(t)
    return tuple(toks)


def _word_before(text: str, idx: int) -> str:
    """The token immediately preceding text[idx], for abbreviation checks."""
    m = re.search(r"[\w.]+$", text[:idx])
    return m.group(0) if m else ""


def split_sentences(text: str) -> list[tuple[int, int]]:
    """Split text into sentence spans of (start, end) character offsets.

    A boundary is a run of terminal punctuation (plus trailing closing
    quotes/brackets) followed by whitespace or end of text, unless the run
    starts with a period whose preceding token is on the abbreviation list.
    Spans partition the non-whitespace content; text without terminal
    punctuation yields a single span.
    """
    n = len(text)
    spans: list[tuple[int, int]] = []

    def next_content(pos: int) -> int:
        while pos < n and text[pos].isspace():
            pos += 1
        return pos

    start = next_content(0)
    i = start
    while i < n:
        ch = text[i]
        if ch not in _TERMINALS:
            i += 1
            continue
        j = i + 1
        while j < n and text[j] in _TERMINALS:
            j += 1
        while j < n and text[j] in _CLOSERS:
            j += 1
        if j < n and not text[j].isspace():
            i = j
            continue
        if ch == "." and _word_before(text, i).rstrip(".").lower() in ABBREVIATIONS:
            i = j
            continue
        spans.append((start, j))
        start = next_content(j)
        i = start
    if start < n:
        end = n
        while end > start and text[end - 1].isspace():
            end -= 1
        if end > start:
            spans.append((start, end))
    return spans


def keyword_of(text: str) -> str | None:
    """The most salient token of a snippet: longest alphabetic non-stopword,
    earliest occurrence on ties."""
    best: str | None = None
    for tok in tokenize(text):
        if tok in STOPWORDS or not tok.isalpha():
            continue
        if best is None or len(tok) > len(best):
            best = tok
    return best
