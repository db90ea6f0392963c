"""Engine and application configuration.

EngineConfig carries the numeric knobs of the question pipeline; AppConfig
adds service-level settings (story blocklist, provider endpoints,
clarification patterns). Both load from a single JSON config file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

DEFAULT_SMALL_TALK = (
    "hello",
    "hi",
    "hey",
    "how are you",
    "how is it going",
    "how's it going",
    "good morning",
    "good afternoon",
    "good evening",
    "what's up",
    "whats up",
    "nice to meet you",
    "thanks",
    "thank you",
    "bye",
    "goodbye",
)

# (regex with a named `surface` group, entity kind hint)
DEFAULT_CLARIFICATION_PATTERNS = (
    (r"^who\s+(?:is|are|was|were)\s+(?P<surface>.+)$", "person"),
    (r"^where\s+(?:is|are|was|were)\s+(?P<surface>.+)$", "place"),
    (r"^what\s+does\s+(?P<surface>.+?)\s+stand\s+for$", "acronym"),
)


@dataclass(frozen=True)
class EngineConfig:
    """Knobs of the question generation / graph / recommendation pipeline."""

    k_beam: int = 20
    min_words: int = 5
    max_words: int = 12
    dup_word_delta: int = 2
    qa_threshold: float = 0.5
    reply_word_target: int = 30
    recommend_n: int = 3

    def __post_init__(self) -> None:
        if self.k_beam < 1:
            raise ValueError("k_beam must be >= 1")
        if self.min_words > self.max_words:
            raise ValueError("min_words must be <= max_words")
        if not 0.0 < self.qa_threshold < 1.0:
            raise ValueError("qa_threshold must be in (0, 1)")
        if self.recommend_n < 1:
            raise ValueError("recommend_n must be >= 1")


@dataclass(frozen=True)
class ProviderEndpoints:
    """Remote provider URLs; None means use the built-in reference provider."""

    question_generator_url: str | None = None
    question_answerer_url: str | None = None
    event_summarizer_url: str | None = None
    entity_lookup_url: str | None = None
    timeout_seconds: float = 10.0
    entity_table: str | None = None  # path to a custom entity fixture table


@dataclass(frozen=True)
class AppConfig:
    engine: EngineConfig = field(default_factory=EngineConfig)
    story_blocklist: tuple[str, ...] = ()
    providers: ProviderEndpoints = field(default_factory=ProviderEndpoints)
    clarification_patterns: tuple[tuple[str, str], ...] = DEFAULT_CLARIFICATION_PATTERNS
    small_talk: tuple[str, ...] = DEFAULT_SMALL_TALK


def load_config(path: str | Path | None) -> AppConfig:
    """Load an AppConfig from a JSON file; missing keys keep their defaults."""
    if path is None:
        return AppConfig()
    raw = json.loads(Path(path).read_text("utf-8"))
    cfg = AppConfig()
    if "engine" in raw:
        cfg = replace(cfg, engine=EngineConfig(**raw["engine"]))
    if "story_blocklist" in raw:
        cfg = replace(cfg, story_blocklist=tuple(raw["story_blocklist"]))
    if "providers" in raw:
        cfg = replace(cfg, providers=ProviderEndpoints(**raw["providers"]))
    if "clarification_patterns" in raw:
        patterns = tuple((p["pattern"], p["kind"]) for p in raw["clarification_patterns"])
        cfg = replace(cfg, clarification_patterns=patterns)
    if "small_talk" in raw:
        cfg = replace(cfg, small_talk=tuple(raw["small_talk"]))
    return cfg
