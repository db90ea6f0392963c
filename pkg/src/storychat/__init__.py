"""storychat: news-story chatrooms with question tracking.

Articles grouped into stories and events feed a question pipeline: per
paragraph, candidate questions are generated, filtered, and deduplicated;
a bipartite paragraph/question graph links each question to every
paragraph that answers it confidently; greedy set cover prunes the
question set to a minimal covering subset. Conversations track which
questions the shown paragraphs have answered, avoid repeating paragraphs
that answer nothing new, and recommend the most informative open
questions with precomputed answers.
"""

from .config import AppConfig, EngineConfig, load_config
from .engine import Engine

__version__ = "0.1.0"

__all__ = ["AppConfig", "EngineConfig", "Engine", "load_config", "__version__"]
