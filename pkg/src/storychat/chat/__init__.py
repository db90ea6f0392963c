from .classify import CLARIFICATION, OPEN_QUESTION, SMALL_TALK, Utterance, UtteranceClassifier
from .service import (
    ChatMessage,
    ChatService,
    Clock,
    LogicalClock,
    RecommendedQuestion,
    Room,
    RoomView,
    trim_reply,
)

__all__ = [
    "CLARIFICATION",
    "OPEN_QUESTION",
    "SMALL_TALK",
    "Utterance",
    "UtteranceClassifier",
    "ChatMessage",
    "ChatService",
    "Clock",
    "LogicalClock",
    "RecommendedQuestion",
    "Room",
    "RoomView",
    "trim_reply",
]
