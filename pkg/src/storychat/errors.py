"""Exception hierarchy for the engine."""


class StoryChatError(Exception):
    """Base class for all engine errors."""


class CorpusFormatError(StoryChatError):
    """A corpus record is structurally invalid.

    Carries the 1-based line number and the offending field so ingest
    failures point at the exact record.
    """

    def __init__(self, line_no: int, field: str, message: str):
        super().__init__(f"line {line_no}, field '{field}': {message}")
        self.line_no = line_no
        self.field = field


class IngestConflictError(StoryChatError):
    """An id was re-ingested with different content."""


class ReferentialIntegrityError(StoryChatError):
    """A record references an id that does not resolve as required."""


class NotFoundError(StoryChatError):
    """A referenced story, session, question, or paragraph does not exist."""


class NotReadyError(StoryChatError):
    """A prerequisite build artifact (bank, graph) is missing."""


class DomainError(StoryChatError):
    """An argument is outside the domain of the operation (e.g. a paragraph
    from a different story)."""


class ProviderTransportError(StoryChatError):
    """A model provider could not be reached or returned garbage."""
