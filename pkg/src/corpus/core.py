from dataclasses import dataclass, field, replace
from enum import Enum

from corpus.languages import SOURCE_LANGUAGE



IMAGE_TOKEN = "<image>"


class CorpusError(Exception):
    pass

class MalformedInput(CorpusError, ValueError):
    """ Not a JSON array, truncated, or not even text """

class SchemaViolation(CorpusError, ValueError):
    pass

class DuplicateId(SchemaViolation):
    pass

class SinkFailure(CorpusError, OSError):
    pass


class Speaker(str, Enum):
    HUMAN = "human"
    ASSISTANT = "gpt"


@dataclass(frozen=True)
class Turn:
    speaker: Speaker
    text: str
    # Character offset where `<image>` stood in the raw value
    image_marker: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def is_assistant(self):
        return self.speaker is Speaker.ASSISTANT


@dataclass(frozen=True)
class Sample:
    id: str
    image: str
    turns: tuple
    language: str = SOURCE_LANGUAGE
    extra: dict = field(default_factory=dict)

    @property
    def assistant_indexes(self):
        return [ i for i, t in enumerate(self.turns) if t.is_assistant ]

    def with_language(self, language):
        return replace(self, language=language)


@dataclass(frozen=True)
class AssistantPayload:
    sample_id: str
    turn_index: int
    text: str
