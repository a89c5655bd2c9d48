import re
from dataclasses import dataclass, field
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

QUESTION_TYPES = ("Concept", "Data")
LETTERS = ("A", "B", "C", "D")
OPTION_PREFIXES = tuple(f"{letter}. " for letter in LETTERS)
INSUFFICIENT = "insufficient information"
QUESTIONS_PER_BANK = 10
PER_TYPE = 5

ERROR_TYPES = ("MissingContent", "VlmFailure", "ValueMismatch", "VlmMisinterp", "ImplicitInfo", "Other")
ErrorType = Literal["MissingContent", "VlmFailure", "ValueMismatch", "VlmMisinterp", "ImplicitInfo", "Other"]

RICHNESS_LEVELS = ("Low", "Medium", "High")

# "Type 1", "Missing Content", "missing_content" ... → canonical name
_ERROR_ALIASES = {
    **{re.sub(r"[^a-z0-9]", "", name.lower()): name for name in ERROR_TYPES},
    **{f"type{i}": name for i, name in enumerate(
        ("MissingContent", "VlmFailure", "ValueMismatch", "VlmMisinterp", "ImplicitInfo", "Other"), 1)},
    "vlmmisinterpretation": "VlmMisinterp",
    "implicitinformation": "ImplicitInfo",
    "contentvaluemismatch": "ValueMismatch",
    "vlmextractionfailure": "VlmFailure",
}


def _as_id(value):
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    return str(value).strip()


class QuizQuestion(BaseModel):
    """
    One multiple-choice question as produced by the construction step.

    Parsing is lenient about content (type, option prefixes, answer format)
    so that validation can report every problem instead of stopping at the first.
    """

    model_config = ConfigDict(extra="ignore")

    id: str
    type: str
    question: str
    options: list[str]
    correct_answer: str
    explanation: str = ""
    source_quote: str = ""
    location: str = ""

    @field_validator("id", mode="before")
    @classmethod
    def _id_text(cls, value):
        return _as_id(value)

    def to_dict(self):
        return self.model_dump()


class QuizBankDoc(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="ignore")

    topic: str = ""
    questions: list[QuizQuestion] = Field(..., alias="quiz_bank")

    def question(self, question_id):
        return next((q for q in self.questions if q.id == question_id), None)

    def to_dict(self):
        return {"topic": self.topic, "quiz_bank": [q.to_dict() for q in self.questions]}


class QuizAnswer(BaseModel):
    model_config = ConfigDict(extra="ignore")

    question_id: str
    selected_answer: str
    reasoning: str = ""

    @field_validator("question_id", mode="before")
    @classmethod
    def _id_text(cls, value):
        return _as_id(value)

    @field_validator("selected_answer", mode="before")
    @classmethod
    def _normalise_selection(cls, value):
        text = str(value or "").strip()
        if text.strip('"\'').lower() == INSUFFICIENT:
            return INSUFFICIENT
        match = re.fullmatch(r"([A-Da-d])(?:[.)]\s.*|[.)])?", text, flags=re.DOTALL)
        return match.group(1).upper() if match else text

    @property
    def letter(self):
        return self.selected_answer if self.selected_answer in LETTERS else None


class QuizAnswerSet(BaseModel):
    answers: list[QuizAnswer]

    @field_validator("answers")
    @classmethod
    def _one_entry_per_question(cls, answers):
        seen = set()
        for a in answers:
            if a.question_id in seen:
                raise ValueError(f"question {a.question_id} answered twice")
            seen.add(a.question_id)
        return answers

    def by_id(self):
        return {a.question_id: a for a in self.answers}


class ErrorRecord(BaseModel):
    question_id: str
    error_type: ErrorType
    system: Optional[str] = None
    topic: Optional[str] = None

    @field_validator("question_id", mode="before")
    @classmethod
    def _id_text(cls, value):
        return _as_id(value)

    @field_validator("error_type", mode="before")
    @classmethod
    def _canonical_type(cls, value):
        key = re.sub(r"[^a-z0-9]", "", str(value).lower())
        return _ERROR_ALIASES.get(key, value)


class QuizResult(BaseModel):
    """One accuracy measurement: a system's deck for one topic."""

    system: str
    topic: str
    accuracy: float = Field(..., ge=0, le=100)
    purpose: Optional[str] = None
    level: Optional[Literal["Low", "Medium", "High"]] = None


# ── Outcomes ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ValidationFinding:
    question_id: Optional[str]
    check: str
    message: str

    def to_dict(self):
        return {"question_id": self.question_id, "check": self.check, "message": self.message}


@dataclass
class ValidationReport:
    question_count: int
    concept_count: int
    data_count: int
    source_checked: bool
    findings: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.findings

    def to_dict(self):
        return {
            "ok": self.ok,
            "question_count": self.question_count,
            "concept_count": self.concept_count,
            "data_count": self.data_count,
            "source_checked": self.source_checked,
            "findings": [f.to_dict() for f in self.findings],
        }


@dataclass(frozen=True)
class QuestionResult:
    question_id: str
    selected: str
    expected: str
    correct: bool

    def to_dict(self):
        return {"question_id": self.question_id, "selected": self.selected,
                "expected": self.expected, "correct": self.correct}


@dataclass
class QuizScore:
    results: list
    correct: int
    total: int

    @property
    def accuracy(self):
        return 100.0 * self.correct / self.total if self.total else 0.0

    def to_dict(self):
        return {
            "accuracy": self.accuracy,
            "correct": self.correct,
            "total": self.total,
            "results": [r.to_dict() for r in self.results],
        }


@dataclass(frozen=True)
class RichnessScore:
    text_length: float
    image_count: float
    score: float
    level: Optional[str] = None

    def to_dict(self):
        return {"text_length": self.text_length, "image_count": self.image_count,
                "score": self.score, "level": self.level}
