import json
import logging
from pathlib import Path

import yaml
from pydantic import ValidationError

from models.Quiz import (
    LETTERS,
    OPTION_PREFIXES,
    PER_TYPE,
    QUESTION_TYPES,
    QUESTIONS_PER_BANK,
    QuizBankDoc,
    ValidationFinding,
    ValidationReport,
)
from utils.Exceptions import QuizParseError

logger = logging.getLogger(__name__)


def _decode(data, what):
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8-sig")
    if isinstance(data, str):
        try:
            return json.loads(data)
        except json.JSONDecodeError:
            try:
                return yaml.safe_load(data)
            except yaml.YAMLError as e:
                raise QuizParseError(f"{what} is neither JSON nor YAML: {e}") from e
    return data


def _first_error(e):
    err = e.errors()[0]
    loc = ".".join(str(p) for p in err["loc"])
    return f"{loc}: {err['msg']}"


class QuizValidationService:

    def parse_quizbank(data, topic=None):
        """QuizBankDoc from a mapping, JSON/YAML text or bytes carrying ``quiz_bank``."""
        doc = _decode(data, "quiz bank")
        if isinstance(doc, list):
            doc = {"quiz_bank": doc}
        if not isinstance(doc, dict) or "quiz_bank" not in doc:
            raise QuizParseError("quiz bank must be an object with a 'quiz_bank' array")
        try:
            bank = QuizBankDoc.model_validate(doc)
        except ValidationError as e:
            raise QuizParseError(f"invalid quiz bank at {_first_error(e)}") from e
        if topic and not bank.topic:
            bank = bank.model_copy(update={"topic": topic})
        return bank

    def load_quizbank(path):
        path = Path(path)
        try:
            raw = path.read_bytes()
        except OSError as e:
            raise QuizParseError(f"cannot read quiz bank '{path}': {e.strerror or e}") from e
        return QuizValidationService.parse_quizbank(raw, topic=path.stem)

    def _question_findings(q):
        out = []
        if q.type not in QUESTION_TYPES:
            out.append(ValidationFinding(q.id, "type", f"type {q.type!r} is not Concept or Data"))
        if len(q.options) != len(LETTERS):
            out.append(ValidationFinding(q.id, "options", f"{len(q.options)} options, expected 4"))
        for prefix, option in zip(OPTION_PREFIXES, q.options):
            if not option.startswith(prefix):
                out.append(ValidationFinding(q.id, "option_prefix",
                                             f"option {option[:20]!r} does not start with {prefix!r}"))
        if q.correct_answer not in LETTERS:
            out.append(ValidationFinding(q.id, "answer_format",
                                         f"correct_answer {q.correct_answer[:30]!r} is not a single letter A-D"))
        return out

    def validate_quizbank(doc, source_text=None):
        """
        Structural checks on a parsed bank, plus verbatim quote checks when
        the source document text is supplied. Never raises on content problems.
        """
        findings = []
        counts = {t: sum(1 for q in doc.questions if q.type == t) for t in QUESTION_TYPES}
        total = len(doc.questions)
        if total != QUESTIONS_PER_BANK:
            findings.append(ValidationFinding(
                None, "count",
                f"{total} questions ({counts['Concept']} Concept, {counts['Data']} Data), "
                f"expected {QUESTIONS_PER_BANK}"))
        # Balance is only meaningful once the count is right.
        for t in (QUESTION_TYPES if total == QUESTIONS_PER_BANK else ()):
            if counts[t] != PER_TYPE:
                findings.append(ValidationFinding(None, "type_balance",
                                                  f"{counts[t]} {t} questions, expected {PER_TYPE}"))

        seen = set()
        for q in doc.questions:
            if q.id in seen:
                findings.append(ValidationFinding(q.id, "duplicate_id", f"question id {q.id} repeats"))
            seen.add(q.id)
            findings.extend(QuizValidationService._question_findings(q))
            if source_text is not None:
                if not q.source_quote:
                    findings.append(ValidationFinding(q.id, "source_quote", "source_quote is empty"))
                elif q.source_quote not in source_text:
                    findings.append(ValidationFinding(q.id, "source_quote",
                                                      "source_quote does not occur verbatim in the source"))

        if findings:
            logger.info("quiz bank %s: %d findings", doc.topic or "<untitled>", len(findings))
        return ValidationReport(
            question_count=total,
            concept_count=counts["Concept"],
            data_count=counts["Data"],
            source_checked=source_text is not None,
            findings=findings,
        )
