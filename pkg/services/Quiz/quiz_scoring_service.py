import logging
from pathlib import Path

from pydantic import ValidationError

from models.Quiz import QuestionResult, QuizAnswerSet, QuizScore
from services.Quiz.quiz_validation_service import _decode, _first_error
from utils.Exceptions import QuizParseError

logger = logging.getLogger(__name__)


class QuizScoringService:

    def parse_answers(data):
        """QuizAnswerSet from text, bytes or a mapping carrying an ``answers`` array."""
        doc = _decode(data, "answer set")
        if not isinstance(doc, dict) or not isinstance(doc.get("answers"), list):
            raise QuizParseError("answer set must be an object with an 'answers' array")
        try:
            return QuizAnswerSet.model_validate(doc)
        except ValidationError as e:
            raise QuizParseError(f"invalid answer set at {_first_error(e)}") from e

    def load_answers(path):
        path = Path(path)
        try:
            raw = path.read_bytes()
        except OSError as e:
            raise QuizParseError(f"cannot read answers '{path}': {e.strerror or e}") from e
        return QuizScoringService.parse_answers(raw)

    def score_quiz(answers, key):
        """
        Correct iff the selected letter equals the key letter. Anything else,
        "insufficient information" included, counts incorrect.
        """
        given = answers.by_id()
        missing = [q.id for q in key.questions if q.id not in given]
        if missing:
            raise QuizParseError(f"answers missing for question ids: {', '.join(missing)}")
        extra = set(given) - {q.id for q in key.questions}
        if extra:
            logger.warning("ignoring answers for unknown question ids: %s", ", ".join(sorted(extra)))

        results = []
        for q in key.questions:
            selected = given[q.id].selected_answer
            results.append(QuestionResult(
                question_id=q.id,
                selected=selected,
                expected=q.correct_answer,
                correct=given[q.id].letter is not None and given[q.id].letter == q.correct_answer.strip(),
            ))
        return QuizScore(results=results, correct=sum(r.correct for r in results), total=len(results))
