"""
Live LLM steps around the QuizBank: three-phase construction from a source
document and the open-book exam over extracted slide contents. Every call
goes through utils.AI.llm_exchange, so tests replace the client.
"""

import json
import logging

from models.Quiz import QUESTIONS_PER_BANK
from services.Quiz.quiz_scoring_service import QuizScoringService
from services.Quiz.quiz_validation_service import QuizValidationService
from utils.AI import llm_exchange, parse_json_reply
from utils.Exceptions import LlmResponseError, QuizParseError

logger = logging.getLogger(__name__)


def _json(value):
    return json.dumps(value, ensure_ascii=False, indent=2)


class QuizExamService:

    def extract_anchors(document_text, domain, focus, purpose, client=None):
        reply = llm_exchange("step1_forensic_analyst", {
            "domain": domain,
            "focus": focus,
            "one_sentence": purpose,
            "document_text": document_text,
        }, client=client)
        return parse_json_reply(reply)

    def refine_anchors(document_text, draft, client=None):
        reply = llm_exchange("step2_strict_editor", {
            "document_text": document_text,
            "draft_json": _json(draft),
        }, client=client)
        return parse_json_reply(reply)

    def generate_quizbank(anchors, topic="", target_count=QUESTIONS_PER_BANK, client=None):
        reply = llm_exchange("step3_exam_setter", {
            "quantitative_anchors": _json(anchors.get("quantitative_anchors", [])),
            "qualitative_key_points": _json(anchors.get("qualitative_key_points", [])),
            "target_count": target_count,
        }, client=client)
        try:
            return QuizValidationService.parse_quizbank(parse_json_reply(reply), topic=topic)
        except QuizParseError as e:
            raise LlmResponseError(f"quiz generation reply: {e}") from e

    def build_quizbank(document_text, topic, domain, focus, purpose, client=None):
        """Run the three construction phases and validate the result against the document."""
        draft = QuizExamService.extract_anchors(document_text, domain, focus, purpose, client)
        anchors = QuizExamService.refine_anchors(document_text, draft, client)
        bank = QuizExamService.generate_quizbank(anchors, topic=topic, client=client)
        report = QuizValidationService.validate_quizbank(bank, source_text=document_text)
        logger.info("built quiz bank for %s: %d questions, %d findings",
                    topic, len(bank.questions), len(report.findings))
        return bank, report

    def run_exam(bank, slide_contents, topic=None, client=None):
        """Ask the model to answer the bank from slide contents; returns the parsed answer set."""
        questions = [
            {"id": q.id, "question": q.question, "options": q.options}
            for q in bank.questions
        ]
        reply = llm_exchange("quiz_evaluation", {
            "topic": topic or bank.topic,
            "slide_contents": slide_contents,
            "quiz_questions": _json(questions),
        }, client=client)
        try:
            return QuizScoringService.parse_answers(parse_json_reply(reply))
        except QuizParseError as e:
            raise LlmResponseError(f"exam reply: {e}") from e
