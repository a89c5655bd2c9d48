"""
Quiz_Service facade: one import for the QuizBank operations.
Delegates to the focused service modules.
"""

from services.Quiz.quiz_analytics_service import QuizAnalyticsService, RichnessCorpus, richness_score
from services.Quiz.quiz_exam_service import QuizExamService
from services.Quiz.quiz_scoring_service import QuizScoringService
from services.Quiz.quiz_validation_service import QuizValidationService
from utils.AI import llm_exchange


class Quiz_Service:
    # Validation
    parse_quizbank          = staticmethod(QuizValidationService.parse_quizbank)
    load_quizbank           = staticmethod(QuizValidationService.load_quizbank)
    validate_quizbank       = staticmethod(QuizValidationService.validate_quizbank)

    # Scoring
    parse_answers           = staticmethod(QuizScoringService.parse_answers)
    load_answers            = staticmethod(QuizScoringService.load_answers)
    score_quiz              = staticmethod(QuizScoringService.score_quiz)

    # Analytics
    load_results            = staticmethod(QuizAnalyticsService.load_results)
    load_error_records      = staticmethod(QuizAnalyticsService.load_error_records)
    load_richness_corpus    = staticmethod(QuizAnalyticsService.load_richness_corpus)
    aggregate_accuracy      = staticmethod(QuizAnalyticsService.aggregate_accuracy)
    error_taxonomy_rollup   = staticmethod(QuizAnalyticsService.error_taxonomy_rollup)
    richness_score          = staticmethod(richness_score)
    RichnessCorpus          = RichnessCorpus

    # LLM
    llm_exchange            = staticmethod(llm_exchange)
    build_quizbank          = staticmethod(QuizExamService.build_quizbank)
    run_exam                = staticmethod(QuizExamService.run_exam)
