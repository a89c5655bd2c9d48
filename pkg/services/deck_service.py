"""
Deck_Service facade: ingest, evaluation and report emission.
Delegates to the focused service modules.
"""

from services.Deck.deck_evaluation_service import DeckEvaluationService
from services.Deck.deck_ingest_service import DeckIngestService
from services.Deck.report_service import ReportService


class Deck_Service:
    load_deck               = staticmethod(DeckIngestService.load_deck)
    evaluate_deck           = staticmethod(DeckEvaluationService.evaluate_deck)
    aggregate_components    = staticmethod(DeckEvaluationService.aggregate_components)
    assemble                = staticmethod(DeckEvaluationService.assemble)

    emit_report             = staticmethod(ReportService.emit_report)
    parse_report            = staticmethod(ReportService.parse_report)
    load_reports            = staticmethod(ReportService.load_reports)
