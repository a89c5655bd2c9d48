import io
import json

import pytest
from openpyxl import load_workbook

from factories import SOURCE_TEXT, answer_set, quiz_bank, quiz_question
from models.Quiz import ErrorRecord, QuizResult
from services.quiz_service import Quiz_Service
from utils.Exceptions import DomainError, InsufficientDataError, LlmResponseError, QuizParseError
from utils.ExcelHandler import createAccuracyWorkbook


def checks(report):
    return [f.check for f in report.findings]


class TestValidation:

    def test_clean_bank(self):
        """Five Concept and five Data questions with verbatim quotes pass"""
        doc = Quiz_Service.parse_quizbank(quiz_bank())
        report = Quiz_Service.validate_quizbank(doc, source_text=SOURCE_TEXT)
        assert report.ok
        assert (report.concept_count, report.data_count) == (5, 5)

    def test_nine_questions(self):
        """A short bank gets exactly one count finding"""
        doc = Quiz_Service.parse_quizbank(quiz_bank(concept=5, data=4))
        report = Quiz_Service.validate_quizbank(doc, source_text=SOURCE_TEXT)
        assert checks(report) == ["count"]
        assert "5 Concept, 4 Data" in report.findings[0].message

    def test_unbalanced_types(self):
        """Ten questions split 6/4 fail the balance check for both types"""
        doc = Quiz_Service.parse_quizbank(quiz_bank(concept=6, data=4))
        report = Quiz_Service.validate_quizbank(doc)
        assert checks(report) == ["type_balance", "type_balance"]

    def test_full_text_answer(self):
        """correct_answer must be the letter, not the option text"""
        bank = quiz_bank()
        bank["quiz_bank"][0]["correct_answer"] = "B. January 6 to March 28"
        report = Quiz_Service.validate_quizbank(Quiz_Service.parse_quizbank(bank), source_text=SOURCE_TEXT)
        assert checks(report) == ["answer_format"]
        assert report.findings[0].question_id == "1"

    def test_paraphrased_quote(self):
        """Quotes must occur verbatim in the source"""
        bank = quiz_bank()
        bank["quiz_bank"][2]["source_quote"] = "Managers said clearer labels helped."
        report = Quiz_Service.validate_quizbank(Quiz_Service.parse_quizbank(bank), source_text=SOURCE_TEXT)
        assert checks(report) == ["source_quote"]

    def test_quotes_skipped_without_source(self):
        """Without the document only structure is checked"""
        bank = quiz_bank()
        bank["quiz_bank"][2]["source_quote"] = "not in any document"
        report = Quiz_Service.validate_quizbank(Quiz_Service.parse_quizbank(bank))
        assert report.ok
        assert not report.source_checked

    def test_validation_is_repeatable(self):
        """Validating the same bank twice gives the same findings"""
        bank = quiz_bank(concept=6, data=4)
        bank["quiz_bank"][0]["correct_answer"] = "B. January 6 to March 28"
        bank["quiz_bank"][2]["source_quote"] = "Managers said clearer labels helped."
        doc = Quiz_Service.parse_quizbank(bank)
        first = Quiz_Service.validate_quizbank(doc, source_text=SOURCE_TEXT)
        second = Quiz_Service.validate_quizbank(doc, source_text=SOURCE_TEXT)
        assert first.findings
        assert [(f.question_id, f.check, f.message) for f in first.findings] == \
            [(f.question_id, f.check, f.message) for f in second.findings]

    def test_source_only_adds_findings(self):
        """A bank that passes with its source also passes without it"""
        doc = Quiz_Service.parse_quizbank(quiz_bank())
        assert Quiz_Service.validate_quizbank(doc, source_text=SOURCE_TEXT).ok
        assert Quiz_Service.validate_quizbank(doc).ok

    def test_option_problems(self):
        """Three options and a missing prefix are both reported"""
        bank = quiz_bank()
        bank["quiz_bank"][4] = quiz_question(5, options=["A. one", "two", "C. three"])
        report = Quiz_Service.validate_quizbank(Quiz_Service.parse_quizbank(bank))
        assert sorted(checks(report)) == ["option_prefix", "options"]

    def test_duplicate_ids(self):
        """Question ids must be unique"""
        bank = quiz_bank()
        bank["quiz_bank"][9]["id"] = 1
        report = Quiz_Service.validate_quizbank(Quiz_Service.parse_quizbank(bank))
        assert "duplicate_id" in checks(report)

    def test_parse_text_and_errors(self):
        """JSON text parses; a missing quiz_bank array does not"""
        doc = Quiz_Service.parse_quizbank(json.dumps(quiz_bank()))
        assert len(doc.questions) == 10
        with pytest.raises(QuizParseError):
            Quiz_Service.parse_quizbank('{"questions": []}')
        with pytest.raises(QuizParseError):
            Quiz_Service.parse_quizbank({"quiz_bank": [{"id": 1}]})

    def test_load_uses_file_stem_as_topic(self, tmp_path):
        """A bank without a topic takes the file name"""
        bank = quiz_bank(topic="")
        path = tmp_path / "retail_pilot.json"
        path.write_text(json.dumps(bank))
        assert Quiz_Service.load_quizbank(path).topic == "retail_pilot"


class TestScoring:

    def setup_method(self):
        self.bank = quiz_bank()
        self.key = Quiz_Service.parse_quizbank(self.bank)

    def test_all_correct(self):
        """Ten matching letters score 100"""
        score = Quiz_Service.score_quiz(Quiz_Service.parse_answers(answer_set(self.bank)), self.key)
        assert score.accuracy == 100.0

    def test_insufficient_information(self):
        """Declining every question scores 0"""
        answers = answer_set(self.bank, ["insufficient information"] * 10)
        score = Quiz_Service.score_quiz(Quiz_Service.parse_answers(answers), self.key)
        assert score.accuracy == 0.0

    def test_seven_of_ten(self):
        """Three wrong letters leave 70"""
        letters = [q["correct_answer"] for q in self.bank["quiz_bank"]]
        letters[0], letters[5], letters[9] = "A", "D", "A"
        score = Quiz_Service.score_quiz(Quiz_Service.parse_answers(answer_set(self.bank, letters)), self.key)
        assert (score.correct, score.total, score.accuracy) == (7, 10, 70.0)

    def test_option_text_is_normalised(self):
        """'B. second' and 'b)' count as the letter B"""
        letters = [q["correct_answer"] for q in self.bank["quiz_bank"]]
        letters[0] = "B. second"
        letters[1] = "b)"
        score = Quiz_Service.score_quiz(Quiz_Service.parse_answers(answer_set(self.bank, letters)), self.key)
        assert score.accuracy == 100.0

    def test_missing_answer(self):
        """Every question in the key needs an answer"""
        answers = answer_set(self.bank)
        answers["answers"].pop()
        with pytest.raises(QuizParseError):
            Quiz_Service.score_quiz(Quiz_Service.parse_answers(answers), self.key)

    def test_answers_without_array(self):
        """A reply without an answers array is a parse error"""
        with pytest.raises(QuizParseError):
            Quiz_Service.parse_answers('{"result": []}')


class TestAccuracyAggregation:

    def test_single_value(self):
        """One system, one topic keeps its value"""
        table = Quiz_Service.aggregate_accuracy([QuizResult(system="Zhipu", topic="t", accuracy=88.29)])
        assert table["overall"]["Zhipu"] == pytest.approx(88.29)

    def test_purpose_mean_and_missing_cell(self):
        """Means per purpose; absent combinations stay None"""
        results = [
            QuizResult(system="A", topic="t1", accuracy=80.0, purpose="Teaching"),
            QuizResult(system="A", topic="t2", accuracy=90.0, purpose="Teaching"),
            QuizResult(system="B", topic="t3", accuracy=70.0, purpose="Pitch"),
        ]
        table = Quiz_Service.aggregate_accuracy(results)
        assert table["by_purpose"]["A"]["Teaching"] == pytest.approx(85.0)
        assert table["by_purpose"]["A"]["Pitch"] is None
        assert table["columns"] == ["Pitch", "Teaching", "Avg"]

    def test_richness_columns(self):
        """Level columns appear only for levels present in the data"""
        results = [
            QuizResult(system="A", topic="t1", accuracy=60.0, level="Low"),
            QuizResult(system="A", topic="t2", accuracy=90.0, level="High"),
        ]
        table = Quiz_Service.aggregate_accuracy(results)
        assert table["columns"] == ["Low", "High", "Avg"]
        assert table["rows"][0]["cells"] == [60.0, 90.0, 75.0]

    def test_empty(self):
        """No results cannot be aggregated"""
        with pytest.raises(InsufficientDataError):
            Quiz_Service.aggregate_accuracy([])

    def test_workbook_writes_na(self):
        """Missing cells are written as N/A"""
        table = {"columns": ["Pitch", "Avg"], "rows": [{"system": "A", "cells": [None, 85.0]}]}
        ws = load_workbook(io.BytesIO(createAccuracyWorkbook(table))).active
        assert [c.value for c in ws[2]] == ["A", "N/A", 85.0]

    def test_records_file(self, tmp_path):
        """CSV records load with empty cells as missing"""
        path = tmp_path / "results.csv"
        path.write_text("system,topic,accuracy,purpose,level\nA,t1,80,Teaching,\n")
        results = Quiz_Service.load_results(path)
        assert results[0].level is None
        assert results[0].accuracy == 80.0


class TestErrorTaxonomy:

    def test_missing_content_share(self):
        """1541 of 2499 records is 61.7%"""
        records = [ErrorRecord(question_id=i, error_type="MissingContent") for i in range(1541)]
        records += [ErrorRecord(question_id=i, error_type="Other") for i in range(958)]
        rollup = Quiz_Service.error_taxonomy_rollup(records)
        missing = next(r for r in rollup["types"] if r["type"] == "MissingContent")
        assert missing["percent"] == 61.7
        assert rollup["total"] == 2499

    def test_empty(self):
        """No records gives zero counts for every type"""
        rollup = Quiz_Service.error_taxonomy_rollup([])
        assert all(r["count"] == 0 and r["share"] == 0.0 for r in rollup["types"])

    def test_uniform(self):
        """One record per type gives six 16.7% shares"""
        types = ["MissingContent", "VlmFailure", "ValueMismatch", "VlmMisinterp", "ImplicitInfo", "Other"]
        records = [ErrorRecord(question_id=i, error_type=t) for i, t in enumerate(types)]
        rollup = Quiz_Service.error_taxonomy_rollup(records)
        assert [r["percent"] for r in rollup["types"]] == [16.7] * 6

    def test_aliases(self):
        """Type numbers and spaced names map to the canonical type"""
        assert ErrorRecord(question_id=1, error_type="Type 1").error_type == "MissingContent"
        assert ErrorRecord(question_id=1, error_type="VLM Misinterpretation").error_type == "VlmMisinterp"


class TestRichness:

    def test_formula(self):
        """Minimum, maximum and midpoint"""
        extrema = (100, 300, 0, 4)
        assert Quiz_Service.richness_score(100, 0, extrema).score == 0.0
        assert Quiz_Service.richness_score(300, 4, extrema).score == 1.0
        assert Quiz_Service.richness_score(200, 2, extrema).score == pytest.approx(0.5)

    def test_monotone_in_text_and_images(self):
        """More text or more images never lowers the score"""
        extrema = (100, 900, 0, 8)
        by_text = [Quiz_Service.richness_score(t, 3, extrema).score for t in range(50, 1000, 50)]
        by_images = [Quiz_Service.richness_score(400, i, extrema).score for i in range(0, 10)]
        assert by_text == sorted(by_text)
        assert by_images == sorted(by_images)
        assert by_text[0] < by_text[-1] and by_images[0] < by_images[-1]

    def test_degenerate_extrema(self):
        """Equal minimum and maximum cannot be normalised"""
        with pytest.raises(DomainError):
            Quiz_Service.richness_score(5, 1, (5, 5, 0, 2))

    def test_corpus_tertiles(self):
        """Nine documents split three Low, three Medium, three High"""
        corpus = Quiz_Service.RichnessCorpus([(100 * k, k % 3) for k in range(1, 10)])
        levels = [s.level for s in corpus.scores()]
        assert sorted(levels) == ["High"] * 3 + ["Low"] * 3 + ["Medium"] * 3


class TestExam:

    class FakeClient:
        def __init__(self, *replies):
            self.replies = list(replies)
            self.prompts = []

        def complete(self, prompt):
            self.prompts.append(prompt)
            return self.replies.pop(0)

    def test_run_exam(self):
        """A canned answer-set reply parses and fills the prompt"""
        bank = quiz_bank()
        client = self.FakeClient("```json\n" + json.dumps(answer_set(bank)) + "\n```")
        answers = Quiz_Service.run_exam(Quiz_Service.parse_quizbank(bank), "Slide 1: pilot results",
                                        client=client)
        assert len(answers.answers) == 10
        assert "Slide 1: pilot results" in client.prompts[0]
        assert "retail_pilot" in client.prompts[0]

    def test_exam_reply_without_answers(self):
        """A reply without the answers array is a response error"""
        client = self.FakeClient('{"verdict": "done"}')
        with pytest.raises(LlmResponseError):
            Quiz_Service.run_exam(Quiz_Service.parse_quizbank(quiz_bank()), "text", client=client)

    def test_build_quizbank(self):
        """Three phases run in order and the bank is validated against the document"""
        anchors = {"quantitative_anchors": [{"value": "14 percent"}], "qualitative_key_points": []}
        client = self.FakeClient(json.dumps(anchors), json.dumps(anchors), json.dumps(quiz_bank()))
        bank, report = Quiz_Service.build_quizbank(SOURCE_TEXT, "retail_pilot", "Retail", "pilot",
                                                   "Brief the board", client=client)
        assert len(client.prompts) == 3
        assert SOURCE_TEXT in client.prompts[0]
        assert report.ok
        assert bank.topic == "retail_pilot"


if __name__ == "__main__":
    pytest.main([__file__])
