import json
from itertools import permutations

import pytest

from factories import deck_report
from models.Alignment import RankingRecord
from services.alignment_service import AlignmentService
from services.pei_service import Pei_Service
from utils.Exceptions import DomainError, InsufficientDataError, RankingParseError
from utils.PresentationCompiler import build_level_fixture


def closed_form(a, b):
    n = len(a)
    d2 = sum((x - y) ** 2 for x, y in zip(a, b))
    return 1.0 - 6.0 * d2 / (n * (n * n - 1))


class TestSpearman:

    def test_examples(self):
        """Identity, reversal and one swapped pair"""
        assert AlignmentService.spearman([1, 2, 3], [1, 2, 3]) == 1.0
        assert AlignmentService.spearman([1, 2, 3], [3, 2, 1]) == -1.0
        assert AlignmentService.spearman([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8)

    def test_matches_closed_form(self):
        """Without ties the Pearson form equals 1 - 6 sum d^2 / n(n^2 - 1)"""
        base = [1, 2, 3, 4, 5]
        for perm in permutations(base):
            assert AlignmentService.spearman(base, perm) == pytest.approx(closed_form(base, perm), abs=1e-12)

    def test_symmetric(self):
        """Swapping the arguments leaves rho unchanged"""
        a, b = [1, 2, 3, 4], [2, 1, 4, 3]
        assert AlignmentService.spearman(a, b) == AlignmentService.spearman(b, a)

    def test_undefined(self):
        """One item or zero variance has no correlation"""
        assert AlignmentService.spearman([1], [1]) is None
        assert AlignmentService.spearman([2, 2, 2], [1, 2, 3]) is None

    def test_length_mismatch(self):
        """Vectors must be the same length"""
        with pytest.raises(DomainError):
            AlignmentService.spearman([1, 2], [1, 2, 3])


class TestIdenticalRatio:

    def test_ratios(self):
        """All, one in four and none"""
        same = ([1, 2], [1, 2])
        diff = ([1, 2], [2, 1])
        assert AlignmentService.identical_ratio([same, same]) == 1.0
        assert AlignmentService.identical_ratio([same, diff, diff, diff]) == 0.25
        assert AlignmentService.identical_ratio([diff]) == 0.0

    def test_empty(self):
        """No pairs is an error"""
        with pytest.raises(InsufficientDataError):
            AlignmentService.identical_ratio([])


class TestRankingRecord:

    def test_scores_to_ranks(self):
        """Higher score ranks first; ties share the average rank"""
        record = RankingRecord.from_scores("t", {"A": 9.0, "B": 5.0, "C": 5.0, "D": 1.0})
        assert record.ranks == {"A": 1.0, "B": 2.5, "C": 2.5, "D": 4.0}

    def test_from_order(self):
        """Preference groups become tie-averaged ranks"""
        record = RankingRecord.from_order("t", [["A"], ["B", "C"], ["D"]])
        assert record.ranks == {"A": 1.0, "B": 2.5, "C": 2.5, "D": 4.0}

    def test_invalid_ranks(self):
        """Ranks must be a permutation of 1..n"""
        with pytest.raises(ValueError):
            RankingRecord(topic="t", ranks={"A": 1.0, "B": 1.0})


class TestAlignmentReport:

    def _scores(self, *orders):
        # orders are metric preferences best first; score = reverse position
        return {f"t{i}": {s: float(len(o) - j) for j, s in enumerate(o)} for i, o in enumerate(orders)}

    def _human(self, *orders):
        return {f"t{i}": RankingRecord.from_order(f"t{i}", [[s] for s in o]) for i, o in enumerate(orders)}

    def test_perfect_agreement(self):
        """Every topic at rho 1 gives (1, 0, 100)"""
        orders = [("A", "B", "C"), ("C", "A", "B")]
        report = AlignmentService.alignment_report(self._scores(*orders), self._human(*orders))
        assert (report.avg_rho, report.std_rho, report.identical_pct) == (1.0, 0.0, 100.0)

    def test_opposite_topics(self):
        """rho of 1 and -1 averages 0 with std 1"""
        scores = self._scores(("A", "B", "C"), ("A", "B", "C"))
        human = self._human(("A", "B", "C"), ("C", "B", "A"))
        report = AlignmentService.alignment_report(scores, human)
        assert report.avg_rho == pytest.approx(0.0)
        assert report.std_rho == pytest.approx(1.0)
        assert report.identical_pct == pytest.approx(50.0)

    def test_one_of_four_identical(self):
        """Four topics with one exact match give 25%"""
        metric = [("A", "B", "C", "D")] * 4
        human = [("A", "B", "C", "D"), ("B", "A", "C", "D"), ("A", "C", "B", "D"), ("D", "C", "B", "A")]
        report = AlignmentService.alignment_report(self._scores(*metric), self._human(*human))
        assert report.identical_pct == pytest.approx(25.0)
        assert report.identical_topics == ["t0"]

    def test_metric_ties_are_not_identical(self):
        """A tied metric ranking never matches a strict human ranking"""
        scores = {"t0": {"A": 3.0, "B": 3.0, "C": 1.0}}
        human = self._human(("A", "B", "C"))
        report = AlignmentService.alignment_report(scores, human)
        assert report.identical_pct == 0.0

    def test_undefined_topics_excluded(self):
        """Zero-variance topics are flagged and left out of the mean"""
        scores = {"t0": {"A": 1.0, "B": 1.0}, "t1": {"A": 2.0, "B": 1.0}}
        human = self._human(("A", "B"), ("A", "B"))
        report = AlignmentService.alignment_report(scores, human)
        assert report.undefined_topics == ["t0"]
        assert report.topics_used == 1

    def test_identical_share_counts_every_compared_topic(self):
        """Topics tied on both sides count as identical but not in the mean"""
        scores = {"t0": {"A": 1.0, "B": 1.0}, "t1": {"A": 2.0, "B": 1.0}}
        human = {"t0": RankingRecord.from_order("t0", [["A", "B"]]),
                 "t1": RankingRecord.from_order("t1", [["A"], ["B"]])}
        report = AlignmentService.alignment_report(scores, human)
        assert report.undefined_topics == ["t0"]
        assert (report.topics_used, report.topics_compared) == (1, 2)
        assert report.identical_pct == pytest.approx(100.0)
        assert report.to_dict()["topics_compared"] == 2

    def test_no_usable_topics(self):
        """Nothing to correlate is an error"""
        with pytest.raises(InsufficientDataError):
            AlignmentService.alignment_report({"t0": {"A": 1.0}}, self._human(("A", "B")))


class TestReportsAndAblation:

    def _reports(self):
        return [
            deck_report("t0", "A", (6.0, 8.0, -0.5, 14.0)),
            deck_report("t0", "B", (5.0, 7.0, -1.0, 10.0)),
            deck_report("t0", "C", (4.0, 6.0, -2.0, 6.0)),
            deck_report("t1", "A", (6.0, 8.0, -0.5, 14.0)),
            deck_report("t1", "B", (4.0, 6.0, -2.0, 6.0)),
            deck_report("t1", "C", (5.0, 7.0, -1.0, 10.0)),
        ]

    def test_scores_from_reports(self):
        """Aesthetics totals are grouped by topic and system"""
        scores = AlignmentService.scores_from_reports(self._reports())
        assert scores["t0"] == {"A": 27.5, "B": 21.0, "C": 14.0}

    def test_component_subset(self):
        """A subset sums only the named components"""
        scores = AlignmentService.scores_from_reports(self._reports(), ("usability", "harmony"))
        assert scores["t1"]["A"] == 5.5

    def test_ablation_rows(self):
        """Singles, leave-one-out and the full set"""
        human = {t: RankingRecord.from_order(t, [["A"], ["B"], ["C"]]) for t in ("t0", "t1")}
        rows = AlignmentService.ablation(self._reports(), human)
        assert len(rows) == 4 + 4 + 1
        full = rows[-1]
        assert full.name == "usability+engagement+harmony+rhythm"
        assert full.report.identical_pct == pytest.approx(50.0)


class TestQuadrants:

    def test_placements(self):
        """Systems split on the Aesthetics cut and the PEI cut"""
        l5 = Pei_Service.evaluate_pei("a.pptx", data=build_level_fixture(5))
        l1 = Pei_Service.evaluate_pei("b.pptx", data=build_level_fixture(1))
        reports = [
            deck_report("t0", "A", (6.0, 8.0, -0.5, 14.0), pei=l5),
            deck_report("t0", "B", (4.0, 6.0, -2.0, 6.0), pei=l5),
            deck_report("t0", "C", (6.0, 8.0, -0.5, 14.0), pei=l1),
            deck_report("t0", "D", (4.0, 6.0, -2.0, 6.0), pei=l1),
            deck_report("t0", "E", (4.0, 6.0, -2.0, 6.0)),
        ]
        placements = {p.system: p.quadrant for p in AlignmentService.quadrants(reports, aesthetics_cut=20.0)}
        assert placements == {
            "A": "aesthetic+editable",
            "B": "editable-only",
            "C": "aesthetic-only",
            "D": "neither",
            "E": None,
        }


class TestRankingFiles:

    def test_line_format(self):
        """Tabs separate topic and order; '=' marks ties; '#' comments"""
        text = "# header\nretail\tA > B = C > D\nfinance  D > C > B > A  # trailing\n"
        records = AlignmentService.parse_ranking_lines(text)
        assert records["retail"].ranks == {"A": 1.0, "B": 2.5, "C": 2.5, "D": 4.0}
        assert records["finance"].ranks["D"] == 1.0

    def test_line_errors_carry_line_number(self):
        """Malformed lines are reported with their number"""
        with pytest.raises(RankingParseError) as exc:
            AlignmentService.parse_ranking_lines("ok\tA > B\nbroken\n")
        assert exc.value.line == 2

    def test_duplicate_system(self):
        """A system listed twice in one topic is rejected"""
        with pytest.raises(RankingParseError):
            AlignmentService.parse_ranking_lines("t\tA > A\n")

    def test_structured_file(self, tmp_path):
        """YAML/JSON ranking files load the same records"""
        path = tmp_path / "rankings.json"
        path.write_text(json.dumps({"rankings": [{"topic": "t", "order": [["A"], ["B", "C"]]}]}))
        records = AlignmentService.load_rankings(path)
        assert records["t"].ranks == {"A": 1.0, "B": 2.5, "C": 2.5}

    def test_structured_errors(self):
        """Schema errors name the offending location"""
        with pytest.raises(RankingParseError) as exc:
            AlignmentService.parse_ranking_data({"rankings": [{"topic": "t"}]})
        assert "order" in str(exc.value)


if __name__ == "__main__":
    pytest.main([__file__])
