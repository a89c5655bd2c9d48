import io

import pytest

from factories import QUOTES, SOURCE_TEXT, answer_set, quiz_bank
from utils.PresentationCompiler import build_level_fixture

BASE = "/api/v1/evaluation"


def upload(path):
    return (io.BytesIO(path.read_bytes()), path.name)


class TestHealth:

    def test_health(self, client):
        """Health reports ok and the version"""
        resp = client.get(f"{BASE}/health")
        assert resp.status_code == 200
        assert resp.get_json()["status"] == "ok"
        assert resp.get_json()["version"]


class TestPeiRoute:

    def test_package_upload(self, client):
        """A posted package comes back with its level"""
        data = {"file": (io.BytesIO(build_level_fixture(3)), "deck.pptx")}
        resp = client.post(f"{BASE}/pei", data=data, content_type="multipart/form-data")
        assert resp.status_code == 200
        body = resp.get_json()
        assert body["level"] == "L3"
        assert [g["status"] for g in body["gates"]][3:] == ["fail", "unevaluated"]

    def test_missing_file(self, client):
        """No file field is a 400"""
        resp = client.post(f"{BASE}/pei", data={}, content_type="multipart/form-data")
        assert resp.status_code == 400
        assert resp.get_json()["type"] == "InputError"

    def test_unsupported_upload(self, client):
        """Unknown formats are rejected with their error type"""
        data = {"file": (io.BytesIO(b"keynote"), "deck.key")}
        resp = client.post(f"{BASE}/pei", data=data, content_type="multipart/form-data")
        assert resp.status_code == 400
        assert resp.get_json()["type"] == "UnsupportedFormatError"


class TestDeckRoute:

    def test_deck_upload(self, client, sample_deck_dir):
        """Slides, sidecars and a package evaluate to a full report"""
        data = {
            "slides": [upload(p) for p in sorted(sample_deck_dir.glob("*.png"))],
            "layouts": [upload(p) for p in sorted(sample_deck_dir.glob("*.json"))],
            "package": (io.BytesIO(build_level_fixture(5)), "deck.pptx"),
            "topic": "sample",
            "system": "Reference",
            "purpose": "Pitch",
        }
        resp = client.post(f"{BASE}/deck", data=data, content_type="multipart/form-data")
        assert resp.status_code == 200
        body = resp.get_json()
        assert (body["topic"], body["system"], body["purpose"]) == ("sample", "Reference", "Pitch")
        assert len(body["slides"]) == 6
        assert body["pei"]["level"] == "L5"
        assert body["sections"]["usability"]["status"] == "ok"

    def test_no_slides(self, client):
        """A deck needs at least one slide"""
        resp = client.post(f"{BASE}/deck", data={"topic": "x"}, content_type="multipart/form-data")
        assert resp.status_code == 400

    def test_undecodable_slide(self, client):
        """A file that is not an image is a 400"""
        data = {"slides": [(io.BytesIO(b"nope"), "slide_1.png")]}
        resp = client.post(f"{BASE}/deck", data=data, content_type="multipart/form-data")
        assert resp.status_code == 400
        assert resp.get_json()["type"] == "ImageDecodeError"

    def test_duplicate_slide_names(self, client, sample_deck_dir):
        """Two slides with the same file name are rejected, not overwritten"""
        first = sorted(sample_deck_dir.glob("*.png"))[0]
        data = {"slides": [upload(first), upload(first)]}
        resp = client.post(f"{BASE}/deck", data=data, content_type="multipart/form-data")
        assert resp.status_code == 400
        assert "duplicate upload name" in resp.get_json()["error"]


class TestQuizRoutes:

    def test_validate_clean_bank(self, client):
        """A balanced bank with verbatim quotes has no findings"""
        body = {"bank": quiz_bank(), "source_text": SOURCE_TEXT, "topic": "retail"}
        resp = client.post(f"{BASE}/quiz/validate", json=body)
        assert resp.status_code == 200
        assert resp.get_json()["ok"] is True
        assert resp.get_json()["source_checked"] is True

    def test_validate_reports_findings(self, client):
        """Findings come back in the body with status 200"""
        bank = quiz_bank(concept=6, data=4)
        bank["quiz_bank"][0]["source_quote"] = QUOTES[0].upper()
        resp = client.post(f"{BASE}/quiz/validate", json={"bank": bank, "source_text": SOURCE_TEXT})
        assert resp.status_code == 200
        checks = {f["check"] for f in resp.get_json()["findings"]}
        assert "type_balance" in checks

    def test_score(self, client):
        """Seven correct out of ten is 70"""
        bank = quiz_bank()
        letters = [q["correct_answer"] for q in bank["quiz_bank"]]
        letters[:3] = ["D", "D", "D"]
        resp = client.post(f"{BASE}/quiz/score", json={"bank": bank, "answers": answer_set(bank, letters)})
        assert resp.status_code == 200
        assert resp.get_json()["accuracy"] == pytest.approx(70.0)

    def test_score_missing_answers(self, client):
        """The answers field is required"""
        resp = client.post(f"{BASE}/quiz/score", json={"bank": quiz_bank()})
        assert resp.status_code == 400
        assert "answers" in resp.get_json()["error"]

    def test_body_not_json(self, client):
        """Non-JSON bodies are a 400"""
        resp = client.post(f"{BASE}/quiz/validate", data="bank", content_type="text/plain")
        assert resp.status_code == 400
        assert set(resp.get_json()) == {"error", "type"}


class TestAlignRoute:

    def test_line_rankings(self, client):
        """Rankings as the line format string"""
        body = {
            "scores": {"t0": {"A": 3.0, "B": 2.0, "C": 1.0}, "t1": {"A": 1.0, "B": 2.0, "C": 3.0}},
            "rankings": "t0\tA > B > C\nt1\tA > B > C\n",
        }
        resp = client.post(f"{BASE}/align", json=body)
        assert resp.status_code == 200
        result = resp.get_json()
        assert result["avg_spearman"] == pytest.approx(0.0)
        assert result["identical_pct"] == pytest.approx(50.0)
        assert result["identical_topics"] == ["t0"]

    def test_structured_rankings(self, client):
        """Rankings as structured data"""
        body = {
            "scores": {"t0": {"A": 3.0, "B": 2.0}},
            "rankings": {"rankings": [{"topic": "t0", "order": [["A"], ["B"]]}]},
        }
        resp = client.post(f"{BASE}/align", json=body)
        assert resp.status_code == 200
        assert resp.get_json()["avg_spearman"] == pytest.approx(1.0)

    def test_bad_rankings(self, client):
        """Ranking parse errors are a 400 naming the type"""
        resp = client.post(f"{BASE}/align", json={"scores": {}, "rankings": "broken\n"})
        assert resp.status_code == 400
        assert resp.get_json()["type"] == "RankingParseError"

    def test_non_numeric_score(self, client):
        """A score that is not a number is a 400, not a server error"""
        body = {"scores": {"t0": {"A": "high", "B": 2.0}}, "rankings": "t0\tA > B\n"}
        resp = client.post(f"{BASE}/align", json=body)
        assert resp.status_code == 400
        assert resp.get_json()["type"] == "InputError"
        assert "t0/A" in resp.get_json()["error"]

    def test_scores_must_be_nested(self, client):
        """Scores must map each topic to a system table"""
        resp = client.post(f"{BASE}/align", json={"scores": {"t0": 3.0}, "rankings": "t0\tA > B\n"})
        assert resp.status_code == 400


if __name__ == "__main__":
    pytest.main([__file__])
