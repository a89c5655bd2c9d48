import csv
import io
import json
import shutil

import pytest

from factories import deck_report, solid, write_png
from models.Report import DeckReport, aesthetics_total
from models.Settings import BUILTIN_PROFILES, EvaluationConfig
from services.deck_service import Deck_Service
from utils.Exceptions import EmptyDeckError, ImageDecodeError, InputError
from utils.PresentationCompiler import build_level_fixture

# (system, usability, engagement, harmony, rhythm, aesthetics)
BENCHMARK_ROWS = [
    ("Skywork-Banana", 5.62, 8.30, -0.47, 13.84, 27.28),
    ("Kimi-Banana", 5.72, 6.41, -0.55, 15.01, 26.58),
    ("NotebookLM", 4.13, 7.32, -0.35, 11.72, 22.82),
    ("Zhipu", 4.87, 7.52, -1.60, 11.27, 22.06),
    ("Skywork", 4.83, 7.60, -1.18, 9.44, 20.69),
    ("Kimi-Standard", 4.61, 6.28, -1.75, 10.12, 19.25),
    ("Kimi-Smart", 4.13, 7.99, -1.88, 8.06, 18.30),
    ("Gamma", 5.31, 6.31, -1.51, 6.99, 17.09),
    ("Quark", 5.03, 7.41, -1.91, 6.33, 16.86),
]


class TestAssembly:

    @pytest.mark.parametrize("row", BENCHMARK_ROWS, ids=[r[0] for r in BENCHMARK_ROWS])
    def test_benchmark_rows_sum(self, row):
        """Aesthetics is the sum of the four serialized components"""
        _, u, e, h, r, expected = row
        rounded, total = Deck_Service.assemble({"usability": u, "engagement": e, "harmony": h, "rhythm": r})
        assert rounded == {"usability": u, "engagement": e, "harmony": h, "rhythm": r}
        assert total == pytest.approx(expected, abs=0.02)

    def test_rounding_before_sum(self):
        """Components round to two decimals before they are added"""
        rounded, total = Deck_Service.assemble(
            {"usability": 1.004, "engagement": 1.004, "harmony": 1.004, "rhythm": 1.004})
        assert rounded["usability"] == 1.0
        assert total == 4.0

    def test_missing_component(self):
        """A missing component adds nothing; all missing gives no total"""
        assert aesthetics_total({"usability": None, "engagement": 2.0, "harmony": 1.0, "rhythm": 3.0}) == 6.0
        assert aesthetics_total({}) is None

    def test_inconsistent_total_rejected(self):
        """A report whose total disagrees with its components is invalid"""
        with pytest.raises(ValueError):
            DeckReport(topic="t", system="s", slides=[], raw={}, sections={}, profile={}, config={},
                       version="x", aesthetics=99.0,
                       components={"usability": 1.0, "engagement": 1.0, "harmony": 1.0, "rhythm": 1.0})


class TestIngest:

    def test_directory_defaults(self, sample_deck_dir):
        """Topic is the folder, system its parent; slides in natural order"""
        deck = Deck_Service.load_deck(sample_deck_dir)
        assert (deck.topic, deck.system) == ("sample", "reference")
        assert [p.name for p in deck.slide_paths][:2] == ["slide_0001.png", "slide_0002.png"]
        assert deck.missing_layouts == []

    def test_natural_order(self, tmp_path):
        """slide_2 comes before slide_10"""
        for n in (10, 2, 1):
            write_png(tmp_path / f"slide_{n}.png", solid((10, 10, 10)))
        deck = Deck_Service.load_deck(tmp_path)
        assert [p.name for p in deck.slide_paths] == ["slide_1.png", "slide_2.png", "slide_10.png"]

    def test_missing_sidecars_recorded(self, sample_deck_dir):
        """Slides without a sidecar are listed"""
        for n in (2, 4, 6):
            (sample_deck_dir / f"slide_{n:04d}.json").unlink()
        deck = Deck_Service.load_deck(sample_deck_dir)
        assert deck.missing_layouts == ["slide_0002.png", "slide_0004.png", "slide_0006.png"]

    def test_layout_dir(self, sample_deck_dir, tmp_path):
        """Sidecars are found in a separate layout folder"""
        layouts = tmp_path / "layouts"
        layouts.mkdir()
        for sidecar in sample_deck_dir.glob("*.json"):
            shutil.move(str(sidecar), layouts / sidecar.name)
        deck = Deck_Service.load_deck(sample_deck_dir, layout_dir=layouts)
        assert all(p is not None and p.parent == layouts for p in deck.layout_paths)

    def test_manifest(self, sample_deck_dir):
        """A YAML manifest names slides, topic, system and purpose"""
        manifest = sample_deck_dir / "deck.yaml"
        manifest.write_text("slides: [slide_0003.png, slide_0001.png]\n"
                            "topic: quarterly\nsystem: Gamma\npurpose: Pitch\n")
        deck = Deck_Service.load_deck(manifest)
        assert [p.name for p in deck.slide_paths] == ["slide_0003.png", "slide_0001.png"]
        assert (deck.topic, deck.system, deck.purpose) == ("quarterly", "Gamma", "Pitch")

    def test_empty_directory(self, tmp_path):
        """A folder without images is an empty deck"""
        with pytest.raises(EmptyDeckError):
            Deck_Service.load_deck(tmp_path)

    def test_undecodable_image(self, tmp_path):
        """A file with an image suffix that does not decode is rejected"""
        (tmp_path / "slide_1.png").write_bytes(b"not a png")
        with pytest.raises(ImageDecodeError):
            Deck_Service.load_deck(tmp_path)


class TestEvaluation:

    def test_deterministic_struct(self, sample_deck_dir, eval_config):
        """Two runs produce byte-identical struct reports"""
        deck = Deck_Service.load_deck(sample_deck_dir)
        first = Deck_Service.emit_report(Deck_Service.evaluate_deck(deck, eval_config), "struct")
        second = Deck_Service.emit_report(Deck_Service.evaluate_deck(deck, eval_config), "struct")
        assert first == second

    def test_worker_count_does_not_change_output(self, sample_deck_dir):
        """Parallel slide passes keep slide order and values"""
        deck = Deck_Service.load_deck(sample_deck_dir)
        serial = Deck_Service.evaluate_deck(deck, EvaluationConfig(workers=1))
        parallel = Deck_Service.evaluate_deck(deck, EvaluationConfig(workers=4))
        assert Deck_Service.emit_report(serial) == Deck_Service.emit_report(parallel)

    def test_sample_deck_sections(self, sample_deck_dir, eval_config):
        """Every section of the reference deck computes"""
        report = Deck_Service.evaluate_deck(Deck_Service.load_deck(sample_deck_dir), eval_config)
        assert all(report.sections[name]["status"] == "ok" for name in report.components)
        assert report.sections["pei"]["status"] == "skipped"
        assert len(report.slides) == 6
        assert report.aesthetics == aesthetics_total(report.components)
        assert report.config["harmony"]["sigma"] == 0.01

    def test_gray_single_slide(self, tmp_path, eval_config):
        """A gray slide: harmony 5, usability unavailable, nothing failed"""
        write_png(tmp_path / "slide_1.png", solid((128, 128, 128), 64, 64))
        report = Deck_Service.evaluate_deck(Deck_Service.load_deck(tmp_path), eval_config)
        assert report.components["harmony"] == 5.0
        assert report.components["usability"] is None
        assert report.sections["usability"]["status"] == "unavailable"
        assert report.slides[0].blank
        assert report.failed_sections == []
        others = [report.components[n] for n in ("engagement", "harmony", "rhythm")]
        assert report.aesthetics == pytest.approx(round(sum(others), 2))

    def test_partial_sidecars(self, sample_deck_dir, eval_config):
        """Usability averages over the slides that have layouts"""
        for n in (2, 4, 6):
            (sample_deck_dir / f"slide_{n:04d}.json").unlink()
        report = Deck_Service.evaluate_deck(Deck_Service.load_deck(sample_deck_dir), eval_config)
        assert report.sections["usability"]["status"] == "ok"
        assert report.raw["usability_detail"]["slides_available"] == 3

    def test_slide_permutation(self, sample_deck_dir, eval_config):
        """Reordering slides keeps each slide's measurements"""
        forward = Deck_Service.evaluate_deck(Deck_Service.load_deck(sample_deck_dir), eval_config)
        manifest = sample_deck_dir / "reversed.yaml"
        manifest.write_text("slides: [" + ", ".join(f"slide_{n:04d}.png" for n in range(6, 0, -1)) + "]\n")
        backward = Deck_Service.evaluate_deck(Deck_Service.load_deck(manifest), eval_config)
        by_name = {s.name: s for s in backward.slides}
        for slide in forward.slides:
            other = by_name[slide.name]
            assert (other.colorfulness, other.entropy, other.harmony) == \
                (slide.colorfulness, slide.entropy, slide.harmony)
        assert backward.components["harmony"] == forward.components["harmony"]

    def test_unit_profile(self, sample_deck_dir):
        """The unit profile skips the display scaling"""
        deck = Deck_Service.load_deck(sample_deck_dir)
        standard = Deck_Service.evaluate_deck(deck, EvaluationConfig(workers=1))
        unit = Deck_Service.evaluate_deck(deck, EvaluationConfig(workers=1, profile=BUILTIN_PROFILES["unit"]))
        assert unit.raw["usability"] == pytest.approx(standard.raw["usability"] / 10.0)
        assert unit.profile["name"] == "unit"

    def test_package_attaches_pei(self, sample_deck_dir, tmp_path, eval_config):
        """A native package adds the PEI level"""
        package = tmp_path / "deck.pptx"
        package.write_bytes(build_level_fixture(4))
        deck = Deck_Service.load_deck(sample_deck_dir, package_path=package)
        report = Deck_Service.evaluate_deck(deck, eval_config)
        assert report.pei.level_label == "L4"
        assert report.sections["pei"]["status"] == "ok"

    def test_broken_package_fails_section_only(self, sample_deck_dir, tmp_path, eval_config):
        """A corrupt package fails the PEI section and keeps the rest"""
        package = tmp_path / "deck.pptx"
        package.write_bytes(b"garbage")
        deck = Deck_Service.load_deck(sample_deck_dir, package_path=package)
        report = Deck_Service.evaluate_deck(deck, eval_config)
        assert report.failed_sections == ["pei"]
        assert report.pei is None
        assert report.aesthetics is not None


class TestEmission:

    def test_table_header_and_cells(self):
        """Fixed header, two-decimal cells, N/A without PEI"""
        report = deck_report("t", "s", (5.62, 8.3, -0.47, 13.84))
        rows = list(csv.reader(io.StringIO(Deck_Service.emit_report(report, "table").decode("utf-8"))))
        assert rows[0] == ["Usability", "Engagement", "Harmony", "Rhythm", "Aesthetics", "PEI"]
        assert rows[1] == ["5.62", "8.30", "-0.47", "13.84", "27.29", "N/A"]

    def test_unavailable_component_cell(self):
        """A missing component prints N/A"""
        report = deck_report("t", "s", (None, 7.0, -1.0, 10.0))
        row = Deck_Service.emit_report(report, "table").decode("utf-8").splitlines()[1]
        assert row.startswith("N/A,7.00")

    def test_struct_round_trip(self, sample_deck_dir, tmp_path, eval_config):
        """A struct report parses back to an equal report"""
        package = tmp_path / "deck.pptx"
        package.write_bytes(build_level_fixture(5))
        report = Deck_Service.evaluate_deck(
            Deck_Service.load_deck(sample_deck_dir, package_path=package), eval_config)
        assert Deck_Service.parse_report(Deck_Service.emit_report(report, "struct")) == report

    def test_struct_is_canonical(self):
        """Sorted keys and a trailing newline"""
        data = Deck_Service.emit_report(deck_report("t", "s"), "struct")
        assert data.endswith(b"\n")
        assert list(json.loads(data)) == sorted(json.loads(data))

    def test_unknown_format(self):
        """Only struct and table exist"""
        with pytest.raises(InputError):
            Deck_Service.emit_report(deck_report("t", "s"), "xml")

    def test_load_reports_directory(self, tmp_path):
        """Every struct file under a folder is read"""
        for name in ("a", "b"):
            (tmp_path / f"{name}.json").write_bytes(Deck_Service.emit_report(deck_report(name, "S")))
        assert sorted(r.topic for r in Deck_Service.load_reports(tmp_path)) == ["a", "b"]

    def test_not_a_report(self, tmp_path):
        """Arbitrary JSON is not a deck report"""
        with pytest.raises(InputError):
            Deck_Service.parse_report(b'{"hello": 1}')


class TestAggregation:

    def test_mean_per_system(self):
        """Components average per system; rows sorted by Aesthetics"""
        reports = [
            deck_report("t1", "A", (4.0, 6.0, -1.0, 8.0)),
            deck_report("t2", "A", (6.0, 8.0, -1.0, 12.0)),
            deck_report("t1", "B", (6.0, 8.0, -0.5, 14.0)),
        ]
        rows = Deck_Service.aggregate_components(reports)
        assert [r["system"] for r in rows] == ["B", "A"]
        assert rows[1]["components"] == {"usability": 5.0, "engagement": 7.0, "harmony": -1.0, "rhythm": 10.0}
        assert rows[1]["aesthetics"] == 21.0
        assert rows[1]["decks"] == 2


if __name__ == "__main__":
    pytest.main([__file__])
