"""
SlideBench CLI Commands
=======================
Deck evaluation, PEI analysis, alignment statistics and QuizBank tooling.

Commands:
  python cli.py eval DECK...          - Aesthetics report for one or more decks
  python cli.py pei INPUT             - Editability level of a package
  python cli.py align                 - Metric/human ranking agreement
  python cli.py quiz ...              - QuizBank validation, scoring, aggregation
  python cli.py fixtures OUT_DIR      - Write the PEI fixture packages
  python cli.py sample-deck OUT_DIR   - Write the six-slide reference deck

Inside a Flask app the same group is available as ``flask slidebench``.
Exit codes: 0 success, 1 input error, 2 internal error.
"""

import csv
import io
import json
import logging
import sys
from pathlib import Path

import click
from tqdm import tqdm

from config import VERSION, configure_logging, load_evaluation_config
from models.Pei import GATES
from services.Deck.report_service import FORMATS
from services.alignment_service import AlignmentService
from services.deck_service import Deck_Service
from services.pei_service import Pei_Service
from services.quiz_service import Quiz_Service
from utils.AI import LlmClient
from utils.ExcelHandler import createAccuracyWorkbook
from utils.Exceptions import InputError
from utils.PresentationCompiler import write_fixtures
from utils.SampleDeck import write_sample_deck

logger = logging.getLogger("slidebench.cli")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2


class SlideBenchGroup(click.Group):
    """Maps InputError to exit 1 and anything unexpected to exit 2."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (click.exceptions.Exit, click.Abort):
            raise
        except click.UsageError as e:
            e.show()
            ctx.exit(EXIT_INPUT)
        except InputError as e:
            click.secho(f"✗ {e}", fg="red", err=True)
            ctx.exit(EXIT_INPUT)
        except Exception as e:
            logger.exception("internal error")
            click.secho(f"✗ internal error: {e}", fg="red", err=True)
            ctx.exit(EXIT_INTERNAL)


def _write_output(data, output):
    if output:
        Path(output).write_bytes(data)
        click.secho(f"✓ wrote {output}", fg="green", err=True)
    else:
        click.echo(data.decode("utf-8"), nl=False)


def _echo_json(payload):
    click.echo(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))


@click.group(cls=SlideBenchGroup)
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
@click.version_option(VERSION, prog_name="slidebench")
def cli(log_level):
    """SlideBench evaluation engine."""
    configure_logging(log_level)


# ── eval ─────────────────────────────────────────────────────────────────────

@cli.command("eval")
@click.argument("decks", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--layout-dir", type=click.Path(exists=True, file_okay=False), help="Folder of layout sidecars")
@click.option("--pptx", type=click.Path(exists=True, dir_okay=False), help="Native package for the PEI section")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="YAML parameter file")
@click.option("--profile", default=None, help="Reporting profile name")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="struct", show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write the report here instead of stdout")
@click.option("--topic", default=None)
@click.option("--system", default=None)
@click.option("--purpose", default=None)
def eval_command(decks, layout_dir, pptx, config_path, profile, fmt, output, topic, system, purpose):
    """Evaluate one or more decks (image folders or manifests)."""
    if pptx and len(decks) > 1:
        raise InputError("--pptx applies to a single deck")
    config = load_evaluation_config(config_path, profile)
    reports = []
    for source in tqdm(decks, desc="decks", unit="deck", disable=len(decks) < 2, file=sys.stderr):
        deck = Deck_Service.load_deck(source, layout_dir=layout_dir, package_path=pptx,
                                      topic=topic, system=system, purpose=purpose)
        report = Deck_Service.evaluate_deck(deck, config)
        for name in report.failed_sections:
            click.secho(f"! {deck.system}/{deck.topic}: {name} failed: "
                        f"{report.sections[name].get('message', '')}", fg="yellow", err=True)
        reports.append(report)
    _write_output(Deck_Service.emit_report(reports[0] if len(reports) == 1 else reports, fmt), output)


# ── pei ──────────────────────────────────────────────────────────────────────

def _pei_table(report):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["Route", "Level"] + list(GATES))
    writer.writerow([report.route.route, report.level_label if report.evaluable else "N/A"]
                    + [g.status for g in report.gates])
    return out.getvalue().encode("utf-8")


@cli.command("pei")
@click.argument("source")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="struct", show_default=True)
def pei_command(source, config_path, fmt):
    """Triage INPUT (path or URL) and run the editability gates."""
    config = load_evaluation_config(config_path)
    report = Pei_Service.evaluate_pei(source, thresholds=config.pei)
    if fmt == "table":
        _write_output(_pei_table(report), None)
    else:
        _echo_json(report.to_dict())


# ── align ────────────────────────────────────────────────────────────────────

@cli.command("align")
@click.option("--reports", "reports_path", required=True, type=click.Path(exists=True),
              help="Deck report file or folder of struct reports")
@click.option("--human", "human_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Human rankings (line format, YAML or JSON)")
@click.option("--ablation", is_flag=True, help="Also score every component subset")
@click.option("--quadrants", is_flag=True, help="Also place systems in the editability quadrants")
@click.option("--aesthetics-cut", type=float, default=None, help="Quadrant cut; median when omitted")
@click.option("--pei-cut", type=int, default=3, show_default=True)
def align_command(reports_path, human_path, ablation, quadrants, aesthetics_cut, pei_cut):
    """Spearman agreement between Aesthetics rankings and human rankings."""
    reports = Deck_Service.load_reports(reports_path)
    rankings = AlignmentService.load_rankings(human_path)
    scores = AlignmentService.scores_from_reports(reports)
    payload = {"alignment": AlignmentService.alignment_report(scores, rankings).to_dict()}
    if ablation:
        payload["ablation"] = [row.to_dict() for row in AlignmentService.ablation(reports, rankings)]
    if quadrants:
        payload["quadrants"] = [p.to_dict() for p in
                                AlignmentService.quadrants(reports, aesthetics_cut, pei_cut)]
    _echo_json(payload)


# ── quiz ─────────────────────────────────────────────────────────────────────

@cli.group("quiz")
def quiz():
    """QuizBank validation, scoring and aggregation."""


@quiz.command("validate")
@click.argument("bank", type=click.Path(exists=True, dir_okay=False))
@click.option("--source", type=click.Path(exists=True, dir_okay=False), help="Source document text")
def quiz_validate(bank, source):
    """Check BANK for structure, balance and verbatim quotes."""
    doc = Quiz_Service.load_quizbank(bank)
    source_text = Path(source).read_text(encoding="utf-8") if source else None
    report = Quiz_Service.validate_quizbank(doc, source_text=source_text)
    _echo_json(report.to_dict())
    if report.ok:
        click.secho(f"✓ {bank}: {report.question_count} questions, no findings", fg="green", err=True)
        return
    for f in report.findings:
        click.secho(f"✗ [{f.check}] {f.question_id or '-'}: {f.message}", fg="red", err=True)
    sys.exit(EXIT_INPUT)


@quiz.command("score")
@click.argument("bank", type=click.Path(exists=True, dir_okay=False))
@click.argument("answers", type=click.Path(exists=True, dir_okay=False))
def quiz_score(bank, answers):
    """Score an exam ANSWERS file against the BANK key."""
    score = Quiz_Service.score_quiz(Quiz_Service.load_answers(answers), Quiz_Service.load_quizbank(bank))
    _echo_json(score.to_dict())


@quiz.command("aggregate")
@click.argument("records", type=click.Path(exists=True, dir_okay=False))
@click.option("--xlsx", type=click.Path(dir_okay=False), help="Also write the table as a workbook")
def quiz_aggregate(records, xlsx):
    """Accuracy table by purpose and richness level."""
    table = Quiz_Service.aggregate_accuracy(Quiz_Service.load_results(records))
    _echo_json(table)
    if xlsx:
        createAccuracyWorkbook(table, path=xlsx)
        click.secho(f"✓ wrote {xlsx}", fg="green", err=True)


@quiz.command("errors")
@click.argument("records", type=click.Path(exists=True, dir_okay=False))
def quiz_errors(records):
    """Error-type distribution, overall and per system."""
    _echo_json(Quiz_Service.error_taxonomy_rollup(Quiz_Service.load_error_records(records)))


@quiz.command("richness")
@click.argument("corpus", type=click.Path(exists=True, dir_okay=False))
def quiz_richness(corpus):
    """Richness score and level for every (text_length, image_count) row."""
    rich, ids = Quiz_Service.load_richness_corpus(corpus)
    _echo_json({
        "corpus": rich.to_dict(),
        "items": [{"id": i, **s.to_dict()} for i, s in zip(ids, rich.scores())],
    })


@quiz.command("build")
@click.argument("document", type=click.Path(exists=True, dir_okay=False))
@click.option("--topic", required=True)
@click.option("--domain", required=True)
@click.option("--focus", required=True)
@click.option("--purpose", required=True, help="One sentence on what the deck is for")
@click.option("--output", "-o", type=click.Path(dir_okay=False))
def quiz_build(document, topic, domain, focus, purpose, output):
    """Construct a QuizBank from DOCUMENT with the three LLM phases (live endpoint)."""
    config = load_evaluation_config()
    text = Path(document).read_text(encoding="utf-8")
    bank, report = Quiz_Service.build_quizbank(text, topic, domain, focus, purpose,
                                               client=LlmClient(config.llm))
    data = (json.dumps(bank.to_dict(), indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    _write_output(data, output)
    for f in report.findings:
        click.secho(f"! [{f.check}] {f.question_id or '-'}: {f.message}", fg="yellow", err=True)


@quiz.command("exam")
@click.argument("bank", type=click.Path(exists=True, dir_okay=False))
@click.argument("slides_text", type=click.Path(exists=True, dir_okay=False))
@click.option("--topic", required=True)
def quiz_exam(bank, slides_text, topic):
    """Open-book exam over the extracted SLIDES_TEXT against a live endpoint."""
    config = load_evaluation_config()
    key = Quiz_Service.load_quizbank(bank)
    contents = Path(slides_text).read_text(encoding="utf-8")
    answers = Quiz_Service.run_exam(key, contents, topic=topic, client=LlmClient(config.llm))
    score = Quiz_Service.score_quiz(answers, key)
    _echo_json({"answers": answers.model_dump(), "score": score.to_dict()})


# ── generators ───────────────────────────────────────────────────────────────

@cli.command("fixtures")
@click.argument("out_dir", type=click.Path(file_okay=False))
def fixtures_command(out_dir):
    """Write PEI fixture packages L0..L5 and the gate variants."""
    written = write_fixtures(out_dir)
    for name, path in written.items():
        click.secho(f"✓ {name}: {path}", fg="green")


@cli.command("sample-deck")
@click.argument("out_dir", type=click.Path(file_okay=False))
@click.option("--no-layouts", is_flag=True, help="Skip the layout sidecars")
def sample_deck_command(out_dir, no_layouts):
    """Write the six-slide reference deck."""
    paths = write_sample_deck(out_dir, with_layouts=not no_layouts)
    click.secho(f"✓ wrote {len(paths)} slides to {out_dir}", fg="green")


def init_cli(app):
    """Register the command group with the Flask app"""
    app.cli.add_command(cli, name="slidebench")


if __name__ == "__main__":
    cli()
