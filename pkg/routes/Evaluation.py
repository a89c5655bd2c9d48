"""
routes/Evaluation.py  JSON API over the evaluation services.

Register in app.py:
    from routes.Evaluation import evaluation
    app.register_blueprint(evaluation)
"""

import math
import tempfile
from pathlib import Path

from flask import Blueprint, current_app, jsonify, request
from werkzeug.utils import secure_filename

from config import VERSION
from services.alignment_service import AlignmentService
from services.deck_service import Deck_Service
from services.pei_service import Pei_Service
from services.quiz_service import Quiz_Service
from utils.Exceptions import InputError
from utils.decorators import log_action

evaluation = Blueprint("evaluation", __name__, url_prefix="/api/v1/evaluation")


def _json_body(*required):
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise InputError("request body must be a JSON object")
    missing = [k for k in required if k not in data]
    if missing:
        raise InputError(f"missing field(s): {', '.join(missing)}")
    return data


def _save_uploads(files, folder):
    paths = []
    for n, storage in enumerate(files, 1):
        name = secure_filename(storage.filename or "") or f"upload_{n}"
        path = Path(folder) / name
        if path.exists():
            raise InputError(f"duplicate upload name '{name}'")
        storage.save(path)
        paths.append(path)
    return paths


def _metric_scores(raw):
    """{topic: {system: score}} with every score a finite number."""
    if not isinstance(raw, dict) or not all(isinstance(v, dict) for v in raw.values()):
        raise InputError("'scores' must map topic -> {system: score}")
    out = {}
    for topic, systems in raw.items():
        for system, value in systems.items():
            try:
                score = float(value)
            except (TypeError, ValueError):
                raise InputError(f"score for {topic}/{system} is not a number: {value!r}") from None
            if not math.isfinite(score):
                raise InputError(f"score for {topic}/{system} is not finite: {value!r}")
            out.setdefault(str(topic), {})[str(system)] = score
    return out


@evaluation.route("/health", methods=["GET"])
def health():
    return jsonify(status="ok", version=VERSION), 200


@evaluation.route("/pei", methods=["POST"])
@log_action("evaluate", "pei")
def pei():
    """Multipart ``file``: a package, PDF or image. Returns the PeiReport."""
    upload = request.files.get("file")
    if upload is None:
        raise InputError("multipart field 'file' is required")
    report = Pei_Service.evaluate_pei(upload.filename or "upload", data=upload.read(),
                                      thresholds=current_app.config["EVALUATION"].pei)
    return jsonify(report.to_dict()), 200


@evaluation.route("/deck", methods=["POST"])
@log_action("evaluate", "deck")
def deck():
    """
    Multipart ``slides`` (one file per page), optional ``layouts`` sidecars
    matched by file stem and an optional ``package``.
    """
    slides = request.files.getlist("slides")
    if not slides:
        raise InputError("multipart field 'slides' needs at least one image")
    with tempfile.TemporaryDirectory(prefix="slidebench_") as tmp:
        deck_dir = Path(tmp) / (secure_filename(request.form.get("topic") or "") or "deck")
        deck_dir.mkdir()
        _save_uploads(slides, deck_dir)
        _save_uploads(request.files.getlist("layouts"), deck_dir)
        package = request.files.get("package")
        package_path = _save_uploads([package], tmp)[0] if package else None

        seq = Deck_Service.load_deck(deck_dir, package_path=package_path,
                                     topic=request.form.get("topic"),
                                     system=request.form.get("system") or "upload",
                                     purpose=request.form.get("purpose"))
        report = Deck_Service.evaluate_deck(seq, current_app.config["EVALUATION"])
    return jsonify(report.to_dict()), 200


@evaluation.route("/quiz/validate", methods=["POST"])
@log_action("validate", "quiz")
def quiz_validate():
    data = _json_body("bank")
    bank = Quiz_Service.parse_quizbank(data["bank"], topic=data.get("topic", ""))
    report = Quiz_Service.validate_quizbank(bank, source_text=data.get("source_text"))
    return jsonify(report.to_dict()), 200


@evaluation.route("/quiz/score", methods=["POST"])
@log_action("score", "quiz")
def quiz_score():
    data = _json_body("bank", "answers")
    bank = Quiz_Service.parse_quizbank(data["bank"])
    answers = Quiz_Service.parse_answers(data["answers"])
    return jsonify(Quiz_Service.score_quiz(answers, bank).to_dict()), 200


@evaluation.route("/align", methods=["POST"])
@log_action("align", "rankings")
def align():
    """
    Body: ``{"scores": {topic: {system: score}}, "rankings": <ranking data>}``
    where rankings are the line format as one string or any structured form
    the ranking loader accepts.
    """
    data = _json_body("scores", "rankings")
    if isinstance(data["rankings"], str):
        rankings = AlignmentService.parse_ranking_lines(data["rankings"])
    else:
        rankings = AlignmentService.parse_ranking_data(data["rankings"])
    report = AlignmentService.alignment_report(_metric_scores(data["scores"]), rankings)
    return jsonify(report.to_dict()), 200
