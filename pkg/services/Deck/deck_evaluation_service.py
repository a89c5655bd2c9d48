"""
Deck evaluation: per-slide metric passes, temporal reductions and report
assembly under the active reporting profile.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from config import VERSION
from models.Report import (
    COMPONENTS, SECTION_FAILED, SECTION_OK, SECTION_SKIPPED, SECTION_UNAVAILABLE,
    DeckReport, SlideRecord, aesthetics_total, round_component,
)
from models.Settings import EvaluationConfig
from services.Aesthetics.engagement_service import EngagementService
from services.Aesthetics.harmony_service import HarmonyService
from services.Aesthetics.rhythm_service import RhythmService
from services.Aesthetics.usability_service import UsabilityService
from services.Pei.pei_evaluation_service import PeiEvaluationService
from services.layout_service import Layout_Service
from utils.Exceptions import InputError, InsufficientDataError

logger = logging.getLogger(__name__)


def _failed(message, slides=None):
    section = {"status": SECTION_FAILED, "message": message}
    if slides:
        section["slides"] = slides
    return section


def _slide_failures(records, section):
    failing = [r for r in records if section in r.errors]
    if not failing:
        return None
    first = failing[0]
    return _failed(f"slide {first.index} ({first.name}): {first.errors[section]}",
                   slides=[r.index for r in failing])


# ── Per-slide pass ───────────────────────────────────────────────────────────

def _measure_slide(deck, index, config):
    path = deck.slide_paths[index]
    layout_path = deck.layout_paths[index]
    record = SlideRecord(index=index + 1, name=Path(path).name,
                         layout=Path(layout_path).name if layout_path else None)
    img = deck.load_slide(index)

    try:
        record.harmony = HarmonyService.best_fit(img, config.harmony).to_dict()
    except InputError as e:
        record.errors["harmony"] = str(e)

    try:
        record.colorfulness = EngagementService.colorfulness(img)
    except InputError as e:
        record.errors["engagement"] = str(e)

    usability = None
    if layout_path is not None:
        try:
            layout = Layout_Service.parse_layout_path(layout_path, index + 1, (img.width, img.height))
            usability = UsabilityService.slide_usability(img, layout, config.usability)
            record.usability = usability.score
            record.text_regions = len(usability.regions)
        except InputError as e:
            record.errors["usability"] = str(e)

    try:
        entropy = RhythmService.subband_entropy(img, config.pyramid, config.entropy)
        record.entropy = entropy.entropy
        record.blank = entropy.blank
        record.entropy_score = RhythmService.entropy_to_score(entropy.entropy, config.entropy)
        if entropy.blank:
            logger.warning("slide %d (%s) is blank for subband entropy", record.index, record.name)
    except InputError as e:
        record.errors["rhythm"] = str(e)

    logger.debug("slide %d measured: M=%s E=%s", record.index, record.colorfulness, record.entropy)
    return record, usability


class DeckEvaluationService:

    def measure_slides(deck, config):
        """Per-slide measurements on a thread pool, returned in slide order."""
        workers = max(1, min(config.workers, len(deck)))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda i: _measure_slide(deck, i, config), range(len(deck))))

    # ── Deck reductions ──────────────────────────────────────────────────────

    def harmony_section(records, config):
        failure = _slide_failures(records, "harmony")
        if failure:
            return None, failure, {}
        scores = [r.harmony["slide_score"] for r in records]
        value = HarmonyService.deck_harmony_score(
            scores, config.harmony.deck_mean_weight, config.harmony.deck_std_weight)
        detail = {"mean": float(np.mean(scores)), "std": float(np.std(scores))}
        return value, {"status": SECTION_OK}, detail

    def engagement_section(records, config):
        failure = _slide_failures(records, "engagement")
        if failure:
            return None, failure, {}
        values = [r.colorfulness for r in records]
        value = EngagementService.engagement_component(values, config.engagement, config.profile)
        pacing = EngagementService.pacing_score(
            values, config.engagement.pacing_target, config.engagement.pacing_width)
        detail = {"mean_colorfulness": float(np.mean(values)),
                  "std_colorfulness": float(np.std(values)),
                  "pacing": pacing}
        return value, {"status": SECTION_OK}, detail

    def usability_section(records, usabilities, config):
        failure = _slide_failures(records, "usability")
        if failure:
            return None, failure, {}
        value = UsabilityService.deck_usability(usabilities, scale=config.profile.usability_scale)
        available = sum(1 for u in usabilities if u is not None and u.available)
        detail = {"slides_available": available}
        if value is None:
            return None, {"status": SECTION_UNAVAILABLE,
                          "message": "no slide has a scorable text region"}, detail
        return value, {"status": SECTION_OK, "slides_available": available}, detail

    def rhythm_section(records, config):
        failure = _slide_failures(records, "rhythm")
        if failure:
            return None, failure, {}
        hrv = RhythmService.visual_hrv_score([r.entropy_score for r in records], config.hrv)
        return hrv.score / config.profile.rhythm_divisor, {"status": SECTION_OK}, hrv.to_dict()

    def assemble(components):
        """Two-decimal components and their Aesthetics sum."""
        rounded = {name: round_component(components.get(name)) for name in COMPONENTS}
        return rounded, aesthetics_total(rounded)

    # ── Orchestration ────────────────────────────────────────────────────────

    def evaluate_deck(deck, config=None):
        """
        Run every metric over the deck and assemble the DeckReport.

        A section that cannot be computed is reported with status ``failed``
        (or ``unavailable`` for usability without text regions) and adds
        nothing to Aesthetics. Errors outside InputError propagate.
        """
        config = config or EvaluationConfig()
        if len(deck) == 0:
            raise InsufficientDataError("deck has no slides")
        logger.info("evaluating %s/%s (%d slides)", deck.system, deck.topic, len(deck))

        measured = DeckEvaluationService.measure_slides(deck, config)
        records = [m[0] for m in measured]
        usabilities = [m[1] for m in measured]

        components, sections, raw = {}, {}, {}
        reductions = {
            "usability": lambda: DeckEvaluationService.usability_section(records, usabilities, config),
            "engagement": lambda: DeckEvaluationService.engagement_section(records, config),
            "harmony": lambda: DeckEvaluationService.harmony_section(records, config),
            "rhythm": lambda: DeckEvaluationService.rhythm_section(records, config),
        }
        for name in COMPONENTS:
            try:
                value, status, detail = reductions[name]()
            except InputError as e:
                value, status, detail = None, _failed(str(e)), {}
            components[name] = value
            sections[name] = status
            raw[name] = value
            raw[f"{name}_detail"] = detail
            if status["status"] != SECTION_OK:
                logger.warning("%s/%s: %s section %s: %s", deck.system, deck.topic, name,
                               status["status"], status.get("message", ""))

        present = [v for v in components.values() if v is not None]
        raw["aesthetics"] = float(sum(present)) if present else None

        pei = None
        if deck.package_path is not None:
            try:
                pei = PeiEvaluationService.evaluate_pei(deck.package_path, thresholds=config.pei)
                sections["pei"] = {"status": SECTION_OK}
            except InputError as e:
                sections["pei"] = _failed(str(e))
                logger.warning("%s/%s: PEI failed: %s", deck.system, deck.topic, e)
        else:
            sections["pei"] = {"status": SECTION_SKIPPED}

        report = DeckReport(
            topic=deck.topic,
            system=deck.system,
            purpose=deck.purpose,
            slides=records,
            components=components,
            raw=raw,
            sections=sections,
            pei=pei,
            profile=config.profile.to_dict(),
            config=config.to_dict(),
            version=VERSION,
        )
        logger.info("%s/%s: aesthetics %s", deck.system, deck.topic, report.aesthetics)
        return report

    def aggregate_components(reports, key=("system",)):
        """
        Mean components per group of reports, e.g. key ("system", "purpose").

        Rows are sorted by Aesthetics, highest first.
        """
        if isinstance(key, str):
            key = (key,)
        groups = {}
        for report in reports:
            group = tuple(getattr(report, k) or "" for k in key)
            groups.setdefault(group, []).append(report)

        rows = []
        for group, members in groups.items():
            means = {}
            for name in COMPONENTS:
                values = [r.components[name] for r in members if r.components.get(name) is not None]
                means[name] = float(np.mean(values)) if values else None
            rounded, total = DeckEvaluationService.assemble(means)
            rows.append({
                **dict(zip(key, group)),
                "decks": len(members),
                "components": rounded,
                "aesthetics": total,
            })
        rows.sort(key=lambda r: (r["aesthetics"] is None, -(r["aesthetics"] or 0.0),
                                 [r[k] for k in key]))
        return rows
