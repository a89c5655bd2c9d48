"""
Agreement between metric rankings and human rankings.

Per topic, metric scores are turned into descending ranks (ties averaged)
and compared with the human ranking by Spearman correlation. The report
gives the mean and population std of the per-topic correlations and the
share of topics whose rankings match exactly.
"""

import logging
import math
import re
from itertools import combinations
from pathlib import Path

import numpy as np
import yaml
from pydantic import ValidationError

from models.Alignment import (
    AblationRow,
    AlignmentReport,
    QuadrantPlacement,
    RankingFile,
    RankingRecord,
)
from utils.Exceptions import DomainError, InsufficientDataError, RankingParseError

logger = logging.getLogger(__name__)

COMPONENTS = ("usability", "engagement", "harmony", "rhythm")

QUADRANT_BOTH = "aesthetic+editable"
QUADRANT_VISUAL = "aesthetic-only"
QUADRANT_EDITABLE = "editable-only"
QUADRANT_NEITHER = "neither"


def _default_subsets():
    subsets = [(c,) for c in COMPONENTS]
    subsets += list(combinations(COMPONENTS, len(COMPONENTS) - 1))
    subsets.append(COMPONENTS)
    return subsets


class AlignmentService:

    def spearman(ranks_a, ranks_b):
        """
        Pearson correlation of two rank vectors. None when undefined:
        fewer than two items or no rank variance on either side.
        """
        a = np.asarray(list(ranks_a), dtype=np.float64)
        b = np.asarray(list(ranks_b), dtype=np.float64)
        if a.shape != b.shape:
            raise DomainError(f"rank vectors differ in length: {a.size} vs {b.size}")
        if a.size < 2:
            return None
        da, db = a - a.mean(), b - b.mean()
        sxx, syy = float(np.dot(da, da)), float(np.dot(db, db))
        if sxx <= 0 or syy <= 0:
            return None
        rho = float(np.dot(da, db)) / math.sqrt(sxx * syy)
        return min(1.0, max(-1.0, rho))

    def identical_ratio(pairs):
        pairs = list(pairs)
        if not pairs:
            raise InsufficientDataError("identical ratio needs at least one ranking pair")
        same = sum(1 for a, b in pairs if [float(x) for x in a] == [float(y) for y in b])
        return same / len(pairs)

    def alignment_report(metric_scores, human_rankings):
        """
        metric_scores: {topic: {system: score}}
        human_rankings: {topic: RankingRecord}

        A topic is compared when it shares at least two systems with the human
        ranking. avg_rho and std_rho run over compared topics with a defined
        correlation (topics_used). identical_pct runs over every compared topic
        (topics_compared), so a topic tied on both sides counts as identical
        even though its correlation is undefined.
        """
        topics = sorted(set(metric_scores) & set(human_rankings))
        rhos, per_topic, undefined, identical, skipped = [], {}, [], [], []
        pairs = []
        for topic in topics:
            human = human_rankings[topic]
            systems = sorted(set(metric_scores[topic]) & set(human.ranks))
            if len(systems) < 2:
                skipped.append(topic)
                continue
            metric = RankingRecord.from_scores(topic, {s: metric_scores[topic][s] for s in systems})
            # Human ranks are re-ranked over the shared systems only.
            human_sub = RankingRecord.from_scores(topic, {s: -human.ranks[s] for s in systems})
            a, b = metric.vector(systems), human_sub.vector(systems)
            pairs.append((a, b))
            if a == b:
                identical.append(topic)
            rho = AlignmentService.spearman(a, b)
            per_topic[topic] = rho
            if rho is None:
                undefined.append(topic)
            else:
                rhos.append(rho)

        if not rhos:
            raise InsufficientDataError(
                f"no usable topics: {len(topics)} shared, {len(undefined)} undefined, {len(skipped)} skipped"
            )
        if undefined:
            logger.warning("%d topics have an undefined correlation and were excluded", len(undefined))
        values = np.asarray(rhos)
        return AlignmentReport(
            avg_rho=float(values.mean()),
            std_rho=float(values.std()),
            identical_pct=100.0 * AlignmentService.identical_ratio(pairs),
            topics_used=len(rhos),
            topics_compared=len(pairs),
            per_topic=per_topic,
            undefined_topics=undefined,
            identical_topics=identical,
            skipped_topics=skipped,
        )

    # ── Metric scores from deck reports ───────────────────────────────────

    def scores_from_reports(reports, components=None):
        """
        {topic: {system: score}} from deck reports. With `components` the score
        is the sum of those components (missing ones count 0), otherwise the
        Aesthetics total.
        """
        out = {}
        for report in reports:
            if not report.topic or not report.system:
                logger.warning("report without topic/system skipped")
                continue
            if components is None:
                value = report.aesthetics
            else:
                value = round(sum(report.components.get(c) or 0.0 for c in components), 2)
            if value is None:
                continue
            out.setdefault(report.topic, {})[report.system] = value
        return out

    def ablation(reports, rankings, subsets=None):
        rows = []
        for subset in subsets or _default_subsets():
            subset = tuple(subset)
            name = "+".join(subset)
            try:
                report = AlignmentService.alignment_report(
                    AlignmentService.scores_from_reports(reports, subset), rankings)
                rows.append(AblationRow(name=name, components=subset, report=report))
            except InsufficientDataError as e:
                rows.append(AblationRow(name=name, components=subset, error=str(e)))
        return rows

    def quadrants(reports, aesthetics_cut=None, pei_cut=3):
        """
        Place each system by mean Aesthetics against the cut (median of the
        system means when omitted) and mean PEI level against pei_cut.
        Systems without any evaluated package get no quadrant.
        """
        by_system = {}
        for report in reports:
            if not report.system or report.aesthetics is None:
                continue
            entry = by_system.setdefault(report.system, {"aesthetics": [], "pei": []})
            entry["aesthetics"].append(report.aesthetics)
            if report.pei is not None and report.pei.evaluable:
                entry["pei"].append(report.pei.level)
        if not by_system:
            raise InsufficientDataError("no reports with an Aesthetics score")

        means = {s: float(np.mean(v["aesthetics"])) for s, v in by_system.items()}
        cut = float(np.median(list(means.values()))) if aesthetics_cut is None else aesthetics_cut
        placements = []
        for system in sorted(by_system):
            levels = by_system[system]["pei"]
            level = float(np.mean(levels)) if levels else None
            quadrant = None
            if level is not None:
                visual, editable = means[system] >= cut, level >= pei_cut
                quadrant = {
                    (True, True): QUADRANT_BOTH,
                    (True, False): QUADRANT_VISUAL,
                    (False, True): QUADRANT_EDITABLE,
                    (False, False): QUADRANT_NEITHER,
                }[(visual, editable)]
            placements.append(QuadrantPlacement(system=system, aesthetics=means[system],
                                                pei_level=level, quadrant=quadrant))
        return placements

    # ── Ranking files ─────────────────────────────────────────────────────

    def parse_ranking_lines(text):
        """
        One topic per line: ``topic<TAB>A > B = C > D``. ``>`` separates
        preference groups, ``=`` joins ties, ``#`` starts a comment.
        """
        records = {}
        for number, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "\t" in raw:
                topic, order = (part.strip() for part in line.split("\t", 1))
            else:
                parts = re.split(r"\s{2,}", line, maxsplit=1)
                if len(parts) != 2:
                    raise RankingParseError("expected 'topic<TAB>ranking'", line=number)
                topic, order = parts
            groups = [[name.strip() for name in group.split("=")] for group in order.split(">")]
            if any(not name for group in groups for name in group):
                raise RankingParseError(f"empty system name in ranking for {topic!r}", line=number)
            if topic in records:
                raise RankingParseError(f"topic {topic!r} ranked twice", line=number)
            try:
                records[topic] = RankingRecord.from_order(topic, groups)
            except (ValueError, ValidationError) as e:
                raise RankingParseError(str(e), line=number) from e
        return records

    def parse_ranking_data(data):
        """Structured form: a mapping with ``rankings`` or a bare list of entries."""
        if isinstance(data, list):
            data = {"rankings": data}
        try:
            parsed = RankingFile.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            loc = ".".join(str(p) for p in first["loc"])
            raise RankingParseError(f"invalid ranking file at {loc}: {first['msg']}") from e
        records = {}
        for entry in parsed.rankings:
            try:
                records[entry.topic] = RankingRecord.from_order(entry.topic, entry.order)
            except (ValueError, ValidationError) as e:
                raise RankingParseError(f"topic {entry.topic!r}: {e}") from e
        return records

    def load_rankings(path):
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise RankingParseError(f"cannot read rankings '{path}': {e.strerror or e}") from e
        if path.suffix.lower() in (".yaml", ".yml", ".json"):
            try:
                data = yaml.safe_load(text)
            except yaml.YAMLError as e:
                raise RankingParseError(f"malformed ranking file '{path}': {e}") from e
            return AlignmentService.parse_ranking_data(data)
        return AlignmentService.parse_ranking_lines(text)
