import csv
import io
import logging
import math
from pathlib import Path

import numpy as np
import yaml
from pydantic import ValidationError

from models.Quiz import ERROR_TYPES, RICHNESS_LEVELS, ErrorRecord, QuizResult, RichnessScore
from utils.Exceptions import DomainError, InsufficientDataError, QuizParseError

logger = logging.getLogger(__name__)

AVG_COLUMN = "Avg"


def _mean(values):
    return float(np.mean(values)) if values else None


def richness_score(text_length, image_count, extrema, w_t=0.7, w_i=0.3, cuts=None):
    """
    S = w_t * (T - Tmin) / (Tmax - Tmin) + w_i * (I - Imin) / (Imax - Imin), clamped to [0, 1].

    extrema is (Tmin, Tmax, Imin, Imax). With tertile cuts (c1, c2) the level is
    Low below c1, Medium below c2, High otherwise.
    """
    t_min, t_max, i_min, i_max = extrema
    if not t_max > t_min:
        raise DomainError(f"degenerate text-length extrema: min {t_min}, max {t_max}")
    if not i_max > i_min:
        raise DomainError(f"degenerate image-count extrema: min {i_min}, max {i_max}")
    s = (w_t * (text_length - t_min) / (t_max - t_min)
         + w_i * (image_count - i_min) / (i_max - i_min))
    s = min(1.0, max(0.0, s))
    level = None
    if cuts is not None:
        c1, c2 = cuts
        level = RICHNESS_LEVELS[0] if s < c1 else RICHNESS_LEVELS[1] if s < c2 else RICHNESS_LEVELS[2]
    return RichnessScore(text_length=text_length, image_count=image_count, score=s, level=level)


class RichnessCorpus:
    """Extrema and rank-balanced tertile cuts over a set of (T, I) samples."""

    def __init__(self, samples, w_t=0.7, w_i=0.3):
        samples = [(float(t), float(i)) for t, i in samples]
        if not samples:
            raise InsufficientDataError("richness corpus is empty")
        self.samples = samples
        self.w_t, self.w_i = w_t, w_i
        ts, is_ = [t for t, _ in samples], [i for _, i in samples]
        self.extrema = (min(ts), max(ts), min(is_), max(is_))
        raw = sorted(richness_score(t, i, self.extrema, w_t, w_i).score for t, i in samples)
        n = len(raw)
        # The first ceil(n/3) ranks are Low, the next third Medium.
        self.cuts = (raw[math.ceil(n / 3)], raw[math.ceil(2 * n / 3)]) if n >= 3 else None

    def score(self, text_length, image_count):
        return richness_score(text_length, image_count, self.extrema, self.w_t, self.w_i, self.cuts)

    def scores(self):
        return [self.score(t, i) for t, i in self.samples]

    def to_dict(self):
        return {
            "extrema": {"text_min": self.extrema[0], "text_max": self.extrema[1],
                        "images_min": self.extrema[2], "images_max": self.extrema[3]},
            "weights": {"w_t": self.w_t, "w_i": self.w_i},
            "cuts": list(self.cuts) if self.cuts else None,
        }


def _load_rows(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as e:
        raise QuizParseError(f"cannot read '{path}': {e.strerror or e}") from e
    if path.suffix.lower() == ".csv":
        rows = list(csv.DictReader(io.StringIO(text)))
        return [{k: (v if v != "" else None) for k, v in row.items()} for row in rows]
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise QuizParseError(f"malformed records file '{path}': {e}") from e
    if isinstance(data, dict):
        data = data.get("records", data.get("results", data.get("errors")))
    if not isinstance(data, list):
        raise QuizParseError(f"'{path}' must hold a list of records")
    return data


def _parse_rows(rows, model):
    out = []
    for n, row in enumerate(rows, 1):
        try:
            out.append(model.model_validate(row))
        except ValidationError as e:
            err = e.errors()[0]
            raise QuizParseError(
                f"record {n}: {'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
            ) from e
    return out


class QuizAnalyticsService:

    def load_results(path):
        return _parse_rows(_load_rows(path), QuizResult)

    def load_error_records(path):
        return _parse_rows(_load_rows(path), ErrorRecord)

    def load_richness_corpus(path, w_t=0.7, w_i=0.3):
        rows = _load_rows(path)
        try:
            samples = [(float(r["text_length"]), float(r["image_count"])) for r in rows]
        except (KeyError, TypeError, ValueError) as e:
            raise QuizParseError(f"richness corpus rows need text_length and image_count: {e}") from e
        ids = [str(r.get("id", n)) for n, r in enumerate(rows, 1)]
        return RichnessCorpus(samples, w_t, w_i), ids

    def aggregate_accuracy(results):
        """
        Accuracy table: one row per system, a column per purpose, per richness
        level and the overall average. Cells without data are None (N/A).
        """
        results = list(results)
        if not results:
            raise InsufficientDataError("accuracy aggregation needs at least one result")
        systems = sorted({r.system for r in results})
        purposes = sorted({r.purpose for r in results if r.purpose})
        levels = [lv for lv in RICHNESS_LEVELS if any(r.level == lv for r in results)]

        by_purpose, by_level, overall = {}, {}, {}
        for s in systems:
            mine = [r for r in results if r.system == s]
            by_purpose[s] = {p: _mean([r.accuracy for r in mine if r.purpose == p]) for p in purposes}
            by_level[s] = {lv: _mean([r.accuracy for r in mine if r.level == lv]) for lv in levels}
            overall[s] = _mean([r.accuracy for r in mine])

        columns = purposes + levels + [AVG_COLUMN]
        rows = [
            {"system": s,
             "cells": [by_purpose[s][p] for p in purposes]
                      + [by_level[s][lv] for lv in levels]
                      + [overall[s]]}
            for s in systems
        ]
        return {
            "columns": columns,
            "rows": rows,
            "by_purpose": by_purpose,
            "by_level": by_level,
            "overall": overall,
            "records": len(results),
        }

    def error_taxonomy_rollup(records):
        """Count and share per error type, overall and for each system."""
        records = list(records)
        total = len(records)

        def shares(subset):
            n = len(subset)
            rows = []
            for t in ERROR_TYPES:
                count = sum(1 for r in subset if r.error_type == t)
                rows.append({
                    "type": t,
                    "count": count,
                    "share": count / n if n else 0.0,
                    "percent": round(100.0 * count / n, 1) if n else 0.0,
                })
            return rows

        systems = {}
        for r in records:
            systems.setdefault(r.system or "unknown", []).append(r)
        per_system = [
            {"system": name, "total": len(recs), "types": shares(recs)}
            for name, recs in sorted(systems.items(), key=lambda kv: (-len(kv[1]), kv[0]))
        ]
        return {"total": total, "types": shares(records), "systems": per_system}
