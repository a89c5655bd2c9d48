import logging
import math
from functools import lru_cache

import numpy as np

from models.Harmony import TEMPLATES, HarmonyFit
from utils.ColorMath import hsv_map
from utils.Exceptions import DomainError, InsufficientDataError

logger = logging.getLogger(__name__)

HUE_BINS = 360
# Distances closer than this are treated as ties.
TIE_DECIMALS = 12


@lru_cache(maxsize=8)
def _distance_table(resolution):
    """
    Per-bin sector distance for every template and rotation.

    Shape (templates, resolution, 360). Hue minus rotation is formed in
    integer units of 1/(360 * resolution) so that shifting hue and rotation
    together reproduces the same entries bit for bit.
    """
    units = HUE_BINS * resolution
    bins = np.arange(HUE_BINS, dtype=np.int64)
    rotations = np.arange(resolution, dtype=np.int64)
    offset = np.mod(bins[None, :] * resolution - rotations[:, None] * HUE_BINS, units) / units

    table = np.empty((len(TEMPLATES), resolution, HUE_BINS), dtype=np.float64)
    for t, template in enumerate(TEMPLATES):
        best = np.full(offset.shape, np.inf)
        for center, width in template.sectors:
            gap = np.abs(np.mod(offset - center + 0.5, 1.0) - 0.5)
            best = np.minimum(best, np.maximum(gap - width / 2.0, 0.0))
        table[t] = np.minimum(best, 0.5)
    table.setflags(write=False)
    return table


def _sector_distance(hues, template, alpha):
    best = np.full(np.shape(hues), np.inf)
    for center, width in template.sectors:
        gap = np.abs(np.mod(hues - alpha - center + 0.5, 1.0) - 0.5)
        best = np.minimum(best, np.maximum(gap - width / 2.0, 0.0))
    return np.minimum(best, 0.5)


class HarmonyService:

    def saturation_weighted_hue_histogram(img, sat_threshold=0.1):
        """Bin b sums the saturation of pixels with hue in [b, b+1) degrees and S >= sat_threshold."""
        hsv = hsv_map(img.pixels).reshape(-1, 3)
        sat = hsv[:, 1]
        keep = sat >= sat_threshold
        if sat_threshold == 0:
            keep &= sat > 0
        bins = np.floor(hsv[keep, 0] + 1e-9).astype(np.int64) % HUE_BINS
        return np.bincount(bins, weights=sat[keep], minlength=HUE_BINS).astype(np.float64)

    def template_distance(hist, template, alpha):
        """Saturation-weighted mean distance of the histogram to the rotated template."""
        hist = np.asarray(hist, dtype=np.float64)
        total = hist.sum()
        if total <= 0:
            raise InsufficientDataError("achromatic histogram: no weight to measure")
        hues = np.arange(hist.size, dtype=np.float64) / hist.size
        return float(_sector_distance(hues, template, alpha) @ hist / total)

    def fit_histogram(hist, config):
        """Exhaustive search over every template and rotation for a 360-bin histogram."""
        hist = np.asarray(hist, dtype=np.float64)
        if hist.shape != (HUE_BINS,):
            raise DomainError(f"hue histogram must have {HUE_BINS} bins")
        total = hist.sum()
        if total <= 0:
            return HarmonyFit(template=TEMPLATES[0].name, alpha=0.0, mean_distance=0.0,
                              slide_score=1.0, achromatic=True)

        table = _distance_table(config.angular_resolution)
        distances = table @ hist / total
        flat = np.round(distances, TIE_DECIMALS).ravel()
        # argmin keeps the first minimum: table order, then smaller alpha
        index = int(np.argmin(flat))
        t, r = divmod(index, config.angular_resolution)
        mean_distance = float(min(max(distances[t, r], 0.0), 0.5))
        return HarmonyFit(
            template=TEMPLATES[t].name,
            alpha=r / config.angular_resolution,
            mean_distance=mean_distance,
            slide_score=HarmonyService.slide_harmony_score(mean_distance, config.sigma),
        )

    def best_fit(img, config):
        hist = HarmonyService.saturation_weighted_hue_histogram(img, config.sat_threshold)
        fit = HarmonyService.fit_histogram(hist, config)
        if fit.achromatic:
            logger.debug("slide %s is achromatic, harmony distance set to 0", img.name)
        return fit

    def slide_harmony_score(mean_distance, sigma):
        if mean_distance < 0:
            raise DomainError(f"mean distance must be non-negative, got {mean_distance}")
        if sigma <= 0:
            raise DomainError(f"sigma must be positive, got {sigma}")
        return math.exp(-(mean_distance ** 2) / (2.0 * sigma ** 2))

    def deck_harmony_score(slide_scores, w1=5.0, w2=30.0):
        """w1 * mean - w2 * population std of the slide scores."""
        scores = np.asarray(list(slide_scores), dtype=np.float64)
        if scores.size == 0:
            raise InsufficientDataError("deck harmony needs at least one slide score")
        return float(w1 * scores.mean() - w2 * scores.std())
