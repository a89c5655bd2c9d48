import logging
import math

import numpy as np
from PIL import Image

from models.Metrics import EntropyResult, HrvResult
from models.Slide import SlideImage
from utils.ColorMath import lab_normalized_map
from utils.Exceptions import DomainError, InsufficientDataError
from utils.SteerablePyramid import SteerablePyramid

logger = logging.getLogger(__name__)

CHANNELS = ("L", "a", "b")

# VisualHRV bands by RMSSD; Healthy is inclusive on both ends.
BAND_FLATLINE = "Flatline"
BAND_HEALTHY = "Healthy"
BAND_TRANSITIONAL = "Transitional"
BAND_STROBE = "Strobe Light"


def _resize_for_entropy(img, max_side):
    if not max_side or max(img.width, img.height) <= max_side:
        return img
    scale = max_side / float(max(img.width, img.height))
    size = (max(1, round(img.width * scale)), max(1, round(img.height * scale)))
    resized = Image.fromarray(img.pixels).resize(size, Image.Resampling.LANCZOS)
    return SlideImage(np.asarray(resized, dtype=np.uint8), name=img.name)


class RhythmService:

    def steerable_pyramid(channel, pyr_config):
        """Oriented bandpass subbands as a flat list, lowpass residual excluded."""
        pyramid = SteerablePyramid(pyr_config.levels, pyr_config.orientations)
        return pyramid.decompose(channel).oriented()

    def subband_shannon_entropy(subband):
        """Shannon entropy in bits over ceil(sqrt(n)) equal-width bins spanning [min, max]."""
        values = np.asarray(subband, dtype=np.float64).ravel()
        if values.size == 0:
            raise DomainError("subband must not be empty")
        lo, hi = float(values.min()), float(values.max())
        if not hi - lo > 1e-12 * max(1.0, abs(lo), abs(hi)):
            return 0.0
        bins = int(math.ceil(math.sqrt(values.size)))
        counts, _ = np.histogram(values, bins=bins, range=(lo, hi))
        p = counts[counts > 0] / float(values.size)
        return float(-np.sum(p * np.log2(p)))

    def subband_entropy(img, pyr_config, ent_config):
        """
        Weighted mean subband entropy over the normalised Lab channels.

        Channels whose variance falls below the zero threshold are dropped
        together with their weight. A slide with every channel dropped is blank.
        """
        img = _resize_for_entropy(img, ent_config.max_side)
        lab = lab_normalized_map(img.pixels)
        pyramid = SteerablePyramid(pyr_config.levels, pyr_config.orientations)
        pyramid.check_size(img.height, img.width)
        weights = {"L": ent_config.w_l, "a": ent_config.w_ab, "b": ent_config.w_ab}

        entropies, dropped = {}, []
        for idx, name in enumerate(CHANNELS):
            channel = lab[..., idx]
            if channel.var() < ent_config.zero_threshold:
                dropped.append(name)
                continue
            decomposition = pyramid.decompose(channel)
            subbands = decomposition.oriented()
            if pyr_config.include_residual:
                subbands = subbands + [decomposition.lowpass]
            entropies[name] = float(np.mean([RhythmService.subband_shannon_entropy(s) for s in subbands]))

        norm = sum(weights[name] for name in entropies)
        if not entropies or norm <= 0:
            logger.debug("slide %s is blank for subband entropy", img.name)
            return EntropyResult(entropy=0.0, channel_entropies=entropies,
                                 dropped_channels=tuple(dropped), blank=True)
        value = sum(weights[name] * h for name, h in entropies.items()) / norm
        return EntropyResult(entropy=float(value), channel_entropies=entropies,
                             dropped_channels=tuple(dropped), blank=False)

    def entropy_to_score(entropy, ent_config):
        if entropy < 0:
            raise DomainError(f"entropy must be non-negative, got {entropy}")
        return math.exp(-((entropy - ent_config.mu_opt) ** 2) / (2.0 * ent_config.sigma_opt ** 2))

    def rmssd(scores):
        """sqrt(sum of squared successive differences / (N - 1)); 0 for a single slide."""
        scores = [float(s) for s in scores]
        if not scores:
            raise InsufficientDataError("RMSSD needs at least one score")
        if len(scores) == 1:
            return 0.0
        total = 0.0
        for i in range(len(scores) - 1):
            d = scores[i + 1] - scores[i]
            total += d * d
        return math.sqrt(total / (len(scores) - 1))

    def overload_events(scores, window, threshold):
        """Number of window starts whose window mean exceeds the threshold."""
        if window < 1:
            raise DomainError(f"window must be at least 1, got {window}")
        scores = [float(s) for s in scores]
        count = 0
        for start in range(len(scores) - window + 1):
            if sum(scores[start:start + window]) / window > threshold:
                count += 1
        return count

    def band_label(rmssd):
        if rmssd < 0.01:
            return BAND_FLATLINE
        if rmssd <= 0.1:
            return BAND_HEALTHY
        if rmssd > 0.30:
            return BAND_STROBE
        return BAND_TRANSITIONAL

    def visual_hrv_score(scores, hrv_config):
        scores = [float(s) for s in scores]
        if not scores:
            raise InsufficientDataError("VisualHRV needs at least one slide")
        rmssd = RhythmService.rmssd(scores)
        mean_score = sum(scores) / len(scores)
        overloads = RhythmService.overload_events(scores, hrv_config.window, hrv_config.overload_threshold)
        if hrv_config.mode == "linear":
            score = hrv_config.lambda1 * mean_score + hrv_config.lambda2 * rmssd
        else:
            score = (100.0 * (1.0 - abs(rmssd - hrv_config.target) / hrv_config.half_width)
                     - hrv_config.penalty * overloads)
        if len(scores) == 1:
            logger.debug("single-slide deck: RMSSD defined as 0")
        return HrvResult(
            mode=hrv_config.mode,
            score=float(score),
            rmssd=rmssd,
            mean_score=mean_score,
            overload_events=overloads,
            band=RhythmService.band_label(rmssd),
            degenerate=len(scores) == 1,
        )
