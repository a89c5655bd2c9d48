import logging
import math

import numpy as np

from models.Metrics import ContrastResult, SlideUsability
from services.layout_service import Layout_Service
from utils.ColorMath import relative_luminance_map
from utils.Exceptions import DomainError, RegionOutsideImageError

logger = logging.getLogger(__name__)

MAX_CONTRAST = 21.0
_LOG_MAX = math.log(MAX_CONTRAST)


class UsabilityService:

    def _clip_box(img, box):
        """Pixel index window [x0, x1) x [y0, y1) of the box clipped to the image."""
        x_min, y_min, x_max, y_max = box
        x0 = max(0, int(math.floor(x_min)))
        y0 = max(0, int(math.floor(y_min)))
        x1 = min(img.width, int(math.ceil(x_max)))
        y1 = min(img.height, int(math.ceil(y_max)))
        if x0 >= x1 or y0 >= y1:
            raise RegionOutsideImageError(
                f"box {list(box)} does not intersect the {img.width}x{img.height} image"
            )
        return x0, y0, x1, y1

    def region_contrast(img, box, percentile_mode=False, upper=95.0, lower=5.0, luminance=None):
        """
        (L_max + 0.05) / (L_min + 0.05) over the pixels of the clipped box.

        Endpoint mode takes the true extremes; percentile mode takes the
        configured upper and lower percentiles. A precomputed luminance map can
        be passed to avoid recomputing it per region.
        """
        x0, y0, x1, y1 = UsabilityService._clip_box(img, box)
        if luminance is None:
            region = relative_luminance_map(img.pixels[y0:y1, x0:x1])
        else:
            region = luminance[y0:y1, x0:x1]
        values = region.ravel()
        if percentile_mode:
            l_max = float(np.percentile(values, upper))
            l_min = float(np.percentile(values, lower))
            mode = "percentile"
        else:
            l_max = float(values.max())
            l_min = float(values.min())
            mode = "endpoint"
        ratio = min(max((l_max + 0.05) / (l_min + 0.05), 1.0), MAX_CONTRAST)
        return ContrastResult(
            box=(x0, y0, x1, y1),
            l_max=l_max,
            l_min=l_min,
            ratio=ratio,
            score=UsabilityService.contrast_score(ratio),
            mode=mode,
        )

    def contrast_score(c):
        """ln(c) / ln(21), so 21:1 maps to 1.0 and 1:1 to 0.0."""
        if c < 1:
            raise DomainError(f"contrast ratio must be at least 1, got {c}")
        if c >= MAX_CONTRAST:
            return 1.0
        return min(max(math.log(c) / _LOG_MAX, 0.0), 1.0)

    def slide_usability(img, layout, config):
        boxes = Layout_Service.text_regions(layout, config.min_confidence)
        if not boxes:
            return SlideUsability(score=None)
        luminance = relative_luminance_map(img.pixels)
        results = []
        for box in boxes:
            try:
                results.append(UsabilityService.region_contrast(
                    img, box,
                    percentile_mode=config.percentile_mode,
                    upper=config.upper_percentile,
                    lower=config.lower_percentile,
                    luminance=luminance,
                ))
            except RegionOutsideImageError as e:
                logger.warning("slide %s: %s", img.name, e)
        if not results:
            return SlideUsability(score=None)
        score = float(np.mean([r.score for r in results]))
        return SlideUsability(score=score, regions=tuple(results))

    def deck_usability(slide_results, scale=10.0):
        """scale * mean over slides with an available score; None when none is available."""
        available = [r.score for r in slide_results if r is not None and r.score is not None]
        if not available:
            return None
        return float(scale * np.mean(available))
