import math

import numpy as np

from utils.Exceptions import DomainError, InsufficientDataError


class EngagementService:

    def colorfulness(img):
        """
        Opponent-channel colourfulness on raw 8-bit values.

        rg = R - G, yb = (R + G) / 2 - B, population statistics over all pixels:
        M = sqrt(std_rg^2 + std_yb^2) + 0.3 * sqrt(mean_rg^2 + mean_yb^2)
        """
        rgb = img.pixels.reshape(-1, 3).astype(np.float64)
        R, G, B = rgb[:, 0], rgb[:, 1], rgb[:, 2]
        rg = R - G
        yb = 0.5 * (R + G) - B
        std_root = math.sqrt(rg.var() + yb.var())
        mean_root = math.sqrt(rg.mean() ** 2 + yb.mean() ** 2)
        return std_root + 0.3 * mean_root

    def pacing_score(per_slide_m, pacing_target, pacing_width):
        """Gaussian of the population std of slide colourfulness around the target."""
        values = np.asarray(list(per_slide_m), dtype=np.float64)
        if values.size == 0:
            raise InsufficientDataError("pacing needs at least one slide")
        if pacing_width <= 0:
            raise DomainError(f"pacing width must be positive, got {pacing_width}")
        sigma_pacing = values.std()
        return math.exp(-((sigma_pacing - pacing_target) ** 2) / (2.0 * pacing_width ** 2))

    def engagement_component(per_slide_m, config, profile):
        """
        a * (mean M * mean_scale) + b * pacing_scale * pacing

        With the standard profile this is a * mean M / 10 + b * 10 * pacing.
        """
        values = np.asarray(list(per_slide_m), dtype=np.float64)
        if values.size == 0:
            raise InsufficientDataError("engagement needs at least one slide")
        pacing = EngagementService.pacing_score(values, config.pacing_target, config.pacing_width)
        return (config.blend_mean * values.mean() * profile.engagement_mean_scale
                + config.blend_pacing * profile.engagement_pacing_scale * pacing)
