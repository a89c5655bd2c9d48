import math

import pytest

from factories import checkerboard, random_image, solid
from models.Settings import BUILTIN_PROFILES, EngagementConfig
from models.Slide import SlideImage
from services.Aesthetics.engagement_service import EngagementService
from utils.Exceptions import DomainError, InsufficientDataError


def brute_colorfulness(img):
    """Loop-based reference on the raw 8-bit values."""
    rg, yb = [], []
    for row in img.pixels.tolist():
        for r, g, b in row:
            rg.append(r - g)
            yb.append((r + g) / 2.0 - b)
    n = len(rg)
    mean_rg = sum(rg) / n
    mean_yb = sum(yb) / n
    var_rg = sum((v - mean_rg) ** 2 for v in rg) / n
    var_yb = sum((v - mean_yb) ** 2 for v in yb) / n
    return math.sqrt(var_rg + var_yb) + 0.3 * math.sqrt(mean_rg ** 2 + mean_yb ** 2)


class TestColorfulness:

    def test_gray_is_zero(self):
        """Any gray slide has no colourfulness"""
        assert EngagementService.colorfulness(solid((77, 77, 77))) == 0.0

    def test_solid_red(self):
        """0.3 * sqrt(255^2 + 127.5^2) on a constant red image"""
        assert EngagementService.colorfulness(solid((255, 0, 0))) == pytest.approx(85.53, abs=0.01)

    def test_red_green_checkerboard(self):
        """sigma_rg = 255 plus 0.3 * 127.5"""
        img = checkerboard((255, 0, 0), (0, 255, 0))
        assert EngagementService.colorfulness(img) == pytest.approx(293.25, abs=1e-9)

    def test_matches_loop_reference(self):
        """Vectorised statistics agree with a plain loop on small images"""
        for seed in range(20):
            img = random_image(seed, width=4, height=4)
            assert EngagementService.colorfulness(img) == pytest.approx(brute_colorfulness(img), rel=1e-9)

    def test_red_green_swap(self):
        """Swapping the R and G channels only flips the sign of rg"""
        for seed in range(10):
            img = random_image(seed, width=6, height=5)
            swapped = SlideImage(img.pixels[..., [1, 0, 2]])
            assert EngagementService.colorfulness(swapped) == pytest.approx(
                EngagementService.colorfulness(img), rel=1e-12)

    def test_flips(self):
        """Mirroring the image does not change its statistics"""
        for seed in range(10):
            img = random_image(seed, width=6, height=5)
            expected = EngagementService.colorfulness(img)
            for flipped in (img.pixels[::-1], img.pixels[:, ::-1], img.pixels[::-1, ::-1]):
                assert EngagementService.colorfulness(SlideImage(flipped)) == pytest.approx(expected, rel=1e-12)


class TestPacing:

    def test_constant_at_zero_target(self):
        """Constant colourfulness hits a zero target exactly"""
        assert EngagementService.pacing_score([40.0, 40.0, 40.0], 0.0, 8.54) == 1.0

    def test_one_width_off_target(self):
        """sigma = target + width gives exp(-1/2)"""
        # population std of [0, 2] is 1
        assert EngagementService.pacing_score([0.0, 2.0], 0.0, 1.0) == pytest.approx(math.exp(-0.5))

    def test_single_slide(self):
        """A single slide has zero spread"""
        expected = math.exp(-(11.28 ** 2) / (2 * 8.54 ** 2))
        assert EngagementService.pacing_score([12.0], 11.28, 8.54) == pytest.approx(expected)

    def test_errors(self):
        """Empty decks and non-positive widths are rejected"""
        with pytest.raises(InsufficientDataError):
            EngagementService.pacing_score([], 11.28, 8.54)
        with pytest.raises(DomainError):
            EngagementService.pacing_score([1.0], 11.28, 0.0)


class TestEngagementComponent:

    def test_gray_deck(self):
        """Mean term vanishes, pacing term is scaled by 10"""
        value = EngagementService.engagement_component([0.0, 0.0], EngagementConfig(), BUILTIN_PROFILES["standard"])
        assert value == pytest.approx(0.5 * 10 * math.exp(-(11.28 ** 2) / (2 * 8.54 ** 2)))

    def test_mean_only(self):
        """a = 1, b = 0 gives mean M / 10"""
        config = EngagementConfig(blend_mean=1.0, blend_pacing=0.0)
        value = EngagementService.engagement_component([51.09], config, BUILTIN_PROFILES["standard"])
        assert value == pytest.approx(5.109)

    def test_peak_pacing(self):
        """a = 0, b = 1 with sigma on target gives 10"""
        config = EngagementConfig(blend_mean=0.0, blend_pacing=1.0, pacing_target=1.0)
        value = EngagementService.engagement_component([0.0, 2.0], config, BUILTIN_PROFILES["standard"])
        assert value == pytest.approx(10.0)

    def test_blend_must_sum_to_one(self):
        """Blend weights are validated at construction"""
        with pytest.raises(ValueError):
            EngagementConfig(blend_mean=0.7, blend_pacing=0.7)


if __name__ == "__main__":
    pytest.main([__file__])
