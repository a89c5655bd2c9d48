"""
Evaluation parameters.

Every tunable constant used by the metrics, the PEI gates and the report
assembly lives here with its default. Instances are immutable; build a new
one with ``model_copy(update=...)`` to change a value.
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    def to_dict(self):
        return self.model_dump(mode="json")


class HarmonyConfig(_Frozen):
    sigma: float = Field(0.01, gt=0)
    angular_resolution: int = Field(360, ge=1)
    sat_threshold: float = Field(0.1, ge=0, lt=1)
    deck_mean_weight: float = 5.0
    deck_std_weight: float = 30.0


class EngagementConfig(_Frozen):
    pacing_target: float = Field(11.28, ge=0)
    pacing_width: float = Field(8.54, gt=0)
    blend_mean: float = Field(0.5, ge=0)
    blend_pacing: float = Field(0.5, ge=0)

    @model_validator(mode="after")
    def _blend_sums_to_one(self):
        if abs(self.blend_mean + self.blend_pacing - 1.0) > 1e-9:
            raise ValueError("blend_mean + blend_pacing must equal 1")
        return self


class UsabilityConfig(_Frozen):
    min_confidence: float = Field(0.5, ge=0, le=1)
    percentile_mode: bool = False
    upper_percentile: float = Field(95.0, gt=0, le=100)
    lower_percentile: float = Field(5.0, ge=0, lt=100)

    @model_validator(mode="after")
    def _ordered_percentiles(self):
        if self.lower_percentile >= self.upper_percentile:
            raise ValueError("lower_percentile must be below upper_percentile")
        return self


class PyramidConfig(_Frozen):
    levels: int = Field(3, ge=1)
    orientations: int = Field(4, ge=1)
    include_residual: bool = False


class EntropyConfig(_Frozen):
    w_l: float = Field(0.84, ge=0)
    w_ab: float = Field(0.08, ge=0)
    zero_threshold: float = Field(0.008, ge=0)
    mu_opt: float = 3.878
    sigma_opt: float = Field(0.730, gt=0)
    # Longest side in pixels before decomposition; None keeps native size.
    max_side: Optional[int] = Field(None, ge=8)


class HrvConfig(_Frozen):
    mode: Literal["banded", "linear"] = "banded"
    lambda1: float = 0.5
    lambda2: float = 0.5
    target: float = 0.03
    half_width: float = Field(0.2, gt=0)
    window: int = Field(3, ge=1)
    overload_threshold: float = 0.75
    penalty: float = Field(10.0, ge=0)


class PeiThresholds(_Frozen):
    raster_coverage: float = Field(0.95, gt=0, le=1)
    raster_slide_share: float = Field(0.5, gt=0, le=1)
    fragment_min_boxes: int = Field(4, ge=2)
    fragment_left_tolerance: float = Field(0.01, ge=0)
    fragment_gap_ratio: float = Field(1.5, gt=0)
    background_coverage: float = Field(0.95, gt=0, le=1)
    duplicate_position_tolerance: float = Field(0.005, ge=0)
    duplicate_slide_share: float = Field(0.8, gt=0, le=1)
    group_shape_limit: int = Field(15, ge=1)
    verify_workbook_opens: bool = True


class ReportingProfile(_Frozen):
    name: str = "standard"
    version: int = 1
    usability_scale: float = 10.0
    rhythm_divisor: float = Field(10.0, gt=0)
    engagement_mean_scale: float = 0.1
    engagement_pacing_scale: float = 10.0


BUILTIN_PROFILES = {
    "standard": ReportingProfile(),
    "unit": ReportingProfile(
        name="unit",
        usability_scale=1.0,
        rhythm_divisor=1.0,
        engagement_mean_scale=1.0,
        engagement_pacing_scale=1.0,
    ),
}


class LlmSettings(_Frozen):
    api_url: str = "https://api.openai.com/v1/chat/completions"
    api_key: Optional[str] = Field(None, repr=False)
    model: str = "gpt-4o"
    timeout: float = Field(60.0, gt=0)
    max_retries: int = Field(3, ge=0)
    backoff: float = Field(2.0, ge=0)
    max_parallel: int = Field(1, ge=1)
    temperature: float = Field(0.0, ge=0)

    def to_dict(self):
        return self.model_dump(mode="json", exclude={"api_key"})


class EvaluationConfig(_Frozen):
    harmony: HarmonyConfig = HarmonyConfig()
    engagement: EngagementConfig = EngagementConfig()
    usability: UsabilityConfig = UsabilityConfig()
    pyramid: PyramidConfig = PyramidConfig()
    entropy: EntropyConfig = EntropyConfig()
    hrv: HrvConfig = HrvConfig()
    pei: PeiThresholds = PeiThresholds()
    profile: ReportingProfile = ReportingProfile()
    llm: LlmSettings = LlmSettings()
    workers: int = Field(4, ge=1)

    def to_dict(self):
        """Parameter echo for reports. Credentials and threading are left out."""
        data = self.model_dump(mode="json", exclude={"llm", "workers"})
        return data
