from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

KNOWN_LABELS = ("text", "doc_title", "image", "footer", "other")
TEXT_LABELS = frozenset({"text", "doc_title", "footer"})

Label = Literal["text", "doc_title", "image", "footer", "other"]


class LayoutElement(BaseModel):
    """One detected region: label, confidence and pixel box [x_min, y_min, x_max, y_max]."""

    label: Label
    score: float = Field(..., ge=0.0, le=1.0)
    coordinate: tuple[float, float, float, float]
    clamped: bool = False

    @field_validator("label", mode="before")
    @classmethod
    def _unknown_label_is_other(cls, value):
        value = str(value).strip().lower()
        return value if value in KNOWN_LABELS else "other"

    @model_validator(mode="after")
    def _ordered_corners(self):
        x_min, y_min, x_max, y_max = self.coordinate
        if x_min >= x_max:
            raise ValueError(f"x_min {x_min} must be below x_max {x_max}")
        if y_min >= y_max:
            raise ValueError(f"y_min {y_min} must be below y_max {y_max}")
        return self

    @property
    def is_text(self):
        return self.label in TEXT_LABELS

    def clamp(self, width, height):
        """Clip to the image extent; None when nothing of the box remains."""
        x_min, y_min, x_max, y_max = self.coordinate
        cx = (max(0.0, x_min), max(0.0, y_min), min(float(width), x_max), min(float(height), y_max))
        if cx[0] >= cx[2] or cx[1] >= cx[3]:
            return None
        if cx == tuple(self.coordinate):
            return self
        return self.model_copy(update={"coordinate": cx, "clamped": True})

    def to_dict(self):
        return {
            "label": self.label,
            "score": self.score,
            "coordinate": list(self.coordinate),
            "clamped": self.clamped,
        }


class LayoutDocument(BaseModel):
    slide_index: int = Field(0, ge=0)
    elements: list[LayoutElement] = Field(default_factory=list)
    image_size: Optional[tuple[int, int]] = None
    warnings: list[str] = Field(default_factory=list)

    def to_dict(self):
        return {
            "slide_index": self.slide_index,
            "elements": [e.to_dict() for e in self.elements],
            "image_size": list(self.image_size) if self.image_size else None,
            "warnings": list(self.warnings),
        }
