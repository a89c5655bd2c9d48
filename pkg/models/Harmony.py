from dataclasses import dataclass


@dataclass(frozen=True)
class HueTemplate:
    """Hue-wheel template: sectors as (center, width) fractions of the wheel."""

    name: str
    sectors: tuple

    def __post_init__(self):
        if not 1 <= len(self.sectors) <= 2:
            raise ValueError(f"template {self.name} must have one or two sectors")
        for center, width in self.sectors:
            if width <= 0:
                raise ValueError(f"template {self.name} has a non-positive sector width")

    def to_dict(self):
        return {"name": self.name, "sectors": [list(s) for s in self.sectors]}


# Table order doubles as the tie-break order.
TEMPLATES = (
    HueTemplate("i", ((0.0, 0.05),)),
    HueTemplate("V", ((0.0, 0.26),)),
    HueTemplate("L", ((0.0, 0.05), (0.25, 0.22))),
    HueTemplate("I", ((0.0, 0.05), (0.50, 0.05))),
    HueTemplate("T", ((0.25, 0.50),)),
    HueTemplate("Y", ((0.0, 0.26), (0.50, 0.05))),
    HueTemplate("X", ((0.0, 0.26), (0.50, 0.26))),
)

TEMPLATES_BY_NAME = {t.name: t for t in TEMPLATES}


@dataclass(frozen=True)
class HarmonyFit:
    template: str
    alpha: float
    mean_distance: float
    slide_score: float
    achromatic: bool = False

    def to_dict(self):
        return {
            "template": self.template,
            "alpha": self.alpha,
            "mean_distance": self.mean_distance,
            "slide_score": self.slide_score,
            "achromatic": self.achromatic,
        }
