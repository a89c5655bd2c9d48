"""
Deck report types.

A DeckReport is what ``eval`` emits: per-slide measurements, the four deck
components after the reporting profile, the Aesthetics total and an echo of
every parameter used. Components serialize at two decimals; the unrounded
values live in ``raw``.
"""

from dataclasses import dataclass, field
from typing import Optional

from models.Pei import PeiReport

COMPONENTS = ("usability", "engagement", "harmony", "rhythm")
COMPONENT_DECIMALS = 2

SECTION_OK = "ok"
SECTION_FAILED = "failed"
SECTION_UNAVAILABLE = "unavailable"
SECTION_SKIPPED = "skipped"


def round_component(value):
    return None if value is None else round(float(value), COMPONENT_DECIMALS)


def aesthetics_total(components):
    """Sum of the serialized components. Missing components add nothing; all missing gives None."""
    present = [round_component(components.get(name)) for name in COMPONENTS]
    present = [v for v in present if v is not None]
    if not present:
        return None
    return round(sum(present), COMPONENT_DECIMALS)


@dataclass
class SlideRecord:
    index: int
    name: str
    harmony: Optional[dict] = None
    colorfulness: Optional[float] = None
    usability: Optional[float] = None
    text_regions: int = 0
    layout: Optional[str] = None
    entropy: Optional[float] = None
    entropy_score: Optional[float] = None
    blank: bool = False
    errors: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "index": self.index,
            "name": self.name,
            "harmony": dict(self.harmony) if self.harmony is not None else None,
            "colorfulness": self.colorfulness,
            "usability": self.usability,
            "text_regions": self.text_regions,
            "layout": self.layout,
            "entropy": self.entropy,
            "entropy_score": self.entropy_score,
            "blank": self.blank,
            "errors": dict(self.errors),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            index=int(data["index"]),
            name=data.get("name", ""),
            harmony=data.get("harmony"),
            colorfulness=data.get("colorfulness"),
            usability=data.get("usability"),
            text_regions=int(data.get("text_regions", 0)),
            layout=data.get("layout"),
            entropy=data.get("entropy"),
            entropy_score=data.get("entropy_score"),
            blank=bool(data.get("blank", False)),
            errors=dict(data.get("errors") or {}),
        )


@dataclass
class DeckReport:
    topic: str
    system: str
    slides: list
    components: dict
    raw: dict
    sections: dict
    profile: dict
    config: dict
    version: str
    purpose: Optional[str] = None
    pei: Optional[PeiReport] = None
    aesthetics: Optional[float] = None

    def __post_init__(self):
        self.components = {name: round_component(self.components.get(name)) for name in COMPONENTS}
        expected = aesthetics_total(self.components)
        if self.aesthetics is None:
            self.aesthetics = expected
        elif expected is None or abs(self.aesthetics - expected) > 1e-9:
            raise ValueError(
                f"aesthetics {self.aesthetics} does not equal the component sum {expected}"
            )

    @property
    def failed_sections(self):
        return sorted(k for k, v in self.sections.items() if v.get("status") == SECTION_FAILED)

    def component(self, name):
        return self.components.get(name)

    def to_dict(self):
        return {
            "topic": self.topic,
            "system": self.system,
            "purpose": self.purpose,
            "slides": [s.to_dict() for s in self.slides],
            "components": dict(self.components),
            "aesthetics": self.aesthetics,
            "raw": self.raw,
            "sections": self.sections,
            "pei": self.pei.to_dict() if self.pei is not None else None,
            "profile": self.profile,
            "config": self.config,
            "version": self.version,
        }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(
                topic=data.get("topic", ""),
                system=data.get("system", ""),
                purpose=data.get("purpose"),
                slides=[SlideRecord.from_dict(s) for s in data.get("slides", [])],
                components=dict(data["components"]),
                aesthetics=data.get("aesthetics"),
                raw=data.get("raw") or {},
                sections=data.get("sections") or {},
                pei=PeiReport.from_dict(data["pei"]) if data.get("pei") else None,
                profile=data.get("profile") or {},
                config=data.get("config") or {},
                version=data.get("version", ""),
            )
        except (KeyError, TypeError) as e:
            raise ValueError(f"not a deck report: {e}") from e
