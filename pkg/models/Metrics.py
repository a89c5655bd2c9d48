from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class ContrastResult:
    box: tuple
    l_max: float
    l_min: float
    ratio: float
    score: float
    mode: str = "endpoint"

    def to_dict(self):
        return {
            "box": list(self.box),
            "l_max": self.l_max,
            "l_min": self.l_min,
            "ratio": self.ratio,
            "score": self.score,
            "mode": self.mode,
        }


@dataclass(frozen=True)
class SlideUsability:
    """Mean contrast score over the slide's text regions, or unavailable."""

    score: Optional[float]
    regions: tuple = ()

    @property
    def available(self):
        return self.score is not None

    def to_dict(self):
        return {
            "score": self.score,
            "available": self.available,
            "regions": [r.to_dict() for r in self.regions],
        }


@dataclass(frozen=True)
class EntropyResult:
    entropy: float
    channel_entropies: dict = field(default_factory=dict)
    dropped_channels: tuple = ()
    blank: bool = False

    def to_dict(self):
        return {
            "entropy": self.entropy,
            "channel_entropies": dict(self.channel_entropies),
            "dropped_channels": list(self.dropped_channels),
            "blank": self.blank,
        }


@dataclass(frozen=True)
class HrvResult:
    mode: str
    score: float
    rmssd: float
    mean_score: float
    overload_events: int
    band: str
    degenerate: bool = False

    def to_dict(self):
        return {
            "mode": self.mode,
            "score": self.score,
            "rmssd": self.rmssd,
            "mean_score": self.mean_score,
            "overload_events": self.overload_events,
            "band": self.band,
            "degenerate": self.degenerate,
        }
