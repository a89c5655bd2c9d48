from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator
from scipy.stats import rankdata


class RankingRecord(BaseModel):
    """Ranks of the systems for one topic; 1 is best, ties carry the average rank."""

    topic: str
    ranks: dict[str, float]

    @field_validator("ranks")
    @classmethod
    def _valid_ranks(cls, ranks):
        if len(ranks) < 2:
            raise ValueError("a ranking needs at least two systems")
        n = len(ranks)
        if any(r < 1 or r > n for r in ranks.values()):
            raise ValueError(f"ranks must lie in 1..{n}")
        if abs(sum(ranks.values()) - n * (n + 1) / 2.0) > 1e-9:
            raise ValueError("ranks must be a permutation or tie-averaged ranks of 1..n")
        return ranks

    @classmethod
    def from_order(cls, topic, groups):
        """Build from preference groups, best first: [["A"], ["B", "C"], ["D"]]."""
        ranks, position = {}, 1
        for group in groups:
            members = [group] if isinstance(group, str) else list(group)
            shared = position + (len(members) - 1) / 2.0
            for name in members:
                if name in ranks:
                    raise ValueError(f"system {name!r} listed twice for topic {topic!r}")
                ranks[name] = shared
            position += len(members)
        return cls(topic=topic, ranks=ranks)

    @classmethod
    def from_scores(cls, topic, scores):
        """Higher score ranks first; tied scores share the average rank."""
        names = list(scores)
        values = np.asarray([float(scores[n]) for n in names])
        ranks = rankdata(-values, method="average")
        return cls(topic=topic, ranks={n: float(r) for n, r in zip(names, ranks)})

    def vector(self, systems):
        return [self.ranks[s] for s in systems]

    def to_dict(self):
        return {"topic": self.topic, "ranks": dict(self.ranks)}


class RankingFile(BaseModel):
    """Structured ranking file: ``rankings: [{topic, order: [[A], [B, C], [D]]}]``."""

    class Entry(BaseModel):
        topic: str
        order: list[list[str] | str] = Field(..., min_length=1)

    rankings: list[Entry]


@dataclass
class AlignmentReport:
    avg_rho: float
    std_rho: float
    identical_pct: float
    topics_used: int
    topics_compared: int = 0
    per_topic: dict = field(default_factory=dict)
    undefined_topics: list = field(default_factory=list)
    identical_topics: list = field(default_factory=list)
    skipped_topics: list = field(default_factory=list)

    def to_dict(self):
        return {
            "avg_spearman": self.avg_rho,
            "std_spearman": self.std_rho,
            "identical_pct": self.identical_pct,
            "topics_used": self.topics_used,
            "topics_compared": self.topics_compared,
            "undefined_topics": list(self.undefined_topics),
            "identical_topics": list(self.identical_topics),
            "skipped_topics": list(self.skipped_topics),
            "per_topic": dict(self.per_topic),
        }


@dataclass
class AblationRow:
    name: str
    components: tuple
    report: Optional[AlignmentReport] = None
    error: Optional[str] = None

    def to_dict(self):
        return {
            "name": self.name,
            "components": list(self.components),
            "report": self.report.to_dict() if self.report else None,
            "error": self.error,
        }


@dataclass(frozen=True)
class QuadrantPlacement:
    system: str
    aesthetics: float
    pei_level: Optional[float]
    quadrant: Optional[str]

    def to_dict(self):
        return {
            "system": self.system,
            "aesthetics": self.aesthetics,
            "pei_level": self.pei_level,
            "quadrant": self.quadrant,
        }
