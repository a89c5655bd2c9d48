from dataclasses import dataclass, field
from typing import Optional

ROUTE_STATIC = "Static"
ROUTE_WEB = "Web"
ROUTE_NATIVE = "Native"

MAX_LEVEL = {ROUTE_STATIC: 0, ROUTE_WEB: 2, ROUTE_NATIVE: 5}
GATES = ("T1", "T2", "T3", "T4", "T5")

WEB_NOT_EVALUABLE = "not evaluable: requires interactive inspection"


def level_label(level):
    return f"L{level}"


@dataclass(frozen=True)
class TriageRoute:
    route: str
    max_level: int
    source: str = ""
    note: Optional[str] = None

    def __post_init__(self):
        if self.route not in MAX_LEVEL:
            raise ValueError(f"unknown route {self.route!r}")
        if self.max_level != MAX_LEVEL[self.route]:
            raise ValueError(f"{self.route} caps at {level_label(MAX_LEVEL[self.route])}")

    @classmethod
    def for_route(cls, route, source="", note=None):
        return cls(route=route, max_level=MAX_LEVEL[route], source=source, note=note)

    @property
    def evaluable(self):
        return self.route != ROUTE_WEB

    def to_dict(self):
        return {
            "route": self.route,
            "max_level": level_label(self.max_level),
            "source": self.source,
            "note": self.note,
        }


# ── Package contents ──────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Relationship:
    rid: str
    rel_type: str
    target: str
    external: bool = False

    @property
    def kind(self):
        return self.rel_type.rsplit("/", 1)[-1]


@dataclass
class ShapeInfo:
    """One drawing element of a slide, layout or master shape tree."""

    kind: str
    name: str = ""
    depth: int = 0
    # Position of the enclosing grpSp in the part's shape list plus one; 0 at the top.
    parent_group: int = 0
    placeholder: bool = False
    text_box: bool = False
    geometry: Optional[str] = None
    fill: Optional[str] = None
    outline: bool = False
    x: Optional[int] = None
    y: Optional[int] = None
    cx: Optional[int] = None
    cy: Optional[int] = None
    paragraphs: tuple = ()
    run_count: int = 0
    media_rid: Optional[str] = None
    media_digest: Optional[str] = None
    chart_rid: Optional[str] = None
    svg: bool = False

    @property
    def has_geometry(self):
        return None not in (self.x, self.y, self.cx, self.cy)

    @property
    def area(self):
        return self.cx * self.cy if self.has_geometry else 0

    @property
    def has_text(self):
        return any(p.strip() for p in self.paragraphs)


@dataclass
class SlidePart:
    index: int
    path: str
    shapes: list = field(default_factory=list)
    relationships: dict = field(default_factory=dict)
    layout_path: Optional[str] = None
    transition: bool = False
    timing_nodes: int = 0
    background: bool = False
    parse_error: Optional[str] = None

    def top_level(self):
        return [s for s in self.shapes if s.depth == 0]


@dataclass
class LayoutPart:
    path: str
    master_path: Optional[str] = None
    shapes: list = field(default_factory=list)


@dataclass
class MasterPart:
    path: str
    shapes: list = field(default_factory=list)


@dataclass
class ChartPart:
    path: str
    slide_index: Optional[int] = None
    workbook_path: Optional[str] = None
    # embedded | missing | empty | external | absent
    workbook_status: str = "absent"

    def to_dict(self):
        return {
            "path": self.path,
            "slide": self.slide_index,
            "workbook": self.workbook_path,
            "workbook_status": self.workbook_status,
        }


@dataclass(frozen=True)
class MediaRef:
    slide_index: int
    rid: str
    kind: str
    target: str
    external: bool = False

    def to_dict(self):
        return {
            "slide": self.slide_index,
            "rid": self.rid,
            "kind": self.kind,
            "target": self.target,
            "external": self.external,
        }


@dataclass(frozen=True)
class PackageDefect:
    part: str
    message: str

    def to_dict(self):
        return {"part": self.part, "message": self.message}


@dataclass
class PresentationPackage:
    slide_width: int
    slide_height: int
    slides: list = field(default_factory=list)
    layouts: dict = field(default_factory=dict)
    masters: dict = field(default_factory=dict)
    charts: list = field(default_factory=list)
    media: list = field(default_factory=list)
    defects: list = field(default_factory=list)
    members: dict = field(default_factory=dict, repr=False)

    @property
    def slide_area(self):
        return self.slide_width * self.slide_height

    def read(self, name):
        return self.members.get(name)

    def layout_for(self, slide):
        return self.layouts.get(slide.layout_path) if slide.layout_path else None

    def master_for(self, slide):
        layout = self.layout_for(slide)
        if layout is None or layout.master_path is None:
            return None
        return self.masters.get(layout.master_path)

    def summary(self):
        return {
            "slides": len(self.slides),
            "layouts": len(self.layouts),
            "masters": len(self.masters),
            "charts": [c.to_dict() for c in self.charts],
            "media": [m.to_dict() for m in self.media],
            "defects": [d.to_dict() for d in self.defects],
        }


# ── Gate outcomes ─────────────────────────────────────────────────────────────

@dataclass
class GateResult:
    gate: str
    # None while the gate was never run (knockout or static route).
    passed: Optional[bool] = None
    evidence: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.gate not in GATES:
            raise ValueError(f"unknown gate {self.gate!r}")
        if self.passed is False and not self.evidence:
            raise ValueError(f"failed gate {self.gate} must carry evidence")

    @classmethod
    def unevaluated(cls, gate):
        return cls(gate=gate, passed=None)

    @property
    def status(self):
        if self.passed is None:
            return "unevaluated"
        return "pass" if self.passed else "fail"

    def to_dict(self):
        return {
            "gate": self.gate,
            "status": self.status,
            "evidence": [{"slide": s, "finding": f} for s, f in self.evidence],
            "stats": dict(self.stats),
        }

    @classmethod
    def from_dict(cls, data):
        passed = {"pass": True, "fail": False}.get(data["status"])
        return cls(
            gate=data["gate"],
            passed=passed,
            evidence=[(e["slide"], e["finding"]) for e in data.get("evidence", [])],
            stats=dict(data.get("stats", {})),
        )


@dataclass
class PeiReport:
    route: TriageRoute
    gates: list
    level: int
    defects: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.gates) != len(GATES):
            raise ValueError("a PEI report carries exactly five gate results")
        if self.level > self.route.max_level:
            raise ValueError(
                f"level {level_label(self.level)} exceeds the {self.route.route} cap "
                f"{level_label(self.route.max_level)}"
            )

    @property
    def level_label(self):
        return level_label(self.level)

    @property
    def evaluable(self):
        return self.route.evaluable

    def to_dict(self):
        return {
            "route": self.route.to_dict(),
            "level": self.level_label if self.evaluable else None,
            "note": self.route.note,
            "evaluable": self.evaluable,
            "gates": [g.to_dict() for g in self.gates],
            "defects": [d.to_dict() for d in self.defects],
        }

    @classmethod
    def from_dict(cls, data):
        route = data["route"]
        level = data.get("level")
        return cls(
            route=TriageRoute.for_route(route["route"], source=route.get("source", ""),
                                        note=route.get("note")),
            gates=[GateResult.from_dict(g) for g in data["gates"]],
            level=int(level[1:]) if level else 0,
            defects=[PackageDefect(**d) for d in data.get("defects", [])],
        )
