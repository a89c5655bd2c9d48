"""
Presentation package reader
===========================
Opens a .pptx/.potx container at the zip/XML level and builds the
relationship graph the PEI gates inspect: slides in presentation order,
their layouts and masters, chart parts with their embedded-workbook links,
and every media reference.

Only the container itself and the presentation main part are mandatory.
Anything wrong below that (malformed slide XML, dangling relationships,
a layout without a master) is recorded as a PackageDefect and parsing
carries on.
"""

import hashlib
import io
import logging
import posixpath
import re
import zipfile
import zlib

from lxml import etree

from models.Pei import (
    ChartPart,
    LayoutPart,
    MasterPart,
    MediaRef,
    PackageDefect,
    PresentationPackage,
    Relationship,
    ShapeInfo,
    SlidePart,
)
from utils.Exceptions import CorruptPackageError

logger = logging.getLogger(__name__)

# ── XML namespaces ────────────────────────────────────────────────────────────

NS = {
    "a":    "http://schemas.openxmlformats.org/drawingml/2006/main",
    "p":    "http://schemas.openxmlformats.org/presentationml/2006/main",
    "r":    "http://schemas.openxmlformats.org/officeDocument/2006/relationships",
    "rel":  "http://schemas.openxmlformats.org/package/2006/relationships",
    "ct":   "http://schemas.openxmlformats.org/package/2006/content-types",
    "c":    "http://schemas.openxmlformats.org/drawingml/2006/chart",
    "mc":   "http://schemas.openxmlformats.org/markup-compatibility/2006",
    "asvg": "http://schemas.microsoft.com/office/drawing/2016/SVG/main",
}

REL_BASE = "http://schemas.openxmlformats.org/officeDocument/2006/relationships"
OFFICE_DOCUMENT_REL = f"{REL_BASE}/officeDocument"
DEFAULT_MAIN_PART = "ppt/presentation.xml"

MEDIA_KINDS = {"image", "video", "audio", "media", "hdphoto"}
WORKBOOK_KINDS = {"package", "oleObject"}

# Default slide size (10in x 7.5in) when sldSz is absent.
DEFAULT_SLIDE_SIZE = (9144000, 6858000)

_PARSER = etree.XMLParser(resolve_entities=False, no_network=True, remove_blank_text=True)


def _qn(prefix, local):
    return f"{{{NS[prefix]}}}{local}"


def _parse(data: bytes) -> etree._Element:
    return etree.fromstring(data, parser=_PARSER)


def _local(tag):
    return etree.QName(tag).localname if isinstance(tag, str) else ""


# ── Relationship helpers ──────────────────────────────────────────────────────

def rels_path_for(part_path):
    folder, name = posixpath.split(part_path)
    return posixpath.join(folder, "_rels", f"{name}.rels")


def resolve_target(part_path, target):
    """Resolve a relationship target against the folder of its source part."""
    if target.startswith("/"):
        return posixpath.normpath(target.lstrip("/"))
    folder = posixpath.dirname(part_path)
    return posixpath.normpath(posixpath.join(folder, target))


class _Reader:
    """One pass over a package; accumulates defects as it goes."""

    def __init__(self, members):
        self.members = members
        self.defects = []

    def defect(self, part, message):
        logger.warning("package defect in %s: %s", part, message)
        self.defects.append(PackageDefect(part=part, message=message))

    def xml(self, part):
        data = self.members.get(part)
        if data is None:
            self.defect(part, "part is missing")
            return None
        try:
            return _parse(data)
        except etree.XMLSyntaxError as e:
            self.defect(part, f"malformed XML: {e}")
            return None

    def relationships(self, part):
        """rId → Relationship for the part; dangling internal targets become defects."""
        rels_name = rels_path_for(part)
        if rels_name not in self.members:
            return {}
        root = self.xml(rels_name)
        if root is None:
            return {}
        out = {}
        for el in root.iter(_qn("rel", "Relationship")):
            rid, target = el.get("Id"), el.get("Target", "")
            external = el.get("TargetMode") == "External"
            resolved = target if external else resolve_target(part, target)
            if not external and resolved not in self.members:
                self.defect(part, f"dangling relationship {rid} -> {resolved}")
            out[rid] = Relationship(rid=rid, rel_type=el.get("Type", ""),
                                    target=resolved, external=external)
        return out

    # ── Shape trees ───────────────────────────────────────────────────────

    def shapes(self, root, rels):
        tree = root.find(f"{_qn('p', 'cSld')}/{_qn('p', 'spTree')}")
        if tree is None:
            return []
        out = []
        self._walk(tree, rels, 0, 0, out)
        return out

    def _walk(self, parent, rels, depth, group, out):
        for el in parent:
            local = _local(el.tag)
            if local == "AlternateContent":
                choice = el.find(_qn("mc", "Choice"))
                if choice is None:
                    choice = el.find(_qn("mc", "Fallback"))
                if choice is not None:
                    self._walk(choice, rels, depth, group, out)
                continue
            if local == "sp":
                shape = self._shape(el, depth)
            elif local == "cxnSp":
                shape = self._connector(el, depth)
            elif local == "pic":
                shape = self._picture(el, rels, depth)
            elif local == "graphicFrame":
                shape = self._frame(el, depth)
            elif local == "grpSp":
                shape = ShapeInfo(kind="grpSp", name=_name(el, "nvGrpSpPr"), depth=depth)
                _apply_xfrm(shape, el.find(f"{_qn('p', 'grpSpPr')}/{_qn('a', 'xfrm')}"))
            else:
                continue
            shape.parent_group = group
            out.append(shape)
            if local == "grpSp":
                self._walk(el, rels, depth + 1, len(out), out)

    def _shape(self, el, depth):
        nv = el.find(_qn("p", "nvSpPr"))
        c_nv_sp = nv.find(_qn("p", "cNvSpPr")) if nv is not None else None
        sp_pr = el.find(_qn("p", "spPr"))
        style = el.find(_qn("p", "style"))
        paragraphs, runs = _paragraphs(el.find(_qn("p", "txBody")))
        shape = ShapeInfo(
            kind="sp",
            name=_name(el, "nvSpPr"),
            depth=depth,
            placeholder=_is_placeholder(nv),
            text_box=c_nv_sp is not None and c_nv_sp.get("txBox") in ("1", "true"),
            geometry=_geometry(sp_pr),
            fill=_fill(sp_pr) or _style_ref(style, "fillRef"),
            outline=_outline(sp_pr, style),
            paragraphs=paragraphs,
            run_count=runs,
        )
        _apply_xfrm(shape, sp_pr.find(_qn("a", "xfrm")) if sp_pr is not None else None)
        return shape

    def _connector(self, el, depth):
        sp_pr = el.find(_qn("p", "spPr"))
        shape = ShapeInfo(kind="cxnSp", name=_name(el, "nvCxnSpPr"), depth=depth,
                          geometry=_geometry(sp_pr))
        _apply_xfrm(shape, sp_pr.find(_qn("a", "xfrm")) if sp_pr is not None else None)
        return shape

    def _picture(self, el, rels, depth):
        nv = el.find(_qn("p", "nvPicPr"))
        blip = el.find(f"{_qn('p', 'blipFill')}/{_qn('a', 'blip')}")
        rid = None
        if blip is not None:
            rid = blip.get(_qn("r", "embed")) or blip.get(_qn("r", "link"))
        digest = None
        rel = rels.get(rid) if rid else None
        if rel is not None and not rel.external:
            data = self.members.get(rel.target)
            if data is not None:
                digest = hashlib.sha1(data).hexdigest()
        sp_pr = el.find(_qn("p", "spPr"))
        shape = ShapeInfo(
            kind="pic",
            name=_name(el, "nvPicPr"),
            depth=depth,
            placeholder=_is_placeholder(nv),
            geometry=_geometry(sp_pr),
            media_rid=rid,
            media_digest=digest,
            svg=blip is not None and blip.find(f".//{_qn('asvg', 'svgBlip')}") is not None,
        )
        _apply_xfrm(shape, sp_pr.find(_qn("a", "xfrm")) if sp_pr is not None else None)
        return shape

    def _frame(self, el, depth):
        data = el.find(f"{_qn('a', 'graphic')}/{_qn('a', 'graphicData')}")
        chart = data.find(_qn("c", "chart")) if data is not None else None
        shape = ShapeInfo(
            kind="graphicFrame",
            name=_name(el, "nvGraphicFramePr"),
            depth=depth,
            placeholder=_is_placeholder(el.find(_qn("p", "nvGraphicFramePr"))),
            geometry=_local_uri(data),
            chart_rid=chart.get(_qn("r", "id")) if chart is not None else None,
        )
        _apply_xfrm(shape, el.find(_qn("p", "xfrm")))
        return shape

    # ── Parts ─────────────────────────────────────────────────────────────

    def layout(self, path):
        root = self.xml(path)
        rels = self.relationships(path)
        masters = [r.target for r in rels.values() if r.kind == "slideMaster" and not r.external]
        if len(masters) != 1:
            self.defect(path, f"layout resolves to {len(masters)} masters, expected 1")
        return LayoutPart(
            path=path,
            master_path=masters[0] if masters else None,
            shapes=self.shapes(root, rels) if root is not None else [],
        )

    def master(self, path):
        root = self.xml(path)
        rels = self.relationships(path)
        return MasterPart(path=path, shapes=self.shapes(root, rels) if root is not None else [])

    def slide(self, index, path):
        slide = SlidePart(index=index, path=path)
        slide.relationships = rels = self.relationships(path)
        layouts = [r.target for r in rels.values() if r.kind == "slideLayout" and not r.external]
        if len(layouts) != 1:
            self.defect(path, f"slide resolves to {len(layouts)} layouts, expected 1")
        slide.layout_path = layouts[0] if layouts else None

        root = self.xml(path)
        if root is None:
            slide.parse_error = "slide XML unavailable"
            return slide
        slide.shapes = self.shapes(root, rels)
        slide.background = root.find(f"{_qn('p', 'cSld')}/{_qn('p', 'bg')}") is not None
        slide.transition = next(root.iter(_qn("p", "transition")), None) is not None
        timing = root.find(_qn("p", "timing"))
        if timing is not None:
            # The root time node is always present; anything below it is animation.
            slide.timing_nodes = max(0, sum(1 for _ in timing.iter(_qn("p", "cTn"))) - 1)
        return slide

    def chart(self, path, slide_index):
        part = ChartPart(path=path, slide_index=slide_index)
        self.xml(path)
        rels = self.relationships(path)
        links = [r for r in rels.values() if r.kind in WORKBOOK_KINDS]
        if not links:
            part.workbook_status = "absent"
            return part
        link = links[0]
        part.workbook_path = link.target
        if link.external:
            part.workbook_status = "external"
        elif link.target not in self.members:
            part.workbook_status = "missing"
        elif not self.members[link.target]:
            part.workbook_status = "empty"
        else:
            part.workbook_status = "embedded"
        return part


# ── Element helpers ───────────────────────────────────────────────────────────

def _name(el, nv_tag):
    c_nv_pr = el.find(f"{_qn('p', nv_tag)}/{_qn('p', 'cNvPr')}")
    return c_nv_pr.get("name", "") if c_nv_pr is not None else ""


def _is_placeholder(nv):
    if nv is None:
        return False
    return nv.find(f"{_qn('p', 'nvPr')}/{_qn('p', 'ph')}") is not None


def _geometry(sp_pr):
    if sp_pr is None:
        return None
    prst = sp_pr.find(_qn("a", "prstGeom"))
    if prst is not None:
        return prst.get("prst")
    if sp_pr.find(_qn("a", "custGeom")) is not None:
        return "custGeom"
    return None


def _fill(sp_pr):
    if sp_pr is None:
        return None
    for child in sp_pr:
        local = _local(child.tag)
        if local == "solidFill":
            colour = next(iter(child), None)
            if colour is None:
                return "solid"
            return f"{_local(colour.tag)}:{colour.get('val', '')}"
        if local == "noFill":
            return "none"
        if local in ("gradFill", "pattFill", "blipFill", "grpFill"):
            return local
    return None


def _style_ref(style, ref):
    """Theme paint referenced from <p:style>, e.g. 'style:1:accent1'; None when idx is 0."""
    if style is None:
        return None
    el = style.find(_qn("a", ref))
    if el is None:
        return None
    try:
        idx = int(el.get("idx", "0"))
    except ValueError:
        return None
    if idx <= 0:
        return None
    colour = next(iter(el), None)
    return f"style:{idx}:{colour.get('val', '') if colour is not None else ''}"


def _outline(sp_pr, style):
    """True when the shape draws a visible border, from spPr or the style's lnRef."""
    ln = sp_pr.find(_qn("a", "ln")) if sp_pr is not None else None
    if ln is not None:
        for child in ln:
            local = _local(child.tag)
            if local == "noFill":
                return False
            if local in ("solidFill", "gradFill", "pattFill"):
                return True
    return _style_ref(style, "lnRef") is not None


def _paragraphs(tx_body):
    if tx_body is None:
        return (), 0
    paragraphs, runs = [], 0
    for para in tx_body.iter(_qn("a", "p")):
        parts = []
        for run in para:
            if _local(run.tag) in ("r", "fld"):
                runs += 1
                t = run.find(_qn("a", "t"))
                if t is not None and t.text:
                    parts.append(t.text)
        paragraphs.append("".join(parts))
    return tuple(paragraphs), runs


def _apply_xfrm(shape, xfrm):
    if xfrm is None:
        return
    off, ext = xfrm.find(_qn("a", "off")), xfrm.find(_qn("a", "ext"))
    try:
        if off is not None:
            shape.x, shape.y = int(off.get("x")), int(off.get("y"))
        if ext is not None:
            shape.cx, shape.cy = int(ext.get("cx")), int(ext.get("cy"))
    except (TypeError, ValueError):
        shape.x = shape.y = shape.cx = shape.cy = None


def _local_uri(graphic_data):
    if graphic_data is None:
        return None
    uri = graphic_data.get("uri", "")
    return uri.rstrip("/").rsplit("/", 1)[-1] or None


def _unzip(data):
    try:
        zf = zipfile.ZipFile(io.BytesIO(data))
    except (zipfile.BadZipFile, ValueError, EOFError) as e:
        raise CorruptPackageError(f"corrupt package: not a ZIP container ({e})") from e
    members, unreadable = {}, []
    with zf:
        for info in zf.infolist():
            if info.is_dir():
                continue
            try:
                members[info.filename] = zf.read(info)
            except (zipfile.BadZipFile, zlib.error, EOFError, NotImplementedError) as e:
                unreadable.append((info.filename, str(e)))
    return members, unreadable


def _main_part(reader):
    root_rels = reader.relationships("")
    for rel in root_rels.values():
        if rel.rel_type == OFFICE_DOCUMENT_REL and not rel.external:
            return rel.target
    return DEFAULT_MAIN_PART


# ── Public API ────────────────────────────────────────────────────────────────

def open_package(data: bytes) -> PresentationPackage:
    """
    Parse a presentation container into a PresentationPackage.

    Raises CorruptPackageError when the bytes are not a ZIP or the
    presentation main part is missing or unreadable.
    """
    members, unreadable = _unzip(data)
    reader = _Reader(members)
    for name, reason in unreadable:
        reader.defect(name, f"unreadable member: {reason}")

    main = _main_part(reader)
    if main not in members:
        raise CorruptPackageError(f"corrupt package: main part '{main}' is missing")
    try:
        pres = _parse(members[main])
    except etree.XMLSyntaxError as e:
        raise CorruptPackageError(f"corrupt package: main part is malformed ({e})") from e

    size = pres.find(_qn("p", "sldSz"))
    width, height = DEFAULT_SLIDE_SIZE
    if size is not None:
        width, height = int(size.get("cx", width)), int(size.get("cy", height))
    package = PresentationPackage(slide_width=width, slide_height=height, members=members)

    pres_rels = reader.relationships(main)
    slide_list = pres.find(_qn("p", "sldIdLst"))
    slide_ids = list(slide_list) if slide_list is not None else []
    referenced_charts = set()
    for index, sld in enumerate(slide_ids, 1):
        rel = pres_rels.get(sld.get(_qn("r", "id")))
        if rel is None or rel.external:
            reader.defect(main, f"slide entry {index} has no slide relationship")
            continue
        slide = reader.slide(index, rel.target)
        package.slides.append(slide)

        if slide.layout_path and slide.layout_path not in package.layouts:
            package.layouts[slide.layout_path] = reader.layout(slide.layout_path)
        layout = package.layouts.get(slide.layout_path)
        if layout is not None and layout.master_path and layout.master_path not in package.masters:
            package.masters[layout.master_path] = reader.master(layout.master_path)

        for r in slide.relationships.values():
            if r.kind in MEDIA_KINDS:
                package.media.append(MediaRef(slide_index=index, rid=r.rid, kind=r.kind,
                                              target=r.target, external=r.external))
        for shape in slide.shapes:
            chart_rel = slide.relationships.get(shape.chart_rid) if shape.chart_rid else None
            if chart_rel is None:
                if shape.chart_rid:
                    reader.defect(slide.path, f"chart frame {shape.name!r} has no relationship")
                continue
            if chart_rel.target in referenced_charts:
                continue
            referenced_charts.add(chart_rel.target)
            if chart_rel.target in members:
                package.charts.append(reader.chart(chart_rel.target, index))

    # Chart parts present in the container but not placed on any slide.
    for name in sorted(members):
        if re.match(r"ppt/charts/chart[^/]*\.xml$", name) and name not in referenced_charts:
            package.charts.append(reader.chart(name, None))

    package.defects = reader.defects
    logger.info("opened package: %d slides, %d layouts, %d masters, %d charts, %d defects",
                len(package.slides), len(package.layouts), len(package.masters),
                len(package.charts), len(package.defects))
    return package
