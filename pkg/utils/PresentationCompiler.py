"""
Fixture Presentation Compiler
=============================
Builds minimal but valid .pptx packages directly at the zip/XML level.
The packages exercise each editability gate: every preset is designed to
pass the gates below its level and fail the one at its level.

Package layout
──────────────
  [Content_Types].xml, _rels/.rels
  ppt/presentation.xml (+ rels)
  ppt/slideMasters/slideMaster1.xml  one master, decorated background band
  ppt/slideLayouts/slideLayout1.xml  one blank layout
  ppt/theme/theme1.xml
  ppt/slides/slideN.xml (+ rels)
  ppt/charts/chartN.xml (+ rels) and ppt/embeddings/*.xlsx
  ppt/media/*.png

Zip entries carry a fixed timestamp so the same preset always yields the
same bytes.
"""

import io
import zipfile
from pathlib import Path

from lxml import etree
from PIL import Image

from utils.ExcelHandler import createChartWorkbook
from utils.PackageReader import NS, _qn

# ── Content types and relationship types ─────────────────────────────────────

CT = {
    "presentation": "application/vnd.openxmlformats-officedocument.presentationml.presentation.main+xml",
    "slide": "application/vnd.openxmlformats-officedocument.presentationml.slide+xml",
    "layout": "application/vnd.openxmlformats-officedocument.presentationml.slideLayout+xml",
    "master": "application/vnd.openxmlformats-officedocument.presentationml.slideMaster+xml",
    "theme": "application/vnd.openxmlformats-officedocument.theme+xml",
    "chart": "application/vnd.openxmlformats-officedocument.drawingml.chart+xml",
    "rels": "application/vnd.openxmlformats-package.relationships+xml",
    "xlsx": "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet",
}

REL = "http://schemas.openxmlformats.org/officeDocument/2006/relationships"
REL_TYPES = {
    "officeDocument": f"{REL}/officeDocument",
    "slide": f"{REL}/slide",
    "slideLayout": f"{REL}/slideLayout",
    "slideMaster": f"{REL}/slideMaster",
    "theme": f"{REL}/theme",
    "chart": f"{REL}/chart",
    "package": f"{REL}/package",
    "image": f"{REL}/image",
    "video": f"{REL}/video",
}

CHART_URI = "http://schemas.openxmlformats.org/drawingml/2006/chart"
FIXED_DATE = (1980, 1, 1, 0, 0, 0)

SLIDE_CX, SLIDE_CY = 9144000, 5143500  # 16:9, 10in wide

LEVEL_PRESETS = ("L0", "L1", "L2", "L3", "L4", "L5")


def _in(inches: float) -> int:
    return int(inches * 914400)


def _serialise(root: etree._Element) -> bytes:
    return etree.tostring(
        root, xml_declaration=True, encoding="utf-8", standalone=True
    )


def _el(parent, prefix, local, **attrs):
    el = etree.SubElement(parent, _qn(prefix, local))
    for key, value in attrs.items():
        el.set(key, str(value))
    return el


def _png_stream(rgb, size=(64, 36)) -> bytes:
    buf = io.BytesIO()
    Image.new("RGB", size, rgb).save(buf, "PNG")
    return buf.getvalue()


def _rels_root():
    return etree.Element(f"{{{NS['rel']}}}Relationships", nsmap={None: NS["rel"]})


def _add_rel(root, rid, kind, target, external=False):
    rel = etree.SubElement(root, f"{{{NS['rel']}}}Relationship")
    rel.set("Id", rid)
    rel.set("Type", REL_TYPES[kind])
    rel.set("Target", target)
    if external:
        rel.set("TargetMode", "External")
    return rel


def _pml_root(local):
    return etree.Element(_qn("p", local), nsmap={k: NS[k] for k in ("a", "p", "r")})


def _sp_tree(c_sld):
    tree = _el(c_sld, "p", "spTree")
    nv = _el(tree, "p", "nvGrpSpPr")
    _el(nv, "p", "cNvPr", id=1, name="")
    _el(nv, "p", "cNvGrpSpPr")
    _el(nv, "p", "nvPr")
    _el(tree, "p", "grpSpPr")
    return tree


def _xfrm(parent, prefix, x, y, cx, cy):
    xfrm = _el(parent, prefix, "xfrm")
    _el(xfrm, "a", "off", x=x, y=y)
    _el(xfrm, "a", "ext", cx=cx, cy=cy)
    return xfrm


# ── Shape writers ─────────────────────────────────────────────────────────────

class _ShapeIds:
    def __init__(self, start=2):
        self._next = start

    def take(self):
        value = self._next
        self._next += 1
        return value


def _add_txb(spTree, ids, paragraphs, x_emu, y_emu, cx_emu, cy_emu,
             size_pt=18, hex_color="1F1F1F", placeholder=None):
    """Append a text box (or a placeholder when `placeholder` names a type)."""
    sp = _el(spTree, "p", "sp")
    nv = _el(sp, "p", "nvSpPr")
    _el(nv, "p", "cNvPr", id=ids.take(), name=f"TextBox {x_emu} {y_emu}")
    c_nv_sp = _el(nv, "p", "cNvSpPr")
    nv_pr = _el(nv, "p", "nvPr")
    if placeholder:
        _el(c_nv_sp, "a", "spLocks", noGrp=1)
        _el(nv_pr, "p", "ph", type=placeholder)
    else:
        c_nv_sp.set("txBox", "1")

    sp_pr = _el(sp, "p", "spPr")
    _xfrm(sp_pr, "a", x_emu, y_emu, cx_emu, cy_emu)
    geom = _el(sp_pr, "a", "prstGeom", prst="rect")
    _el(geom, "a", "avLst")
    _el(sp_pr, "a", "noFill")

    tx_body = _el(sp, "p", "txBody")
    _el(tx_body, "a", "bodyPr", wrap="square")
    _el(tx_body, "a", "lstStyle")
    for text in paragraphs:
        para = _el(tx_body, "a", "p")
        run = _el(para, "a", "r")
        r_pr = _el(run, "a", "rPr", lang="en-US", sz=int(size_pt * 100), dirty=0)
        fill = _el(r_pr, "a", "solidFill")
        _el(fill, "a", "srgbClr", val=hex_color)
        _el(run, "a", "t").text = text
    return sp


def _add_rect_shape(spTree, ids, x_emu, y_emu, cx_emu, cy_emu, hex_fill,
                    prst="rect", name=None):
    """
    Append a preset shape. With a hex colour the fill is explicit and the
    border hidden; with `hex_fill=None` fill and border come from <p:style>
    theme references, the way shapes drawn in an editor are stored.
    """
    sp = _el(spTree, "p", "sp")
    nv = _el(sp, "p", "nvSpPr")
    _el(nv, "p", "cNvPr", id=ids.take(), name=name or f"{prst} {x_emu} {y_emu}")
    _el(nv, "p", "cNvSpPr")
    _el(nv, "p", "nvPr")
    sp_pr = _el(sp, "p", "spPr")
    _xfrm(sp_pr, "a", x_emu, y_emu, cx_emu, cy_emu)
    geom = _el(sp_pr, "a", "prstGeom", prst=prst)
    _el(geom, "a", "avLst")
    if hex_fill is None:
        style = _el(sp, "p", "style")
        for ref, idx, colour in (("lnRef", 2, "accent1"), ("fillRef", 1, "accent1"),
                                 ("effectRef", 0, "accent1")):
            _el(_el(style, "a", ref, idx=idx), "a", "schemeClr", val=colour)
        _el(_el(style, "a", "fontRef", idx="minor"), "a", "schemeClr", val="lt1")
    else:
        fill = _el(sp_pr, "a", "solidFill")
        _el(fill, "a", "srgbClr", val=hex_fill)
        ln = _el(sp_pr, "a", "ln")
        _el(ln, "a", "noFill")
    tx_body = _el(sp, "p", "txBody")
    _el(tx_body, "a", "bodyPr")
    _el(tx_body, "a", "lstStyle")
    _el(tx_body, "a", "p")
    return sp


def _add_connector(spTree, ids, x_emu, y_emu, cx_emu, cy_emu, hex_color="404040"):
    cxn = _el(spTree, "p", "cxnSp")
    nv = _el(cxn, "p", "nvCxnSpPr")
    _el(nv, "p", "cNvPr", id=ids.take(), name=f"Connector {x_emu}")
    _el(nv, "p", "cNvCxnSpPr")
    _el(nv, "p", "nvPr")
    sp_pr = _el(cxn, "p", "spPr")
    _xfrm(sp_pr, "a", x_emu, y_emu, cx_emu, cy_emu)
    geom = _el(sp_pr, "a", "prstGeom", prst="line")
    _el(geom, "a", "avLst")
    ln = _el(sp_pr, "a", "ln", w=12700)
    fill = _el(ln, "a", "solidFill")
    _el(fill, "a", "srgbClr", val=hex_color)
    return cxn


def _add_group(spTree, ids, x_emu, y_emu, cx_emu, cy_emu, name="Group"):
    """Append an empty group; callers add children to the returned element."""
    grp = _el(spTree, "p", "grpSp")
    nv = _el(grp, "p", "nvGrpSpPr")
    _el(nv, "p", "cNvPr", id=ids.take(), name=name)
    _el(nv, "p", "cNvGrpSpPr")
    _el(nv, "p", "nvPr")
    grp_pr = _el(grp, "p", "grpSpPr")
    xfrm = _xfrm(grp_pr, "a", x_emu, y_emu, cx_emu, cy_emu)
    _el(xfrm, "a", "chOff", x=x_emu, y=y_emu)
    _el(xfrm, "a", "chExt", cx=cx_emu, cy=cy_emu)
    return grp


class _SlideBuilder:
    """
    Builds one slide's XML and accumulates the parts it references.
    Media, charts and external links are registered through the builder so
    the relationship ids stay consistent with the slide XML.
    """

    def __init__(self):
        self.root = _pml_root("sld")
        c_sld = _el(self.root, "p", "cSld")
        self.spTree = _sp_tree(c_sld)
        clr = _el(self.root, "p", "clrMapOvr")
        _el(clr, "a", "masterClrMapping")
        self.ids = _ShapeIds()
        self._rels = _rels_root()
        _add_rel(self._rels, "rId1", "slideLayout", "../slideLayouts/slideLayout1.xml")
        self._next_rid = 2
        self.media = []     # (file name, bytes)
        self.charts = []    # (rid, categories, values)
        self._transition = None
        self._animated = False

    def _rid(self):
        rid = f"rId{self._next_rid}"
        self._next_rid += 1
        return rid

    def add_text(self, paragraphs, x, y, cx, cy, parent=None, **kwargs):
        if isinstance(paragraphs, str):
            paragraphs = [paragraphs]
        return _add_txb(self.spTree if parent is None else parent, self.ids, paragraphs,
                        x, y, cx, cy, **kwargs)

    def add_title(self, text):
        return _add_txb(self.spTree, self.ids, [text], _in(0.5), _in(0.3), _in(9), _in(0.9),
                        size_pt=32, placeholder="title")

    def add_rect(self, x, y, cx, cy, hex_fill, prst="rect", parent=None, name=None):
        return _add_rect_shape(self.spTree if parent is None else parent, self.ids,
                               x, y, cx, cy, hex_fill, prst=prst, name=name)

    def add_connector(self, x, y, cx, cy):
        return _add_connector(self.spTree, self.ids, x, y, cx, cy)

    def add_group(self, x, y, cx, cy, name="Group"):
        return _add_group(self.spTree, self.ids, x, y, cx, cy, name=name)

    def add_image(self, png_bytes, name):
        """Register image data; return the rId to use in XML."""
        rid = self._rid()
        self.media.append((name, png_bytes))
        _add_rel(self._rels, rid, "image", f"../media/{name}")
        return rid

    def embed_picture(self, png_bytes, name, x, y, cx, cy, video_link=None):
        """Add a <p:pic>; with `video_link` the picture is the poster of a linked video."""
        rid = self.add_image(png_bytes, name)
        pic = _el(self.spTree, "p", "pic")
        nv = _el(pic, "p", "nvPicPr")
        _el(nv, "p", "cNvPr", id=self.ids.take(), name=f"Picture {name}")
        c_nv_pic = _el(nv, "p", "cNvPicPr")
        _el(c_nv_pic, "a", "picLocks", noChangeAspect=1)
        nv_pr = _el(nv, "p", "nvPr")
        if video_link is not None:
            video_rid = self._rid()
            _add_rel(self._rels, video_rid, "video", video_link, external=True)
            _el(nv_pr, "a", "videoFile").set(_qn("r", "link"), video_rid)
        blip_fill = _el(pic, "p", "blipFill")
        _el(blip_fill, "a", "blip").set(_qn("r", "embed"), rid)
        stretch = _el(blip_fill, "a", "stretch")
        _el(stretch, "a", "fillRect")
        sp_pr = _el(pic, "p", "spPr")
        _xfrm(sp_pr, "a", x, y, cx, cy)
        geom = _el(sp_pr, "a", "prstGeom", prst="rect")
        _el(geom, "a", "avLst")
        return pic

    def add_chart(self, categories, values, x, y, cx, cy):
        rid = self._rid()
        self.charts.append((rid, list(categories), list(values)))
        frame = _el(self.spTree, "p", "graphicFrame")
        nv = _el(frame, "p", "nvGraphicFramePr")
        _el(nv, "p", "cNvPr", id=self.ids.take(), name=f"Chart {len(self.charts)}")
        _el(nv, "p", "cNvGraphicFramePr")
        _el(nv, "p", "nvPr")
        _xfrm(frame, "p", x, y, cx, cy)
        graphic = _el(frame, "a", "graphic")
        data = _el(graphic, "a", "graphicData", uri=CHART_URI)
        chart = etree.SubElement(data, f"{{{NS['c']}}}chart", nsmap={"c": NS["c"]})
        chart.set(_qn("r", "id"), rid)
        return frame

    def set_transition(self, kind="fade"):
        self._transition = kind

    def animate(self, shape):
        """Fade-in entrance effect on the given shape."""
        self._animated = self._animated or []
        spid = shape.find(".//" + _qn("p", "cNvPr")).get("id")
        self._animated.append(spid)

    def chart_rel(self, rid, target):
        _add_rel(self._rels, rid, "chart", target)

    def _write_timing(self):
        timing = _el(self.root, "p", "timing")
        tn_lst = _el(timing, "p", "tnLst")
        root_par = _el(tn_lst, "p", "par")
        root_ctn = _el(root_par, "p", "cTn", id=1, dur="indefinite", restart="never", nodeType="tmRoot")
        seq = _el(_el(root_ctn, "p", "childTnLst"), "p", "seq", concurrent=1, nextAc="seek")
        seq_ctn = _el(seq, "p", "cTn", id=2, dur="indefinite", nodeType="mainSeq")
        children = _el(seq_ctn, "p", "childTnLst")
        next_id = 3
        for spid in self._animated:
            par = _el(children, "p", "par")
            ctn = _el(par, "p", "cTn", id=next_id, presetID=10, presetClass="entr",
                      fill="hold", nodeType="clickEffect")
            effect = _el(_el(ctn, "p", "childTnLst"), "p", "animEffect", transition="in", filter="fade")
            bhvr = _el(effect, "p", "cBhvr")
            _el(bhvr, "p", "cTn", id=next_id + 1, dur=500)
            tgt = _el(bhvr, "p", "tgtEl")
            _el(tgt, "p", "spTgt", spid=spid)
            next_id += 2

    def xml_bytes(self) -> bytes:
        if self._transition:
            transition = _el(self.root, "p", "transition", spd="med")
            _el(transition, "p", self._transition)
        if self._animated:
            self._write_timing()
        return _serialise(self.root)

    def rels_bytes(self) -> bytes:
        return _serialise(self._rels)


# ── Fixed parts ───────────────────────────────────────────────────────────────

def _theme_xml():
    a = NS["a"]
    theme = etree.Element(f"{{{a}}}theme", nsmap={"a": a})
    theme.set("name", "Fixture")
    elements = _el(theme, "a", "themeElements")
    scheme = _el(elements, "a", "clrScheme", name="Fixture")
    colours = (("dk1", "000000"), ("lt1", "FFFFFF"), ("dk2", "1F2A44"), ("lt2", "E7E6E6"),
               ("accent1", "4472C4"), ("accent2", "ED7D31"), ("accent3", "A5A5A5"),
               ("accent4", "FFC000"), ("accent5", "5B9BD5"), ("accent6", "70AD47"),
               ("hlink", "0563C1"), ("folHlink", "954F72"))
    for name, value in colours:
        _el(_el(scheme, "a", name), "a", "srgbClr", val=value)
    fonts = _el(elements, "a", "fontScheme", name="Fixture")
    for group in ("majorFont", "minorFont"):
        g = _el(fonts, "a", group)
        _el(g, "a", "latin", typeface="Calibri")
        _el(g, "a", "ea", typeface="")
        _el(g, "a", "cs", typeface="")
    fmt = _el(elements, "a", "fmtScheme", name="Fixture")
    for list_name, item in (("fillStyleLst", "solidFill"), ("lnStyleLst", "ln"),
                            ("effectStyleLst", "effectStyle"), ("bgFillStyleLst", "solidFill")):
        lst = _el(fmt, "a", list_name)
        for _ in range(3):
            el = _el(lst, "a", item)
            if item == "solidFill":
                _el(el, "a", "schemeClr", val="phClr")
            elif item == "effectStyle":
                _el(el, "a", "effectLst")
    return _serialise(theme)


def _master_xml(decorate=True):
    root = _pml_root("sldMaster")
    c_sld = _el(root, "p", "cSld")
    bg = _el(c_sld, "p", "bg")
    bg_ref = _el(bg, "p", "bgRef", idx=1001)
    _el(bg_ref, "a", "schemeClr", val="bg1")
    tree = _sp_tree(c_sld)
    if decorate:
        _add_rect_shape(tree, _ShapeIds(), 0, SLIDE_CY - _in(0.3), SLIDE_CX, _in(0.3),
                        "1F2A44", name="Footer band")
    _el(root, "p", "clrMap", bg1="lt1", tx1="dk1", bg2="lt2", tx2="dk2",
        accent1="accent1", accent2="accent2", accent3="accent3", accent4="accent4",
        accent5="accent5", accent6="accent6", hlink="hlink", folHlink="folHlink")
    ids = _el(root, "p", "sldLayoutIdLst")
    _el(ids, "p", "sldLayoutId", id=2147483649).set(_qn("r", "id"), "rId1")
    return _serialise(root)


def _layout_xml():
    root = _pml_root("sldLayout")
    root.set("type", "blank")
    c_sld = _el(root, "p", "cSld", name="Blank")
    _sp_tree(c_sld)
    clr = _el(root, "p", "clrMapOvr")
    _el(clr, "a", "masterClrMapping")
    return _serialise(root)


def _chart_xml(categories, values):
    c = NS["c"]
    root = etree.Element(f"{{{c}}}chartSpace", nsmap={"c": c, "a": NS["a"], "r": NS["r"]})

    def sub(parent, local, **attrs):
        el = etree.SubElement(parent, f"{{{c}}}{local}")
        for k, v in attrs.items():
            el.set(k, str(v))
        return el

    chart = sub(root, "chart")
    plot = sub(chart, "plotArea")
    sub(plot, "layout")
    bar = sub(plot, "barChart")
    sub(bar, "barDir", val="col")
    sub(bar, "grouping", val="clustered")
    ser = sub(bar, "ser")
    sub(ser, "idx", val=0)
    sub(ser, "order", val=0)
    cat_ref = sub(sub(ser, "cat"), "strRef")
    sub(cat_ref, "f").text = f"Sheet1!$A$2:$A${len(categories) + 1}"
    cache = sub(cat_ref, "strCache")
    sub(cache, "ptCount", val=len(categories))
    for i, cat in enumerate(categories):
        sub(sub(cache, "pt", idx=i), "v").text = str(cat)
    val_ref = sub(sub(ser, "val"), "numRef")
    sub(val_ref, "f").text = f"Sheet1!$B$2:$B${len(values) + 1}"
    cache = sub(val_ref, "numCache")
    sub(cache, "ptCount", val=len(values))
    for i, v in enumerate(values):
        sub(sub(cache, "pt", idx=i), "v").text = str(v)
    sub(bar, "axId", val=111)
    sub(bar, "axId", val=222)
    ext = sub(root, "externalData")
    ext.set(f"{{{NS['r']}}}id", "rId1")
    sub(ext, "autoUpdate", val=0)
    return _serialise(root)


# ── Zip assembler ─────────────────────────────────────────────────────────────

def _write(zout, name, data):
    info = zipfile.ZipInfo(name, date_time=FIXED_DATE)
    info.compress_type = zipfile.ZIP_DEFLATED
    zout.writestr(info, data)


def _assemble_zip(slides, decorate_master=True, slide_size=(SLIDE_CX, SLIDE_CY)) -> bytes:
    """
    Build a .pptx zip from slide builders:
    - presentation.xml with sldIdLst in builder order
    - presentation rels for master, theme and every slide
    - [Content_Types].xml Overrides for every XML part
    - slide, chart, workbook and media members
    """
    ct_root = etree.Element(f"{{{NS['ct']}}}Types", nsmap={None: NS["ct"]})
    for ext, ctype in (("rels", CT["rels"]), ("xml", "application/xml"),
                       ("png", "image/png"), ("xlsx", CT["xlsx"])):
        d = etree.SubElement(ct_root, f"{{{NS['ct']}}}Default")
        d.set("Extension", ext)
        d.set("ContentType", ctype)

    def override(part, kind):
        ov = etree.SubElement(ct_root, f"{{{NS['ct']}}}Override")
        ov.set("PartName", f"/{part}")
        ov.set("ContentType", CT[kind])

    entries = []
    pkg_rels = _rels_root()
    _add_rel(pkg_rels, "rId1", "officeDocument", "ppt/presentation.xml")

    pres = _pml_root("presentation")
    master_ids = _el(pres, "p", "sldMasterIdLst")
    _el(master_ids, "p", "sldMasterId", id=2147483648).set(_qn("r", "id"), "rId1")
    sld_id_lst = _el(pres, "p", "sldIdLst")
    _el(pres, "p", "sldSz", cx=slide_size[0], cy=slide_size[1])
    _el(pres, "p", "notesSz", cx=6858000, cy=9144000)
    pres_rels = _rels_root()
    _add_rel(pres_rels, "rId1", "slideMaster", "slideMasters/slideMaster1.xml")
    _add_rel(pres_rels, "rId2", "theme", "theme/theme1.xml")
    override("ppt/presentation.xml", "presentation")

    master_rels = _rels_root()
    _add_rel(master_rels, "rId1", "slideLayout", "../slideLayouts/slideLayout1.xml")
    _add_rel(master_rels, "rId2", "theme", "../theme/theme1.xml")
    layout_rels = _rels_root()
    _add_rel(layout_rels, "rId1", "slideMaster", "../slideMasters/slideMaster1.xml")
    entries += [
        ("ppt/slideMasters/slideMaster1.xml", _master_xml(decorate_master)),
        ("ppt/slideMasters/_rels/slideMaster1.xml.rels", _serialise(master_rels)),
        ("ppt/slideLayouts/slideLayout1.xml", _layout_xml()),
        ("ppt/slideLayouts/_rels/slideLayout1.xml.rels", _serialise(layout_rels)),
        ("ppt/theme/theme1.xml", _theme_xml()),
    ]
    override("ppt/slideMasters/slideMaster1.xml", "master")
    override("ppt/slideLayouts/slideLayout1.xml", "layout")
    override("ppt/theme/theme1.xml", "theme")

    chart_no = 0
    for i, sb in enumerate(slides, 1):
        sname = f"slide{i}.xml"
        rid = f"rId{i + 2}"
        sld_id = _el(sld_id_lst, "p", "sldId", id=255 + i)
        sld_id.set(_qn("r", "id"), rid)
        _add_rel(pres_rels, rid, "slide", f"slides/{sname}")
        override(f"ppt/slides/{sname}", "slide")

        for chart_rid, categories, values in sb.charts:
            chart_no += 1
            chart_name = f"chart{chart_no}.xml"
            workbook = f"Microsoft_Excel_Worksheet{chart_no}.xlsx"
            sb.chart_rel(chart_rid, f"../charts/{chart_name}")
            chart_rels = _rels_root()
            _add_rel(chart_rels, "rId1", "package", f"../embeddings/{workbook}")
            entries += [
                (f"ppt/charts/{chart_name}", _chart_xml(categories, values)),
                (f"ppt/charts/_rels/{chart_name}.rels", _serialise(chart_rels)),
                (f"ppt/embeddings/{workbook}", createChartWorkbook(categories, values)),
            ]
            override(f"ppt/charts/{chart_name}", "chart")

        entries.append((f"ppt/slides/{sname}", sb.xml_bytes()))
        entries.append((f"ppt/slides/_rels/{sname}.rels", sb.rels_bytes()))
        for media_name, data in sb.media:
            entries.append((f"ppt/media/{media_name}", data))

    out = io.BytesIO()
    with zipfile.ZipFile(out, "w", zipfile.ZIP_DEFLATED) as zout:
        _write(zout, "[Content_Types].xml", _serialise(ct_root))
        _write(zout, "_rels/.rels", _serialise(pkg_rels))
        _write(zout, "ppt/presentation.xml", _serialise(pres))
        _write(zout, "ppt/_rels/presentation.xml.rels", _serialise(pres_rels))
        for name, data in entries:
            _write(zout, name, data)
    return out.getvalue()


# ── Slide recipes ─────────────────────────────────────────────────────────────

BODY = ["Quarterly revenue grew across all regions.",
        "Margins held steady despite higher input costs.",
        "Hiring is on plan for the second half."]


def _text_slide(title, body=BODY):
    sb = _SlideBuilder()
    sb.add_title(title)
    sb.add_text(body, _in(0.5), _in(1.4), _in(5.5), _in(2.5))
    return sb


def _photo_slide(title, index):
    """Real text next to a raster photo, no vector graphics."""
    sb = _text_slide(title)
    sb.embed_picture(_png_stream((90 + 20 * index, 120, 160)), f"photo{index}.png",
                     _in(6.2), _in(1.4), _in(3.3), _in(2.5))
    return sb


def _vector_slide(title, index, logo=False):
    sb = _text_slide(title)
    group = sb.add_group(_in(6.2), _in(1.4), _in(3.3), _in(2.5), name=f"Icons {index}")
    sb.add_rect(_in(6.2), _in(1.4), _in(1.5), _in(1.1), "4472C4", prst="ellipse", parent=group)
    sb.add_rect(_in(8.0), _in(1.4), _in(1.5), _in(1.1), "ED7D31", prst="triangle", parent=group)
    sb.add_rect(_in(6.2), _in(2.8), _in(3.3), _in(1.1), "70AD47", prst="roundRect", parent=group)
    sb.add_connector(_in(0.5), _in(1.25), _in(9.0), 0)
    if logo:
        sb.add_rect(_in(9.1), _in(0.2), _in(0.6), _in(0.6), "C00000", prst="star5", name="Logo")
    return sb


def _mimicry_slide(title):
    """A bar chart drawn from rectangles instead of a chart part."""
    sb = _SlideBuilder()
    sb.add_title(title)
    for i, height in enumerate((1.0, 1.8, 1.4, 2.4)):
        sb.add_rect(_in(1.0 + i * 1.2), _in(4.4 - height), _in(0.8), _in(height), "5B9BD5",
                    name=f"Bar {i + 1}")
    return sb


def _chart_slide(title):
    sb = _SlideBuilder()
    sb.add_title(title)
    sb.add_chart(["North", "South", "East", "West"], [12.5, 18.0, 9.75, 21.25],
                 _in(0.8), _in(1.3), _in(8.4), _in(3.3))
    return sb


def _slides_for_level(level):
    if level == 1:
        return [_photo_slide(f"Update {i}", i) for i in range(1, 4)]
    if level == 2:
        return [_vector_slide(f"Update {i}", i, logo=True) for i in range(1, 4)]
    slides = [_vector_slide(f"Update {i}", i) for i in range(1, 3)]
    if level == 3:
        slides.append(_mimicry_slide("Regional sales"))
    else:
        slides.append(_chart_slide("Regional sales"))
    if level == 5:
        for sb in slides:
            sb.set_transition("fade")
    return slides


# ── Public builders ───────────────────────────────────────────────────────────

def build_static_pdf() -> bytes:
    """A one-page PDF; triage ends at L0 without reading it."""
    buf = io.BytesIO()
    Image.new("RGB", (320, 180), (240, 240, 240)).save(buf, "PDF")
    return buf.getvalue()


def build_level_fixture(level) -> bytes:
    """
    Package that classifies exactly at the given level.

    L1 fails the vector check (photos only), L2 fails the structure check
    (logo copied into every slide part), L3 fails the data check (bars drawn
    from rectangles), L4 fails the cinematic check (no transitions), L5 passes.
    L0 returns a PDF.
    """
    if isinstance(level, str):
        level = int(level.upper().lstrip("L"))
    if level == 0:
        return build_static_pdf()
    if not 1 <= level <= 5:
        raise ValueError(f"no fixture for level {level}")
    return _assemble_zip(_slides_for_level(level))


def build_broken_link(data: bytes, target="../embeddings/missing.xlsx") -> bytes:
    """Copy of a package whose chart workbook relationships point at a part that does not exist."""
    src = zipfile.ZipFile(io.BytesIO(data))
    out = io.BytesIO()
    with src, zipfile.ZipFile(out, "w", zipfile.ZIP_DEFLATED) as zout:
        for info in src.infolist():
            payload = src.read(info)
            if info.filename.startswith("ppt/charts/_rels/"):
                root = etree.fromstring(payload)
                for rel in root.iter(_qn("rel", "Relationship")):
                    if rel.get("Type") == REL_TYPES["package"]:
                        rel.set("Target", target)
                payload = _serialise(root)
            _write(zout, info.filename, payload)
    return out.getvalue()


def build_fragmented_text(lines=6) -> bytes:
    """One-line text boxes stacked at a shared left edge."""
    sb = _SlideBuilder()
    sb.add_title("Findings")
    for i in range(lines):
        sb.add_text(f"Finding line {i + 1}", _in(0.5), _in(1.3 + i * 0.45), _in(6), _in(0.35))
    return _assemble_zip([sb])


def build_rasterized(slides=3) -> bytes:
    """Every slide is a full-bleed picture without any text runs."""
    out = []
    for i in range(slides):
        sb = _SlideBuilder()
        sb.embed_picture(_png_stream((30 * i, 60, 90), size=(160, 90)), f"render{i}.png",
                         0, 0, SLIDE_CX, SLIDE_CY)
        out.append(sb)
    return _assemble_zip(out, decorate_master=False)


def build_hardcoded_logo(slides=10) -> bytes:
    return _assemble_zip([_vector_slide(f"Topic {i}", i, logo=True) for i in range(1, slides + 1)])


def build_loose_shapes(shapes=30) -> bytes:
    sb = _SlideBuilder()
    sb.add_title("Process overview")
    for i in range(shapes):
        row, col = divmod(i, 10)
        sb.add_rect(_in(0.4 + col * 0.9), _in(1.4 + row * 1.0), _in(0.7), _in(0.7), "4472C4",
                    prst="ellipse")
    return _assemble_zip([sb, _vector_slide("Summary", 1)])


def build_icons_and_photo() -> bytes:
    slides = [_vector_slide("Overview", 1), _vector_slide("Details", 2)]
    slides[1].embed_picture(_png_stream((200, 160, 120)), "team.png",
                            _in(0.5), _in(4.0), _in(1.5), _in(0.9))
    return _assemble_zip(slides)


def build_styled_shapes(slides=2) -> bytes:
    """Title, three theme-styled shapes and one photo per slide; no explicit fills."""
    out = []
    for i in range(1, slides + 1):
        sb = _SlideBuilder()
        sb.add_title(f"Process {i}")
        for j, prst in enumerate(("rect", "ellipse", "rightArrow")):
            sb.add_rect(_in(0.6 + j * 2.0), _in(1.6), _in(1.6), _in(1.2), None, prst=prst)
        sb.embed_picture(_png_stream((60, 40 * i, 200)), f"site{i}.png",
                         _in(6.6), _in(1.4), _in(3.0), _in(2.2))
        out.append(sb)
    return _assemble_zip(out)


def build_grouped_text(groups=2, lines_per_group=2) -> bytes:
    """One-line text boxes at a shared left edge, split across separate groups."""
    sb = _SlideBuilder()
    sb.add_title("Findings")
    line = 0
    for g in range(groups):
        top = _in(1.3 + line * 0.45)
        group = sb.add_group(_in(0.5), top, _in(6), _in(0.45 * lines_per_group), name=f"Block {g + 1}")
        for _ in range(lines_per_group):
            sb.add_text(f"Finding line {line + 1}", _in(0.5), _in(1.3 + line * 0.45), _in(6), _in(0.35),
                        parent=group)
            line += 1
    return _assemble_zip([sb])


def build_external_video(path="file:///C:/Users/presenter/Videos/demo.mp4") -> bytes:
    """Animated deck whose video is linked to an absolute local path."""
    slides = _slides_for_level(4)
    intro = slides[0]
    target = intro.spTree.find(_qn("p", "sp"))
    intro.animate(target)
    intro.embed_picture(_png_stream((20, 20, 20)), "poster.png",
                        _in(0.5), _in(4.1), _in(1.2), _in(0.7), video_link=path)
    return _assemble_zip(slides)


def build_animated(level_base=4) -> bytes:
    """L4 content with an entrance animation but no slide transitions."""
    slides = _slides_for_level(level_base)
    slides[0].animate(slides[0].spTree.find(_qn("p", "sp")))
    return _assemble_zip(slides)


def build_multi_paragraph() -> bytes:
    return _assemble_zip([_text_slide("Summary")])


FIXTURE_VARIANTS = {
    "broken_link": lambda: build_broken_link(build_level_fixture(5)),
    "fragmented_text": build_fragmented_text,
    "rasterized": build_rasterized,
    "hardcoded_logo": build_hardcoded_logo,
    "loose_shapes": build_loose_shapes,
    "icons_and_photo": build_icons_and_photo,
    "styled_shapes": build_styled_shapes,
    "grouped_text": build_grouped_text,
    "external_video": build_external_video,
    "animated": build_animated,
    "multi_paragraph": build_multi_paragraph,
}


def write_fixtures(out_dir):
    """Write L0..L5 and every variant to out_dir; returns {name: path}."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = {}
    for preset in LEVEL_PRESETS:
        suffix = "pdf" if preset == "L0" else "pptx"
        path = out / f"{preset}.{suffix}"
        path.write_bytes(build_level_fixture(preset))
        written[preset] = path
    for name, builder in FIXTURE_VARIANTS.items():
        path = out / f"{name}.pptx"
        path.write_bytes(builder())
        written[name] = path
    return written
