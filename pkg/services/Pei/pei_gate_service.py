"""
Static-analysis proxies for the five editability gates.

Each gate reads a parsed PresentationPackage and returns a GateResult whose
evidence names the slide (1-based, None for package-wide findings) and what
was found. Thresholds come from PeiThresholds.
"""

import io
import logging
import math

import numpy as np
import openpyxl

from models.Pei import GateResult

logger = logging.getLogger(__name__)

# Cells per side of the occupancy grid used for picture coverage.
COVERAGE_GRID = 100


def _raster_pictures(slide):
    return [s for s in slide.shapes if s.kind == "pic" and not s.svg and s.has_geometry]


def _is_vector(shape):
    if shape.kind == "cxnSp":
        return True
    if shape.kind == "pic":
        return shape.svg
    if shape.kind != "sp" or shape.placeholder or shape.text_box:
        return False
    if shape.geometry == "custGeom":
        return True
    return shape.geometry is not None and (shape.fill not in (None, "none") or shape.outline)


def _coverage(shapes, width, height):
    """Fraction of the slide covered by the union of the shapes' boxes."""
    grid = np.zeros((COVERAGE_GRID, COVERAGE_GRID), dtype=bool)
    for s in shapes:
        x0 = max(0, int(math.floor(s.x / width * COVERAGE_GRID)))
        y0 = max(0, int(math.floor(s.y / height * COVERAGE_GRID)))
        x1 = min(COVERAGE_GRID, int(math.ceil((s.x + s.cx) / width * COVERAGE_GRID)))
        y1 = min(COVERAGE_GRID, int(math.ceil((s.y + s.cy) / height * COVERAGE_GRID)))
        if x1 > x0 and y1 > y0:
            grid[y0:y1, x0:x1] = True
    return float(grid.mean())


def _fragment_runs(slide, slide_width, thresholds):
    """Longest stacks of single-paragraph text boxes sharing a left edge."""
    boxes = [
        s for s in slide.shapes
        if s.kind == "sp" and s.has_geometry and s.cy > 0
        and len([p for p in s.paragraphs if p.strip()]) == 1
    ]
    tolerance = thresholds.fragment_left_tolerance * slide_width
    findings = []
    by_parent = {}
    for b in boxes:
        by_parent.setdefault(b.parent_group, []).append(b)
    for siblings in by_parent.values():
        siblings.sort(key=lambda s: s.x)
        clusters, current = [], []
        for box in siblings:
            if current and box.x - current[0].x > tolerance:
                clusters.append(current)
                current = []
            current.append(box)
        if current:
            clusters.append(current)

        for cluster in clusters:
            if len(cluster) < thresholds.fragment_min_boxes:
                continue
            cluster.sort(key=lambda s: s.y)
            best = run = 1
            for prev, nxt in zip(cluster, cluster[1:]):
                gap = nxt.y - (prev.y + prev.cy)
                run = run + 1 if gap < thresholds.fragment_gap_ratio * prev.cy else 1
                best = max(best, run)
            if best >= thresholds.fragment_min_boxes:
                findings.append((cluster[0].x, best))
    return findings


def _signature_key(shape):
    return shape.kind, shape.geometry, shape.fill or shape.media_digest


class PeiGateService:

    def gate_t1_text_integrity(pkg, thresholds):
        slides = pkg.slides
        evidence, runs_total = [], 0
        rasterized_slides = []
        fragmented = []
        for slide in slides:
            runs = sum(s.run_count for s in slide.shapes if s.has_text)
            runs_total += runs
            coverage = _coverage(_raster_pictures(slide), pkg.slide_width, pkg.slide_height)
            if coverage >= thresholds.raster_coverage:
                rasterized_slides.append(slide.index)
            for left, count in _fragment_runs(slide, pkg.slide_width, thresholds):
                fragmented.append((slide.index,
                                   f"{count} stacked single-line text boxes share left edge x={left} EMU"))
            evidence.append((slide.index, f"{runs} text runs, raster coverage {coverage:.2f}"))

        stats = {"slides": len(slides), "text_runs": runs_total,
                 "rasterized_slides": len(rasterized_slides), "fragmented_stacks": len(fragmented)}
        failures = []
        share = len(rasterized_slides) / len(slides) if slides else 0.0
        if slides and runs_total == 0 and share >= thresholds.raster_slide_share:
            failures.extend(
                (i, f"rasterized text: no text runs, pictures cover >= "
                    f"{thresholds.raster_coverage:.0%} of the slide")
                for i in rasterized_slides
            )
        failures.extend(fragmented)
        if failures:
            return GateResult(gate="T1", passed=False, evidence=failures, stats=stats)
        return GateResult(gate="T1", passed=True, evidence=evidence, stats=stats)

    def gate_t2_vector(pkg, thresholds):
        raster = vector = exempt = 0
        evidence = []
        for slide in pkg.slides:
            slide_raster = 0
            content = [s for s in slide.shapes if s.kind != "grpSp"]
            for shape in content:
                if _is_vector(shape):
                    vector += 1
                elif shape.kind == "pic" and shape.has_geometry:
                    full_bleed = shape.area >= thresholds.background_coverage * pkg.slide_area
                    other_layer = any(o is not shape and (o.has_text or _is_vector(o)) for o in content)
                    if full_bleed and other_layer:
                        exempt += 1
                    else:
                        slide_raster += 1
            raster += slide_raster
            if slide_raster:
                evidence.append((slide.index, f"{slide_raster} raster pictures"))

        stats = {"raster": raster, "vector": vector, "background_exempt": exempt}
        if raster > (raster + vector) / 2.0 and vector == 0:
            evidence.insert(0, (None, f"{raster} raster pictures and no vector shapes"))
            return GateResult(gate="T2", passed=False, evidence=evidence, stats=stats)
        return GateResult(gate="T2", passed=True,
                          evidence=[(None, f"{vector} vector elements, {raster} raster pictures")],
                          stats=stats)

    def _hardcoded_shapes(pkg, thresholds):
        """Decorations repeated inside slide parts on most slides."""
        slides = pkg.slides
        if len(slides) < 2:
            return []
        tol_x = thresholds.duplicate_position_tolerance * pkg.slide_width
        tol_y = thresholds.duplicate_position_tolerance * pkg.slide_height
        needed = math.ceil(thresholds.duplicate_slide_share * len(slides))
        candidates = [
            (slide.index, s) for slide in slides for s in slide.top_level()
            if s.kind in ("sp", "pic") and s.has_geometry and not s.placeholder
            and not s.has_text and _signature_key(s)[2] is not None
        ]
        findings, reported = [], []
        for index, shape in candidates:
            key = _signature_key(shape)
            if any(k == key and abs(x - shape.x) <= tol_x and abs(y - shape.y) <= tol_y
                   for k, x, y in reported):
                continue
            hits = {
                other_index for other_index, other in candidates
                if _signature_key(other) == key
                and abs(other.x - shape.x) <= tol_x and abs(other.y - shape.y) <= tol_y
            }
            if len(hits) >= needed:
                reported.append((key, shape.x, shape.y))
                findings.append((index, f"hardcoded background: {shape.kind} {shape.geometry or ''} "
                                        f"{shape.name!r} repeated in {len(hits)}/{len(slides)} slide parts"))
        return findings

    def gate_t3_structure(pkg, thresholds):
        findings = list(PeiGateService._hardcoded_shapes(pkg, thresholds))
        for slide in pkg.slides:
            top = slide.top_level()
            if len(top) > thresholds.group_shape_limit and not any(s.kind == "grpSp" for s in top):
                findings.append((slide.index, f"atomic isolation: {len(top)} loose shapes, no group"))

        inherited = sum(len(m.shapes) for m in pkg.masters.values()) + \
            sum(len(layout.shapes) for layout in pkg.layouts.values())
        stats = {"master_layout_shapes": inherited,
                 "groups": sum(1 for s in pkg.slides for x in s.shapes if x.kind == "grpSp")}
        if findings:
            return GateResult(gate="T3", passed=False, evidence=findings, stats=stats)
        return GateResult(gate="T3", passed=True,
                          evidence=[(None, f"{inherited} shapes inherited from masters and layouts")],
                          stats=stats)

    def _workbook_opens(data):
        try:
            wb = openpyxl.load_workbook(io.BytesIO(data), read_only=True)
            wb.close()
            return None
        except Exception as e:
            return str(e) or e.__class__.__name__

    def gate_t4_parametric(pkg, thresholds):
        charts = pkg.charts
        stats = {"charts": len(charts)}
        if not charts:
            return GateResult(gate="T4", passed=False, stats=stats,
                              evidence=[(None, "no native chart parts")])
        failures, evidence = [], []
        for chart in charts:
            if chart.workbook_status != "embedded":
                failures.append((chart.slide_index,
                                 f"broken data link: {chart.path} workbook {chart.workbook_status}"
                                 + (f" ({chart.workbook_path})" if chart.workbook_path else "")))
                continue
            if thresholds.verify_workbook_opens:
                error = PeiGateService._workbook_opens(pkg.read(chart.workbook_path))
                if error:
                    failures.append((chart.slide_index,
                                     f"broken data link: {chart.workbook_path} does not open ({error})"))
                    continue
            evidence.append((chart.slide_index, f"{chart.path} -> {chart.workbook_path}"))
        if failures:
            return GateResult(gate="T4", passed=False, evidence=failures, stats=stats)
        return GateResult(gate="T4", passed=True, evidence=evidence, stats=stats)

    def gate_t5_cinematic(pkg, thresholds):
        animated = [s.index for s in pkg.slides if s.transition or s.timing_nodes > 0]
        external = [m for m in pkg.media if m.external]
        stats = {"animated_slides": len(animated), "media": len(pkg.media),
                 "external_media": len(external)}
        failures = []
        if not animated:
            failures.append((None, "static state: no transition or timing nodes on any slide"))
        failures.extend(
            (m.slide_index, f"external dependency: {m.kind} linked to {m.target}") for m in external
        )
        if failures:
            return GateResult(gate="T5", passed=False, evidence=failures, stats=stats)
        return GateResult(gate="T5", passed=True, stats=stats,
                          evidence=[(i, "transition or animation") for i in animated])
