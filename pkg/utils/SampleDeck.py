"""
Reference sample deck: six rendered 640x360 pages with layout sidecars.

Everything is drawn from fixed coordinates and a seeded generator, so two
calls produce identical files.
"""

import json
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

WIDTH, HEIGHT = 640, 360
SEED = 20240617


def _text_lines(draw, x, y, widths, color, line_height=14, gap=10):
    """Solid bars standing in for rendered text lines; returns the enclosing box."""
    top = y
    for w in widths:
        draw.rectangle([x, y, x + w, y + line_height], fill=color)
        y += line_height + gap
    return [x - 4, top - 4, x + max(widths) + 4, y - gap + 4]


def _element(label, box, score=0.95):
    return {"label": label, "score": score, "coordinate": [float(v) for v in box]}


def _title_slide():
    img = Image.new("RGB", (WIDTH, HEIGHT), (18, 32, 74))
    draw = ImageDraw.Draw(img)
    draw.rectangle([0, 300, WIDTH, HEIGHT], fill=(232, 160, 32))
    title = _text_lines(draw, 60, 120, [420], (250, 250, 250), line_height=36)
    subtitle = _text_lines(draw, 60, 180, [260], (190, 200, 230), line_height=16)
    return img, [_element("doc_title", title), _element("text", subtitle)]


def _bullets_slide():
    img = Image.new("RGB", (WIDTH, HEIGHT), (248, 248, 244))
    draw = ImageDraw.Draw(img)
    title = _text_lines(draw, 40, 30, [300], (30, 30, 30), line_height=28)
    body = _text_lines(draw, 60, 100, [480, 420, 450, 380, 300], (60, 60, 60))
    draw.rectangle([0, 0, 12, HEIGHT], fill=(32, 96, 200))
    return img, [_element("doc_title", title), _element("text", body)]


def _chart_slide():
    img = Image.new("RGB", (WIDTH, HEIGHT), (255, 255, 255))
    draw = ImageDraw.Draw(img)
    title = _text_lines(draw, 40, 24, [280], (20, 20, 20), line_height=26)
    palette = [(32, 96, 200), (40, 160, 120), (232, 160, 32), (200, 60, 60)]
    for i, h in enumerate((120, 180, 90, 220)):
        x = 120 + i * 110
        draw.rectangle([x, 320 - h, x + 70, 320], fill=palette[i])
    draw.line([100, 320, 580, 320], fill=(80, 80, 80), width=2)
    return img, [_element("doc_title", title), _element("image", [100, 90, 580, 322], 0.9)]


def _photo_slide(rng):
    """Seeded smooth noise in warm tones with a caption strip."""
    coarse = rng.integers(0, 256, size=(9, 16, 3), dtype=np.uint8)
    photo = Image.fromarray(coarse).resize((WIDTH, HEIGHT), Image.Resampling.BICUBIC)
    tint = np.asarray(photo, dtype=np.float64) * np.array([1.0, 0.8, 0.55])
    img = Image.fromarray(np.clip(tint, 0, 255).astype(np.uint8))
    draw = ImageDraw.Draw(img)
    draw.rectangle([0, 290, WIDTH, HEIGHT], fill=(0, 0, 0))
    caption = _text_lines(draw, 40, 312, [360], (255, 255, 255), line_height=18)
    return img, [_element("image", [0, 0, WIDTH, 290], 0.88), _element("text", caption)]


def _two_column_slide():
    img = Image.new("RGB", (WIDTH, HEIGHT), (236, 242, 250))
    draw = ImageDraw.Draw(img)
    title = _text_lines(draw, 40, 28, [340], (18, 32, 74), line_height=28)
    left = _text_lines(draw, 40, 100, [240, 220, 250, 180], (50, 50, 70))
    draw.rectangle([340, 96, 600, 300], fill=(40, 160, 120))
    right = _text_lines(draw, 360, 120, [200, 170], (255, 255, 255))
    return img, [_element("doc_title", title), _element("text", left),
                 _element("text", right), _element("footer", [500, 330, 630, 352], 0.4)]


def _closing_slide():
    img = Image.new("RGB", (WIDTH, HEIGHT), (232, 160, 32))
    draw = ImageDraw.Draw(img)
    title = _text_lines(draw, 180, 150, [280], (18, 32, 74), line_height=40)
    return img, [_element("doc_title", title)]


def build_sample_slides():
    """[(PIL image, layout elements)] for the six pages in order."""
    rng = np.random.default_rng(SEED)
    return [
        _title_slide(),
        _bullets_slide(),
        _chart_slide(),
        _photo_slide(rng),
        _two_column_slide(),
        _closing_slide(),
    ]


def write_sample_deck(out_dir, with_layouts=True):
    """Write slide_0001.png .. slide_0006.png (+ .json sidecars); returns the image paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for n, (img, elements) in enumerate(build_sample_slides(), 1):
        path = out / f"slide_{n:04d}.png"
        img.save(path, "PNG")
        if with_layouts:
            sidecar = {"elements": elements}
            (out / f"slide_{n:04d}.json").write_text(
                json.dumps(sidecar, indent=2, sort_keys=True), encoding="utf-8")
        paths.append(path)
    return paths
