"""
Pixel-level colour mathematics shared by every spatial metric.

All arithmetic runs in float64 after one 8-bit to fraction division.
Scalar helpers take a single (R, G, B) triple; the ``*_map`` helpers take a
whole (H, W, 3) uint8 array.
"""

import numpy as np
from skimage import color

from models.Slide import HsvPixel, LabPixel
from utils.Exceptions import DomainError

LUMA_WEIGHTS = np.array([0.2126, 0.7152, 0.0722])
SRGB_BREAKPOINT = 0.04045


def to_unit(pixels):
    """uint8 channels to float64 fractions."""
    return np.asarray(pixels, dtype=np.float64) / 255.0


def _check_pixel(p):
    arr = np.asarray(p, dtype=np.float64)
    if arr.shape != (3,):
        raise DomainError(f"pixel must be an (R, G, B) triple, got {p!r}")
    if arr.min() < 0 or arr.max() > 255:
        raise DomainError(f"channel values must lie in [0, 255], got {p!r}")
    return arr


# ── Linearisation and luminance ───────────────────────────────────────────────

def srgb_to_linear(c):
    """Piecewise sRGB decoding. Accepts a scalar or an array of fractions."""
    arr = np.asarray(c, dtype=np.float64)
    if np.any(arr < 0) or np.any(arr > 1) or np.any(np.isnan(arr)):
        raise DomainError(f"sRGB channel fraction must lie in [0, 1], got {c!r}")
    out = np.where(arr <= SRGB_BREAKPOINT, arr / 12.92, ((arr + 0.055) / 1.055) ** 2.4)
    if out.ndim == 0:
        return float(out)
    return out


def _weighted_luminance(lin):
    lum = np.clip(lin @ LUMA_WEIGHTS, 0.0, 1.0)
    # white is exactly 1 regardless of float summation order
    return np.where(np.all(lin == 1.0, axis=-1), 1.0, lum)


def relative_luminance(p):
    rgb = _check_pixel(p) / 255.0
    return float(_weighted_luminance(srgb_to_linear(rgb)))


def relative_luminance_map(pixels):
    return _weighted_luminance(srgb_to_linear(to_unit(pixels)))


# ── HSV ───────────────────────────────────────────────────────────────────────

def hsv_map(pixels):
    """(H, W, 3) array of hue degrees [0, 360), saturation, value."""
    hsv = color.rgb2hsv(to_unit(pixels))
    hsv[..., 0] = np.mod(hsv[..., 0] * 360.0, 360.0)
    hsv[..., 1:] = np.clip(hsv[..., 1:], 0.0, 1.0)
    return hsv


def rgb_to_hsv(p):
    rgb = _check_pixel(p).reshape(1, 1, 3)
    h, s, v = hsv_map(rgb)[0, 0]
    # achromatic pixels carry hue 0
    if s == 0:
        h = 0.0
    return HsvPixel(hue=float(h), saturation=float(s), value=float(v))


def hsv_to_rgb(hsv):
    """Inverse of rgb_to_hsv, returning an 8-bit triple."""
    arr = np.array([[[hsv.hue / 360.0 % 1.0, hsv.saturation, hsv.value]]], dtype=np.float64)
    rgb = color.hsv2rgb(arr)[0, 0]
    return tuple(int(v) for v in np.round(rgb * 255.0))


# ── CIE-Lab ───────────────────────────────────────────────────────────────────

def lab_map(pixels):
    """CIE-Lab under D65 / 2 degree observer."""
    return color.rgb2lab(to_unit(pixels), illuminant="D65", observer="2")


def lab_normalized_map(pixels):
    """L/100 and (a|b + 128)/255, clipped into [0, 1]."""
    lab = lab_map(pixels)
    out = np.empty_like(lab)
    out[..., 0] = lab[..., 0] / 100.0
    out[..., 1] = (lab[..., 1] + 128.0) / 255.0
    out[..., 2] = (lab[..., 2] + 128.0) / 255.0
    return np.clip(out, 0.0, 1.0)


def rgb_to_lab(p):
    rgb = _check_pixel(p).reshape(1, 1, 3)
    L, a, b = lab_map(rgb)[0, 0]
    return LabPixel(L=float(L), a=float(a), b=float(b))


def rgb_to_lab_normalized(p):
    return tuple(float(np.clip(v, 0.0, 1.0)) for v in rgb_to_lab(p).normalized)
