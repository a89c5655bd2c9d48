from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from PIL import Image, UnidentifiedImageError

from utils.Exceptions import DomainError, ImageDecodeError


@dataclass(frozen=True)
class SlideImage:
    """Decoded raster page as an (height, width, 3) uint8 array."""

    pixels: np.ndarray
    name: str = ""

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise DomainError(f"slide pixels must be HxWx3, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DomainError("slide image must be at least 1x1")
        if arr.dtype != np.uint8:
            if arr.min() < 0 or arr.max() > 255:
                raise DomainError("channel values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self):
        return int(self.pixels.shape[1])

    @property
    def height(self):
        return int(self.pixels.shape[0])

    @classmethod
    def from_file(cls, path):
        path = Path(path)
        try:
            with Image.open(path) as img:
                rgb = img.convert("RGB")
                return cls(np.asarray(rgb, dtype=np.uint8), name=path.name)
        except (UnidentifiedImageError, OSError, ValueError) as e:
            raise ImageDecodeError(path, e) from e

    @classmethod
    def solid(cls, rgb, width=8, height=8, name="solid"):
        arr = np.empty((height, width, 3), dtype=np.uint8)
        arr[...] = np.asarray(rgb, dtype=np.uint8)
        return cls(arr, name=name)


@dataclass(frozen=True)
class HsvPixel:
    hue: float
    saturation: float
    value: float

    def to_dict(self):
        return {"hue": self.hue, "saturation": self.saturation, "value": self.value}


@dataclass(frozen=True)
class LabPixel:
    L: float
    a: float
    b: float

    @property
    def normalized(self):
        return (self.L / 100.0, (self.a + 128.0) / 255.0, (self.b + 128.0) / 255.0)

    def to_dict(self):
        l_n, a_n, b_n = self.normalized
        return {"L": self.L, "a": self.a, "b": self.b, "L_norm": l_n, "a_norm": a_n, "b_norm": b_n}


@dataclass
class DeckSequence:
    """Ordered slide images of one generated deck plus optional sidecars."""

    slide_paths: list
    topic: str = ""
    system: str = ""
    purpose: Optional[str] = None
    layout_paths: list = field(default_factory=list)
    package_path: Optional[Path] = None
    missing_layouts: list = field(default_factory=list)

    def __post_init__(self):
        if not self.layout_paths:
            self.layout_paths = [None] * len(self.slide_paths)

    def __len__(self):
        return len(self.slide_paths)

    def load_slide(self, index):
        return SlideImage.from_file(self.slide_paths[index])

    def to_dict(self):
        return {
            "topic": self.topic,
            "system": self.system,
            "purpose": self.purpose,
            "slides": [Path(p).name for p in self.slide_paths],
            "layouts": [Path(p).name if p else None for p in self.layout_paths],
            "package": Path(self.package_path).name if self.package_path else None,
            "missing_layouts": list(self.missing_layouts),
        }
