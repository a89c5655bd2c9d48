import json
import logging
import re
from pathlib import Path

import yaml
from PIL import Image, UnidentifiedImageError

from models.Slide import DeckSequence
from utils.Exceptions import EmptyDeckError, ImageDecodeError, InputError

logger = logging.getLogger(__name__)

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg"}
LAYOUT_SUFFIXES = (".json", ".layout.json")
MANIFEST_SUFFIXES = {".yaml", ".yml", ".json"}

_DIGITS = re.compile(r"(\d+)")


def natural_key(path):
    """slide_2 sorts before slide_10."""
    parts = _DIGITS.split(Path(path).name.lower())
    return [(0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts]


def _check_decodable(path):
    try:
        with Image.open(path) as img:
            img.verify()
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as e:
        raise ImageDecodeError(path, e) from e


def _find_layout(slide_path, layout_dir):
    stem = Path(slide_path).stem
    for folder in (layout_dir, Path(slide_path).parent):
        if folder is None:
            continue
        for suffix in LAYOUT_SUFFIXES:
            candidate = Path(folder) / f"{stem}{suffix}"
            if candidate.is_file():
                return candidate
    return None


def _read_manifest(path):
    try:
        text = path.read_text(encoding="utf-8")
        data = json.loads(text) if path.suffix.lower() == ".json" else yaml.safe_load(text)
    except OSError as e:
        raise InputError(f"cannot read deck manifest '{path}': {e.strerror or e}") from e
    except (ValueError, yaml.YAMLError) as e:
        raise InputError(f"malformed deck manifest '{path}': {e}") from e
    if not isinstance(data, dict) or not isinstance(data.get("slides"), list):
        raise InputError(f"deck manifest '{path}' needs a 'slides' list")
    return data


class DeckIngestService:

    def list_slides(directory):
        directory = Path(directory)
        if not directory.is_dir():
            raise InputError(f"deck directory '{directory}' does not exist")
        return sorted(
            (p for p in directory.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES),
            key=natural_key,
        )

    def load_deck(source, layout_dir=None, package_path=None, topic=None, system=None, purpose=None):
        """
        Build a DeckSequence from a directory of page images or a manifest file.

        A directory contributes every PNG/JPEG in natural filename order; its
        name is the default topic and its parent's name the default system.
        A manifest (YAML/JSON) lists ``slides`` explicitly, with optional
        ``layouts``, ``package``, ``topic``, ``system`` and ``purpose``; its
        relative paths resolve against the manifest's folder.
        """
        source = Path(source)
        manifest = {}
        if source.is_file() and source.suffix.lower() in MANIFEST_SUFFIXES:
            manifest = _read_manifest(source)
            base = source.parent
            slides = [base / p for p in manifest["slides"]]
            default_topic, default_system = source.stem, base.name
        else:
            slides = DeckIngestService.list_slides(source)
            default_topic, default_system = source.name, source.parent.name

        if not slides:
            raise EmptyDeckError(f"no PNG or JPEG slides found in '{source}'")
        for path in slides:
            if not path.is_file():
                raise ImageDecodeError(path, "file not found")
            _check_decodable(path)

        layout_dir = Path(layout_dir) if layout_dir else None
        listed = manifest.get("layouts")
        if listed is not None:
            if len(listed) != len(slides):
                raise InputError(f"manifest lists {len(listed)} layouts for {len(slides)} slides")
            layouts = [source.parent / p if p else None for p in listed]
        else:
            layouts = [_find_layout(p, layout_dir) for p in slides]

        missing = [p.name for p, lay in zip(slides, layouts) if lay is None]
        if missing:
            logger.warning("%d of %d slides have no layout sidecar", len(missing), len(slides))

        package = package_path or manifest.get("package")
        if package and not Path(package).is_absolute() and manifest:
            package = source.parent / package

        deck = DeckSequence(
            slide_paths=slides,
            topic=topic or manifest.get("topic") or default_topic,
            system=system or manifest.get("system") or default_system,
            purpose=purpose or manifest.get("purpose"),
            layout_paths=layouts,
            package_path=Path(package) if package else None,
            missing_layouts=missing,
        )
        logger.info("loaded deck %s/%s: %d slides", deck.system, deck.topic, len(deck))
        return deck
