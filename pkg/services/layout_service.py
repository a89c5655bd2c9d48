import json
import logging

from pydantic import ValidationError

from models.Layout import LayoutDocument, LayoutElement
from utils.Exceptions import DomainError, LayoutParseError

logger = logging.getLogger(__name__)

# Detector output arrives either as {"elements": [...]} or the raw
# detector dump {"boxes": [...]}.
ELEMENT_KEYS = ("elements", "boxes")


class Layout_Service:

    def parse_layout_file(data, slide_index=0, image_size=None):
        """
        Parse one layout sidecar.

        Args:
            data: raw file bytes (UTF-8 JSON) or an already decoded str
            slide_index: ordinal of the slide this file belongs to
            image_size: (width, height) used to clamp boxes, optional

        Returns:
            LayoutDocument
        """
        if isinstance(data, bytes):
            try:
                data = data.decode("utf-8-sig")
            except UnicodeDecodeError as e:
                raise LayoutParseError(f"layout file is not UTF-8: {e}") from e
        try:
            raw = json.loads(data)
        except json.JSONDecodeError as e:
            raise LayoutParseError(f"malformed layout JSON: {e.msg}", line=e.lineno) from e

        if not isinstance(raw, dict):
            raise LayoutParseError("layout file must hold one top-level object")
        key = next((k for k in ELEMENT_KEYS if k in raw), None)
        if key is None:
            raise LayoutParseError("missing element array", field="elements")
        items = raw[key]
        if not isinstance(items, list):
            raise LayoutParseError("element array must be a list", field=key)

        elements = []
        warnings = []
        for i, item in enumerate(items):
            if not isinstance(item, dict):
                raise LayoutParseError("element must be an object", field=f"{key}[{i}]")
            try:
                element = LayoutElement(
                    label=item.get("label", "other"),
                    score=item.get("score"),
                    coordinate=item.get("coordinate"),
                )
            except ValidationError as e:
                err = e.errors()[0]
                loc = ".".join(str(p) for p in err["loc"]) or "coordinate"
                raise LayoutParseError(err["msg"], field=f"{key}[{i}].{loc}") from e

            if image_size is not None:
                clipped = element.clamp(*image_size)
                if clipped is None:
                    warnings.append(f"element {i} lies outside the {image_size[0]}x{image_size[1]} image, dropped")
                    continue
                if clipped.clamped and not element.clamped:
                    warnings.append(f"element {i} clamped to image bounds")
                element = clipped
            elements.append(element)

        for message in warnings:
            logger.warning("slide %d layout: %s", slide_index, message)
        return LayoutDocument(
            slide_index=slide_index,
            elements=elements,
            image_size=tuple(image_size) if image_size else None,
            warnings=warnings,
        )

    def parse_layout_path(path, slide_index=0, image_size=None):
        with open(path, "rb") as fh:
            return Layout_Service.parse_layout_file(fh.read(), slide_index, image_size)

    def text_regions(doc, min_confidence=0.5):
        """Boxes labelled text/doc_title/footer scoring at least min_confidence, in document order."""
        if not 0.0 <= min_confidence <= 1.0:
            raise DomainError(f"min_confidence must lie in [0, 1], got {min_confidence}")
        return [e.coordinate for e in doc.elements if e.is_text and e.score >= min_confidence]
