import logging
from pathlib import PurePosixPath
from urllib.parse import urlparse

from models.Pei import ROUTE_NATIVE, ROUTE_STATIC, ROUTE_WEB, WEB_NOT_EVALUABLE, TriageRoute
from utils.Exceptions import UnsupportedFormatError

logger = logging.getLogger(__name__)

STATIC_EXTENSIONS = {".pdf", ".png", ".jpg", ".jpeg"}
NATIVE_EXTENSIONS = {".pptx", ".potx"}
SUPPORTED_FORMATS = ("pdf", "png", "jpg", "jpeg", "pptx", "potx", "http(s) URL")

_MAGIC = (
    (b"%PDF-", "pdf"),
    (b"\x89PNG\r\n\x1a\n", "png"),
    (b"\xff\xd8\xff", "jpeg"),
    (b"PK\x03\x04", "zip"),
)


class PeiTriageService:

    def is_url(source):
        parsed = urlparse(str(source))
        return parsed.scheme in ("http", "https") and bool(parsed.netloc)

    def sniff(data):
        """Container kind from the leading bytes, or None."""
        if not data:
            return None
        for magic, kind in _MAGIC:
            if data.startswith(magic):
                return kind
        return None

    def triage(source, data=None):
        """
        Route an input by URL scheme, extension and leading bytes.

        Static inputs (pdf, png, jpg) stop at L0, Web links cap at L2 and are
        not evaluated, native packages may reach L5.
        """
        source = str(source)
        if PeiTriageService.is_url(source):
            logger.info("triage %s: web deck, %s", source, WEB_NOT_EVALUABLE)
            return TriageRoute.for_route(ROUTE_WEB, source=source, note=WEB_NOT_EVALUABLE)

        ext = PurePosixPath(source.replace("\\", "/")).suffix.lower()
        kind = PeiTriageService.sniff(data)
        if ext in STATIC_EXTENSIONS or kind in ("pdf", "png", "jpeg"):
            route = ROUTE_STATIC
        elif ext in NATIVE_EXTENSIONS or (not ext and kind == "zip"):
            route = ROUTE_NATIVE
        else:
            raise UnsupportedFormatError(source, SUPPORTED_FORMATS)
        logger.info("triage %s: %s route", source, route)
        return TriageRoute.for_route(route, source=source)
