import csv
import io
import json
import logging
from pathlib import Path

from models.Report import COMPONENTS, DeckReport
from utils.Exceptions import InputError

logger = logging.getLogger(__name__)

FORMAT_STRUCT = "struct"
FORMAT_TABLE = "table"
FORMATS = (FORMAT_STRUCT, FORMAT_TABLE)

TABLE_HEADER = ["Usability", "Engagement", "Harmony", "Rhythm", "Aesthetics", "PEI"]
NOT_AVAILABLE = "N/A"


def _cell(value):
    return NOT_AVAILABLE if value is None else f"{value:.2f}"


def _pei_cell(report):
    if report.pei is None or not report.pei.evaluable:
        return NOT_AVAILABLE
    return report.pei.level_label


class ReportService:

    def to_struct(report):
        """Canonical JSON: sorted keys, two-space indent, trailing newline."""
        payload = [r.to_dict() for r in report] if isinstance(report, (list, tuple)) else report.to_dict()
        return (json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)
                + "\n").encode("utf-8")

    def to_table(reports):
        """One CSV row per deck under the fixed component header."""
        if not isinstance(reports, (list, tuple)):
            reports = [reports]
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(TABLE_HEADER)
        for r in reports:
            writer.writerow([_cell(r.components[name]) for name in COMPONENTS]
                            + [_cell(r.aesthetics), _pei_cell(r)])
        return out.getvalue().encode("utf-8")

    def emit_report(report, fmt=FORMAT_STRUCT):
        """Serialize a DeckReport (or a list of them) as ``struct`` or ``table`` bytes."""
        if fmt == FORMAT_STRUCT:
            return ReportService.to_struct(report)
        if fmt == FORMAT_TABLE:
            return ReportService.to_table(report)
        raise InputError(f"unknown report format '{fmt}' (expected one of: {', '.join(FORMATS)})")

    def parse_report(data):
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        try:
            payload = json.loads(data)
        except json.JSONDecodeError as e:
            raise InputError(f"report is not valid JSON: {e.msg} (line {e.lineno})") from e
        try:
            if isinstance(payload, list):
                return [DeckReport.from_dict(p) for p in payload]
            return DeckReport.from_dict(payload)
        except ValueError as e:
            raise InputError(str(e)) from e

    def load_reports(path):
        """Every DeckReport in a struct file or in the *.json files of a directory."""
        path = Path(path)
        files = sorted(path.glob("**/*.json")) if path.is_dir() else [path]
        reports = []
        for f in files:
            try:
                parsed = ReportService.parse_report(f.read_bytes())
            except OSError as e:
                raise InputError(f"cannot read report '{f}': {e.strerror or e}") from e
            except InputError as e:
                raise InputError(f"{f}: {e}") from e
            reports.extend(parsed if isinstance(parsed, list) else [parsed])
        if not reports:
            raise InputError(f"no deck reports found under '{path}'")
        logger.info("loaded %d deck reports from %s", len(reports), path)
        return reports
