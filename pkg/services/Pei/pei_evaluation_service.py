import logging
from pathlib import Path

from models.Pei import GATES, ROUTE_NATIVE, GateResult, PeiReport
from models.Settings import PeiThresholds
from services.Pei.pei_gate_service import PeiGateService
from services.Pei.pei_triage_service import PeiTriageService
from utils.Exceptions import InputError, UnsupportedFormatError
from utils.PackageReader import open_package

logger = logging.getLogger(__name__)

# Strictly ordered; a failure knocks out every later gate.
GATE_SEQUENCE = (
    PeiGateService.gate_t1_text_integrity,
    PeiGateService.gate_t2_vector,
    PeiGateService.gate_t3_structure,
    PeiGateService.gate_t4_parametric,
    PeiGateService.gate_t5_cinematic,
)


class PeiEvaluationService:

    def run_gates(pkg, thresholds):
        """Run T1..T5 in order, stopping at the first failure. Returns (gates, level)."""
        results, level = [], 0
        for gate, check in zip(GATES, GATE_SEQUENCE):
            if results and results[-1].passed is not True:
                results.append(GateResult.unevaluated(gate))
                continue
            result = check(pkg, thresholds)
            logger.debug("gate %s: %s", gate, result.status)
            results.append(result)
            if result.passed:
                level += 1
        return results, level

    def evaluate_package(pkg, route, thresholds=None):
        thresholds = thresholds or PeiThresholds()
        gates, level = PeiEvaluationService.run_gates(pkg, thresholds)
        return PeiReport(route=route, gates=gates, level=min(level, route.max_level),
                         defects=list(pkg.defects))

    def evaluate_pei(source, data=None, thresholds=None):
        """
        Triage the input and, for native packages, run the knockout gates.

        `source` is a path, file name or URL. When `data` is omitted and the
        input is not a URL, the bytes are read from `source`.
        """
        thresholds = thresholds or PeiThresholds()
        if data is None and not PeiTriageService.is_url(source):
            # Extension decides first so a pdf is never opened as a package.
            try:
                route = PeiTriageService.triage(str(source))
            except UnsupportedFormatError:
                if Path(source).suffix:
                    raise
                route = None
            if route is None or route.route == ROUTE_NATIVE:
                try:
                    data = Path(source).read_bytes()
                except OSError as e:
                    raise InputError(f"cannot read '{source}': {e.strerror or e}") from e
                route = route or PeiTriageService.triage(str(source), data)
        else:
            route = PeiTriageService.triage(str(source), data)

        if route.route != ROUTE_NATIVE:
            logger.info("PEI %s: %s route, gates not run", source, route.route)
            return PeiReport(route=route, gates=[GateResult.unevaluated(g) for g in GATES], level=0)

        pkg = open_package(data)
        report = PeiEvaluationService.evaluate_package(pkg, route, thresholds)
        logger.info("PEI %s: %s", source, report.level_label)
        return report
