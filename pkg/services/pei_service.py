"""
Pei_Service facade: triage, package reading and the knockout gates.
Delegates to the focused service modules.
"""

from services.Pei.pei_evaluation_service import PeiEvaluationService
from services.Pei.pei_gate_service import PeiGateService
from services.Pei.pei_triage_service import PeiTriageService
from utils.PackageReader import open_package


class Pei_Service:
    triage                  = staticmethod(PeiTriageService.triage)
    open_package            = staticmethod(open_package)

    # Gates, in knockout order
    gate_t1_text_integrity  = staticmethod(PeiGateService.gate_t1_text_integrity)
    gate_t2_vector          = staticmethod(PeiGateService.gate_t2_vector)
    gate_t3_structure       = staticmethod(PeiGateService.gate_t3_structure)
    gate_t4_parametric      = staticmethod(PeiGateService.gate_t4_parametric)
    gate_t5_cinematic       = staticmethod(PeiGateService.gate_t5_cinematic)

    evaluate_package        = staticmethod(PeiEvaluationService.evaluate_package)
    evaluate_pei            = staticmethod(PeiEvaluationService.evaluate_pei)
