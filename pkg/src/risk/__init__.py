"""
UVC Voltage Risk - Risk Module Initialization
VaR/CVaR of conditional UVC mixtures and bus voltages
"""

from .measures import (CDF_TOLERANCE, MAX_NEWTON_ITERATIONS, BusRisk, QuantileResult,
                       assess_bus, cvar_gmm, solve_quantile, uvc_risk, var_gmm)
from .profile import (REPORT_COLUMNS, RiskProfile, missing_profile, profile_from_model,
                      profiles_to_frame, read_risk_report, write_risk_report)

__all__ = [
    "CDF_TOLERANCE", "MAX_NEWTON_ITERATIONS", "BusRisk", "QuantileResult", "assess_bus",
    "cvar_gmm", "solve_quantile", "uvc_risk", "var_gmm", "REPORT_COLUMNS", "RiskProfile",
    "missing_profile", "profile_from_model", "profiles_to_frame", "read_risk_report",
    "write_risk_report",
]
