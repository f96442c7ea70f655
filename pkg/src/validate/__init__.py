"""
UVC Voltage Risk - Validation Module Initialization
Monte-Carlo and held-out evaluation of dispatch strategies
"""

from .scenarios import HeldOutData, Provenance, ScenarioSet, sample_scenarios, spawn_generators
from .metrics import (ViolationFrequencies, frequency_heatmap, var_confidence,
                      violation_counts, violation_frequency)
from .compare import (DailyOutcome, ValidationReport, build_report, compare_methods,
                      comparison_summary, evaluate_method, plan_days)
from .synthetic import (DEFAULT_WEATHER, WeatherModel, generate_synthetic_series,
                        synthetic_injections, write_series)

__all__ = [
    "HeldOutData", "Provenance", "ScenarioSet", "sample_scenarios", "spawn_generators",
    "ViolationFrequencies", "frequency_heatmap", "var_confidence", "violation_counts",
    "violation_frequency", "DailyOutcome", "ValidationReport", "build_report", "compare_methods",
    "comparison_summary", "evaluate_method", "plan_days", "DEFAULT_WEATHER", "WeatherModel",
    "generate_synthetic_series", "synthetic_injections", "write_series",
]
