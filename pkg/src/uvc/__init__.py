"""
UVC Voltage Risk - UVC Module Initialization
Injection history, uncertain voltage components and the persistence predictor
"""

from .predictor import SEASON_HOURS, baseline_point_predictor
from .series import InjectionSeries, series_from_frame, split_by_days
from .components import (UvcSampleSet, VoltageDecomposition, assemble_injections,
                         compute_uvc_samples, decompose_voltage, predict_uvc, uvc_values)

__all__ = [
    "SEASON_HOURS", "baseline_point_predictor", "InjectionSeries", "series_from_frame",
    "split_by_days", "UvcSampleSet", "VoltageDecomposition", "assemble_injections",
    "compute_uvc_samples", "decompose_voltage", "predict_uvc", "uvc_values",
]
