"""
UVC Voltage Risk - CLI Module Initialization
Run configuration, pipeline orchestration and the click command group
"""

from .config import DEFAULT_CONFIG, RunConfig, load_config, save_config
from .pipeline import FitSummary, ManageSummary, PipelineManager

__all__ = [
    "DEFAULT_CONFIG", "RunConfig", "load_config", "save_config", "FitSummary", "ManageSummary",
    "PipelineManager",
]
