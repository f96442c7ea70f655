"""
UVC Voltage Risk - Run Configuration
JSON run configuration with built-in defaults and command-line overrides
"""

import dataclasses
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ..errors import InputError
from ..manage.spec import RiskVariant
from ..storage.atomic import atomic_write_json

logger = logging.getLogger(__name__)

PATH_KEYS = ("branches", "buses", "layout", "series", "output_dir")


@dataclass
class RunConfig:
    """Inputs, modelling choices and solver settings of one run."""

    branches: str = "branches.csv"
    buses: str = "buses.csv"
    layout: str = "layout.csv"
    series: str = "series.csv"
    output_dir: str = "output"
    tau: float = 0.95
    variant: str = "var"
    curtailment: bool = False
    reduce_to: int = 10
    alpha_points: int = 21
    seed: int = 0
    slack_bus: int = 1
    slack_voltage_pu: float = 1.0
    base_mva: float = 1.0
    train_fraction: float = 0.7
    hours: List[int] = field(default_factory=lambda: list(range(24)))
    day: Optional[str] = None
    provider_cost: float = 20.0
    scenarios: int = 100_000
    synthetic_days: int = 60
    test_days: int = 0
    pivot_tol: float = 1e-10
    residual_tol: float = 1e-8
    node_limit: int = 1_000_000

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not 0.0 < self.tau < 1.0:
            raise InputError(f"tau must lie in (0, 1), got {self.tau}")
        self.variant = RiskVariant.parse(self.variant).value
        if self.reduce_to < 1:
            raise InputError(f"reduce_to must be at least 1, got {self.reduce_to}")
        if self.alpha_points < 2:
            raise InputError(f"alpha_points must be at least 2, got {self.alpha_points}")
        if not 0.0 < self.train_fraction < 1.0:
            raise InputError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")
        if not self.base_mva > 0.0:
            raise InputError("base_mva must be positive")
        bad = [h for h in self.hours if not 0 <= int(h) <= 23]
        if bad or not self.hours:
            raise InputError(f"hours must be a nonempty list within 0..23, got {self.hours}")
        self.hours = sorted({int(h) for h in self.hours})
        if self.scenarios < 1:
            raise InputError("scenarios must be at least 1")
        if self.test_days < 0:
            raise InputError(f"test_days must be nonnegative, got {self.test_days}")

    def with_overrides(self, **overrides) -> "RunConfig":
        """Copy with every non-None override applied."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **changes)

    def path(self, *parts: str) -> str:
        """Path inside the output directory."""
        return os.path.join(self.output_dir, *parts)


DEFAULT_CONFIG = RunConfig()


def load_config(config_file: str) -> RunConfig:
    """
    Load a JSON configuration; keys left out keep their defaults.

    Relative paths resolve against the directory of ``config_file``.
    """
    try:
        with open(config_file, "r") as f:
            data: Dict[str, Any] = json.load(f)
    except FileNotFoundError:
        raise InputError("configuration file not found", path=config_file) from None
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", path=config_file, line=exc.lineno) from exc
    if not isinstance(data, dict):
        raise InputError("configuration must be a JSON object", path=config_file)

    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise InputError(f"unknown configuration keys: {', '.join(unknown)}", path=config_file)
    base = os.path.dirname(os.path.abspath(config_file))
    for key in PATH_KEYS:
        if key in data and not os.path.isabs(data[key]):
            data[key] = os.path.join(base, data[key])
    for key in PATH_KEYS:
        data.setdefault(key, os.path.join(base, getattr(DEFAULT_CONFIG, key)))
    try:
        config = RunConfig(**data)
    except TypeError as exc:
        raise InputError(str(exc), path=config_file) from exc
    logger.debug("Loaded configuration from %s", config_file)
    return config


def save_config(config: RunConfig, config_file: str) -> str:
    return atomic_write_json(config_file, dataclasses.asdict(config))
