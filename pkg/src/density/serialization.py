"""
UVC Voltage Risk - Model Serialization
JSON persistence of fitted (true, predicted) UVC mixtures
"""

import json
import os
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from ..errors import InputError
from ..storage.atomic import atomic_write_text
from .gmm import Gmm2


@dataclass(frozen=True)
class StoredModel:
    """A fitted mixture with the (bus, hour) it describes."""

    bus: int
    hour: int
    model: Gmm2
    deterministic: bool = False


def model_to_dict(stored: StoredModel) -> Dict[str, Any]:
    g = stored.model
    return {
        "bus": stored.bus,
        "hour": stored.hour,
        "K": g.K,
        "deterministic": stored.deterministic,
        "components": [
            {"w": float(g.weights[k]),
             "mu": [float(v) for v in g.means[k]],
             "cov": [[float(v) for v in row] for row in g.covs[k]]}
            for k in range(g.K)
        ],
    }


def model_from_dict(data: Dict[str, Any]) -> StoredModel:
    try:
        components = data["components"]
        if len(components) != data["K"]:
            raise InputError(f"model declares K={data['K']} but lists {len(components)} components")
        model = Gmm2(weights=np.array([c["w"] for c in components]),
                     means=np.array([c["mu"] for c in components]),
                     covs=np.array([c["cov"] for c in components]))
        return StoredModel(bus=int(data["bus"]), hour=int(data["hour"]), model=model,
                           deterministic=bool(data.get("deterministic", False)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed model document: {exc}") from exc


def model_filename(bus: int, hour: int) -> str:
    return f"bus{bus}_h{hour:02d}.json"


def write_model(stored: StoredModel, directory: str) -> str:
    """
    Write a model as JSON; floats use shortest round-trip repr (at most 17 digits).

    Returns:
        Path of the written file
    """
    path = os.path.join(directory, model_filename(stored.bus, stored.hour))
    atomic_write_text(path, json.dumps(model_to_dict(stored), indent=2) + "\n")
    return path


def read_model(path: str) -> StoredModel:
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno) from exc
    return model_from_dict(data)
