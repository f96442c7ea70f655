"""
UVC Voltage Risk - Input Formats
CSV readers for branches, buses, injection layouts and injection series
"""

import logging
import math
from typing import Callable, List, Sequence

import pandas as pd

from ..errors import InputError, UvcRiskError
from ..grid.layout import ROLES, ConstantElement, InjectionLayout, Provider, UncertainElement
from ..grid.network import Branch, Bus, Network
from ..uvc.series import InjectionSeries, series_from_frame

logger = logging.getLogger(__name__)

BRANCH_COLUMNS = ("from", "to", "r_pu", "x_pu")
BUS_COLUMNS = ("bus", "vmin_pu", "vmax_pu")
LAYOUT_COLUMNS = ("id", "role", "bus", "kappa", "p_fixed", "q_min", "q_max", "cost")
SERIES_COLUMNS = ("timestamp", "id", "true")


def _read_csv(path: str, required: Sequence[str], **kwargs) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, skipinitialspace=True, **kwargs)
    except FileNotFoundError:
        raise InputError("file not found", path=path) from None
    except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as exc:
        raise InputError(f"cannot parse CSV: {exc}", path=path) from exc
    frame.columns = [str(c).strip() for c in frame.columns]
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise InputError(f"missing columns: {', '.join(missing)}", path=path, line=1)
    return frame


def _rows(frame: pd.DataFrame, path: str, build: Callable) -> List:
    """Apply ``build`` to every row, reporting failures with the file line number."""
    items = []
    for position, (_, row) in enumerate(frame.iterrows()):
        line = position + 2
        try:
            items.append(build(row))
        except UvcRiskError as exc:
            raise InputError(str(exc), path=path, line=line) from exc
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad value: {exc}", path=path, line=line) from exc
    return items


def _number(value, default: float = None) -> float:
    if value is None or (isinstance(value, float) and math.isnan(value)) or value == "":
        if default is None:
            raise ValueError("missing number")
        return default
    return float(value)


def read_network(branches_path: str, buses_path: str, slack_bus: int = 1,
                 slack_voltage_pu: float = 1.0) -> Network:
    """
    Read a feeder from its branch and bus files.

    Args:
        branches_path: CSV with ``from,to,r_pu,x_pu``
        buses_path: CSV with ``bus,vmin_pu,vmax_pu``
        slack_bus: Id of the substation bus
        slack_voltage_pu: Slack voltage magnitude; stored squared

    Returns:
        Validated Network
    """
    branch_frame = _read_csv(branches_path, BRANCH_COLUMNS)
    bus_frame = _read_csv(buses_path, BUS_COLUMNS)
    branches = _rows(branch_frame, branches_path, lambda row: Branch(
        int(row["from"]), int(row["to"]), _number(row["r_pu"]), _number(row["x_pu"])))
    buses = _rows(bus_frame, buses_path, lambda row: Bus(
        int(row["bus"]), _number(row["vmin_pu"]), _number(row["vmax_pu"])))
    network = Network(buses=tuple(buses), slack_bus=int(slack_bus), v0=slack_voltage_pu ** 2,
                      branches=tuple(branches))
    logger.info("Loaded network with %d buses and %d branches", len(buses), len(branches))
    return network


def read_layout(path: str, base_mva: float = 1.0, default_cost: float = 20.0) -> InjectionLayout:
    """
    Read an injection layout; MW/Mvar columns are divided by ``base_mva``.

    For ``ugen``/``uload`` rows, ``p_fixed`` is the nominal rating used by the
    synthetic generator. A provider row without cost gets ``default_cost`` ($/Mvar).
    """
    frame = _read_csv(path, LAYOUT_COLUMNS, dtype={"id": str, "role": str})
    groups = {role: [] for role in ROLES}

    def build(row):
        role = str(row["role"]).strip()
        if role not in ROLES:
            raise ValueError(f"unknown role '{role}'")
        element_id = str(row["id"]).strip()
        bus = int(row["bus"])
        kappa = _number(row["kappa"], 0.0)
        p = _number(row["p_fixed"], 0.0) / base_mva
        if role in ("ugen", "uload"):
            element = UncertainElement(element_id, bus, kappa, rating=p)
        elif role in ("cgen", "cload"):
            element = ConstantElement(element_id, bus, kappa, p)
        else:
            # Cost is per Mvar; dispatch is in pu of base_mva
            element = Provider(element_id, bus, _number(row["q_min"]) / base_mva,
                               _number(row["q_max"]) / base_mva,
                               _number(row["cost"], default_cost) * base_mva, p)
        groups[role].append(element)

    _rows(frame, path, build)
    layout = InjectionLayout(uncertain_gens=groups["ugen"], uncertain_loads=groups["uload"],
                             constant_gens=groups["cgen"], constant_loads=groups["cload"],
                             providers=groups["provider"])
    logger.info("Loaded layout: %d uncertain gens, %d uncertain loads, %d providers",
                len(layout.uncertain_gens), len(layout.uncertain_loads), len(layout.providers))
    return layout


def read_series(path: str, layout: InjectionLayout, base_mva: float = 1.0) -> InjectionSeries:
    """Read the long-format series CSV for the uncertain elements of ``layout``."""
    frame = _read_csv(path, SERIES_COLUMNS, dtype={"id": str})
    for column in ("true", "predicted"):
        if column in frame.columns:
            values = pd.to_numeric(frame[column], errors="coerce")
            bad = values.isna() & frame[column].notna()
            if bad.any():
                line = int(bad.to_numpy().nonzero()[0][0]) + 2
                raise InputError(f"non-numeric '{column}' value", path=path, line=line)
            frame[column] = values
    stamps = pd.to_datetime(frame["timestamp"], errors="coerce")
    if stamps.isna().any():
        line = int(stamps.isna().to_numpy().nonzero()[0][0]) + 2
        raise InputError("unparseable timestamp", path=path, line=line)
    frame["timestamp"] = stamps
    try:
        series = series_from_frame(frame, layout.gen_ids, layout.load_ids, base_mva)
    except InputError as exc:
        raise InputError(str(exc), path=path) from exc
    logger.info("Loaded %d hourly records over %d days", len(series), len(series.days))
    return series
