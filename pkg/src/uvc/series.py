"""
UVC Voltage Risk - Injection Series
Hourly true and predicted outputs of uncertain generators and loads
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.model_selection import train_test_split

from ..errors import InputError, InsufficientDataError
from .predictor import baseline_point_predictor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InjectionSeries:
    """
    Aligned hourly history of uncertain injections (pu).

    Arrays are time-by-element, with columns in ``gen_ids`` / ``load_ids`` order.
    """

    timestamps: pd.DatetimeIndex
    gen_true: np.ndarray
    gen_pred: np.ndarray
    load_true: np.ndarray
    load_pred: np.ndarray
    gen_ids: Tuple[str, ...] = ()
    load_ids: Tuple[str, ...] = ()

    def __post_init__(self):
        timestamps = pd.DatetimeIndex(self.timestamps)
        object.__setattr__(self, "timestamps", timestamps)
        T = len(timestamps)
        for name, width in (("gen_true", len(self.gen_ids)), ("gen_pred", len(self.gen_ids)),
                            ("load_true", len(self.load_ids)), ("load_pred", len(self.load_ids))):
            values = np.array(getattr(self, name), dtype=float).reshape(T, width)
            if not np.all(np.isfinite(values)):
                raise InputError(f"{name} contains non-finite values")
            values.setflags(write=False)
            object.__setattr__(self, name, values)
        if np.any(self.gen_true < 0.0):
            raise InputError("generator outputs must be nonnegative")
        if not (timestamps.is_monotonic_increasing and timestamps.is_unique):
            raise InputError("timestamps must be strictly increasing")
        if T and not np.all((timestamps.minute == 0) & (timestamps.second == 0)
                            & (timestamps.microsecond == 0)):
            raise InputError("timestamps must be aligned to whole hours")

    def __len__(self) -> int:
        return len(self.timestamps)

    @property
    def hours(self) -> np.ndarray:
        return np.asarray(self.timestamps.hour)

    @property
    def days(self) -> pd.DatetimeIndex:
        """Distinct calendar days, oldest first."""
        return pd.DatetimeIndex(self.timestamps.normalize().unique())

    def take(self, mask) -> "InjectionSeries":
        """Subset of records selected by a boolean mask or index array."""
        return InjectionSeries(self.timestamps[mask], self.gen_true[mask], self.gen_pred[mask],
                               self.load_true[mask], self.load_pred[mask],
                               self.gen_ids, self.load_ids)

    def at_hour(self, hour: int) -> "InjectionSeries":
        return self.take(self.hours == hour)

    def select_days(self, days: Sequence) -> "InjectionSeries":
        wanted = pd.DatetimeIndex(days).normalize()
        return self.take(np.asarray(self.timestamps.normalize().isin(wanted)))

    def record(self, day, hour: int) -> int:
        """Row index of the record at ``day`` and ``hour``."""
        stamp = pd.Timestamp(day).normalize() + pd.Timedelta(hours=hour)
        try:
            return int(self.timestamps.get_loc(stamp))
        except KeyError:
            raise InsufficientDataError(f"no record at {stamp}") from None

    def records(self, days: Sequence, hour: int) -> np.ndarray:
        """Row indices of the records at ``hour`` on each of ``days``."""
        stamps = pd.DatetimeIndex(days).normalize() + pd.Timedelta(hours=hour)
        rows = self.timestamps.get_indexer(stamps)
        if np.any(rows < 0):
            raise InsufficientDataError(f"no record at {stamps[np.argmin(rows)]}")
        return rows


def split_by_days(series: InjectionSeries,
                  train_fraction: float = 0.7) -> Tuple[InjectionSeries, InjectionSeries]:
    """
    Chronological split: the first ``train_fraction`` of days train, the rest test.

    Args:
        series: Full history
        train_fraction: Share of days used for training

    Returns:
        Tuple of (training series, held-out series)
    """
    days = series.days
    try:
        train_days, test_days = train_test_split(np.arange(len(days)), train_size=train_fraction,
                                                 shuffle=False)
    except ValueError as exc:
        raise InsufficientDataError(f"cannot split {len(days)} days: {exc}") from exc
    logger.info("Split %d days into %d training and %d held-out days",
                len(days), len(train_days), len(test_days))
    return series.select_days(days[train_days]), series.select_days(days[test_days])


def _wide(frame: pd.DataFrame, column: str, ids: List[str]) -> pd.DataFrame:
    try:
        wide = frame.pivot(index="timestamp", columns="id", values=column)
    except ValueError as exc:
        raise InputError(f"duplicate (timestamp, id) records: {exc}") from exc
    missing = [i for i in ids if i not in wide.columns]
    if missing:
        raise InputError(f"series has no records for: {', '.join(missing)}")
    return wide.reindex(columns=ids)


def series_from_frame(frame: pd.DataFrame, gen_ids: Sequence[str], load_ids: Sequence[str],
                      base_mva: float = 1.0) -> InjectionSeries:
    """
    Build an InjectionSeries from the long ``timestamp,id,true[,predicted]`` format.

    Values are divided by ``base_mva``. When the ``predicted`` column is absent,
    the seasonal persistence predictor fills it in. Timestamps with an incomplete
    set of records are dropped.
    """
    gen_ids, load_ids = list(gen_ids), list(load_ids)
    ids = gen_ids + load_ids
    frame = frame[frame["id"].isin(ids)].copy()
    frame["timestamp"] = pd.to_datetime(frame["timestamp"])
    true = _wide(frame, "true", ids).sort_index()
    if "predicted" in frame.columns:
        pred = _wide(frame, "predicted", ids).reindex(true.index)
    else:
        logger.info("No predicted column; using seasonal persistence predictions")
        hourly = true.asfreq(pd.offsets.Hour())
        pred = pd.DataFrame({i: baseline_point_predictor(hourly[i].to_numpy()) for i in ids},
                            index=hourly.index).reindex(true.index)
    complete = true.notna().all(axis=1) & pred.notna().all(axis=1)
    dropped = int((~complete).sum())
    if dropped:
        logger.warning("Dropped %d timestamps with incomplete records", dropped)
    true, pred = true[complete] / base_mva, pred[complete] / base_mva
    return InjectionSeries(
        timestamps=true.index,
        gen_true=true[gen_ids].to_numpy(), gen_pred=pred[gen_ids].to_numpy(),
        load_true=true[load_ids].to_numpy(), load_pred=pred[load_ids].to_numpy(),
        gen_ids=tuple(gen_ids), load_ids=tuple(load_ids),
    )
