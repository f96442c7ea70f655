"""
UVC Voltage Risk - Point Predictor
Seasonal persistence forecast used when no external predictions are supplied
"""

import numpy as np

from ..errors import InsufficientDataError

SEASON_HOURS = 24


def baseline_point_predictor(series, horizon: int = 0) -> np.ndarray:
    """
    Seasonal persistence: the prediction for hour t is the value at t - 24 h.

    Args:
        series: Hourly values, oldest first, covering at least 48 hours
        horizon: Number of hours to forecast past the end of the series

    Returns:
        Array of length ``len(series) + horizon``. The first 24 entries have no
        lagged value and are NaN; entries past the end repeat the last observed day.
    """
    values = np.asarray(series, dtype=float)
    if values.ndim != 1 or values.size < 2 * SEASON_HOURS:
        raise InsufficientDataError(
            f"persistence prediction needs at least {2 * SEASON_HOURS} hourly values, got {values.size}")
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    n = values.size
    predictions = np.full(n + horizon, np.nan)
    predictions[SEASON_HOURS:n] = values[:n - SEASON_HOURS]
    for t in range(n, n + horizon):
        predictions[t] = values[n - SEASON_HOURS + (t - n) % SEASON_HOURS]
    return predictions
