"""
UVC Voltage Risk - Synthetic Data
Bimodal PV and noisy load series with day-ahead forecasts for any injection layout
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from ..errors import InputError
from ..grid.layout import InjectionLayout
from ..storage.atomic import atomic_write_csv
from ..uvc.series import InjectionSeries
from .scenarios import spawn_generators

logger = logging.getLogger(__name__)

CLEAR_SKY = (18.0, 2.0)
CLOUDY_SKY = (3.0, 5.0)
LOAD_NOISE = 0.05
HOURS_PER_DAY = 24
# Leaves room for about 200,000 days inside the nanosecond timestamp range
TEST_STREAM_START = "1700-01-01"


@dataclass(frozen=True)
class WeatherModel:
    """
    Daily weather regime and forecast skill.

    A day is clear with ``clear_probability``. The forecast calls a clear day
    clear with probability ``clear_skill`` and a cloudy day cloudy with
    probability ``cloudy_skill``.
    """

    clear_probability: float = 0.7
    clear_skill: float = 0.95
    cloudy_skill: float = 0.6

    def __post_init__(self):
        for name in ("clear_probability", "clear_skill", "cloudy_skill"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InputError(f"{name} must lie in [0, 1], got {value}")

    def cloudy_given_clear_forecast(self) -> float:
        """Share of clear forecasts that turn out cloudy."""
        missed = (1.0 - self.clear_probability) * (1.0 - self.cloudy_skill)
        called = self.clear_probability * self.clear_skill + missed
        return missed / called if called > 0.0 else 0.0


DEFAULT_WEATHER = WeatherModel()


def clear_sky_envelope(hours) -> np.ndarray:
    """Normalized PV envelope: sin(π(h-6)/12) between 06:00 and 18:00, zero otherwise."""
    h = np.asarray(hours, dtype=float)
    return np.maximum(0.0, np.sin(np.pi * (h - 6.0) / 12.0))


def load_profile(hours) -> np.ndarray:
    """Smooth residential profile with a morning bump and an evening peak near 1."""
    h = np.asarray(hours, dtype=float)
    shape = 0.6 + 0.15 * np.exp(-((h - 9.0) / 2.5) ** 2) + 0.4 * np.exp(-((h - 19.0) / 3.0) ** 2)
    return shape


def _beta_mean(shape) -> float:
    return shape[0] / (shape[0] + shape[1])


@dataclass(frozen=True)
class _Draws:
    """Per-day and per-hour random factors shared by every element."""

    clear: np.ndarray
    factor: np.ndarray
    factor_pred: np.ndarray
    jitter: np.ndarray


def _draw(layout: InjectionLayout, days: int, seed: int, weather: WeatherModel) -> _Draws:
    if days < 1:
        raise InputError(f"need at least one day, got {days}")
    rng_weather, clouds, noise = spawn_generators(seed, 3)
    clear = rng_weather.random(days) < weather.clear_probability
    hit = rng_weather.random(days)
    forecast_clear = np.where(clear, hit < weather.clear_skill, hit >= weather.cloudy_skill)
    shape = (days, HOURS_PER_DAY)
    factor = np.where(clear[:, None], clouds.beta(*CLEAR_SKY, size=shape),
                      clouds.beta(*CLOUDY_SKY, size=shape))
    factor_pred = np.where(forecast_clear, _beta_mean(CLEAR_SKY), _beta_mean(CLOUDY_SKY))
    jitter = 1.0 + LOAD_NOISE * noise.standard_normal(
        (len(layout.uncertain_loads), days, HOURS_PER_DAY))
    return _Draws(clear, factor, factor_pred[:, None], jitter)


def _timestamps(start: str, days: int) -> pd.DatetimeIndex:
    try:
        return pd.Timestamp(start).normalize() + pd.to_timedelta(
            np.arange(days * HOURS_PER_DAY), unit="h")
    except (ValueError, OverflowError) as exc:
        raise InputError(f"cannot date {days} days from {start}: {exc}") from exc


def generate_synthetic_series(layout: InjectionLayout, days: int, seed: int = 0,
                              start: str = "2024-01-01", base_mva: float = 1.0,
                              weather: WeatherModel = DEFAULT_WEATHER) -> pd.DataFrame:
    """
    Synthesize hourly true and predicted injections for the uncertain elements.

    Each day is clear or cloudy per ``weather``. Hourly PV is rating ×
    clear-sky envelope × a cloud factor drawn from Beta(18, 2) on clear days
    and Beta(3, 5) on cloudy days, shared by all units. The forecast names a
    regime and predicts that regime's mean factor. Loads are rating × daily
    profile × (1 + 0.05·N(0, 1)) and are forecast by the profile itself.

    Args:
        layout: Injection layout; element ratings set the scale
        days: Number of days
        seed: Root seed
        start: First day
        base_mva: Converts pu ratings back to MW
        weather: Regime probabilities and forecast skill

    Returns:
        Long-format frame with columns timestamp, id, true, predicted (MW)
    """
    draws = _draw(layout, days, seed, weather)
    hours = np.arange(HOURS_PER_DAY)
    envelope = clear_sky_envelope(hours)
    profile = load_profile(hours)
    timestamps = _timestamps(start, days)
    shape = (days, HOURS_PER_DAY)

    frames = []
    for gen in layout.uncertain_gens:
        scale = gen.rating * base_mva * envelope
        frames.append(pd.DataFrame({"timestamp": timestamps, "id": gen.id,
                                    "true": (scale * draws.factor).ravel(),
                                    "predicted": np.broadcast_to(scale * draws.factor_pred,
                                                                 shape).ravel()}))
    for k, load in enumerate(layout.uncertain_loads):
        scale = load.rating * base_mva * profile
        frames.append(pd.DataFrame({"timestamp": timestamps, "id": load.id,
                                    "true": (scale * draws.jitter[k]).ravel(),
                                    "predicted": np.broadcast_to(scale, shape).ravel()}))
    frame = pd.concat(frames, ignore_index=True) if frames else \
        pd.DataFrame(columns=["timestamp", "id", "true", "predicted"])
    logger.info("Synthesized %d days for %d elements (%d clear days, seed %d)", days,
                len(frames), int(draws.clear.sum()), seed)
    return frame.sort_values(["timestamp"], kind="stable").reset_index(drop=True)


def synthetic_injections(layout: InjectionLayout, days: int, seed: int = 0,
                         hours: Optional[Sequence[int]] = None, start: str = "2024-01-01",
                         weather: WeatherModel = DEFAULT_WEATHER) -> InjectionSeries:
    """
    The same draws as :func:`generate_synthetic_series`, in pu and restricted to ``hours``.

    Records at a kept hour match the frame's records at that hour divided by
    the base (up to rounding), so long test streams skip the long format.
    """
    draws = _draw(layout, days, seed, weather)
    hours = np.arange(HOURS_PER_DAY) if hours is None else np.array(sorted(set(hours)), dtype=int)
    if hours.size == 0 or hours.min() < 0 or hours.max() >= HOURS_PER_DAY:
        raise InputError(f"hours must be a nonempty subset of 0..23, got {hours.tolist()}")
    envelope = clear_sky_envelope(hours)
    profile = load_profile(hours)
    rows = (np.arange(days)[:, None] * HOURS_PER_DAY + hours[None, :]).ravel()
    timestamps = _timestamps(start, days)[rows]

    def gen_columns(factor):
        return np.column_stack([(gen.rating * envelope * factor).ravel()
                                for gen in layout.uncertain_gens]) \
            if layout.uncertain_gens else np.zeros((rows.size, 0))

    factor = draws.factor[:, hours]
    factor_pred = np.broadcast_to(draws.factor_pred, factor.shape)
    loads = layout.uncertain_loads
    load_true = np.column_stack([(load.rating * profile * draws.jitter[k][:, hours]).ravel()
                                 for k, load in enumerate(loads)]) \
        if loads else np.zeros((rows.size, 0))
    load_pred = np.column_stack([np.broadcast_to(load.rating * profile, factor.shape).ravel()
                                 for load in loads]) if loads else np.zeros((rows.size, 0))
    logger.info("Synthesized %d days at %d hours (%d clear days, seed %d)", days, hours.size,
                int(draws.clear.sum()), seed)
    return InjectionSeries(timestamps, gen_columns(factor), gen_columns(factor_pred),
                           load_true, load_pred,
                           tuple(g.id for g in layout.uncertain_gens),
                           tuple(load.id for load in loads))


def write_series(frame: pd.DataFrame, path: str) -> str:
    out = frame.copy()
    out["timestamp"] = pd.to_datetime(out["timestamp"]).dt.strftime("%Y-%m-%dT%H:%M:%S")
    return atomic_write_csv(path, out, float_format="%.10g", index=False)
