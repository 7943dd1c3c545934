"""Physical sub-models: setpoint, active households, space heating ARX,
hot water demand, and piping loss.

Lag-window conventions: windows are 1-d arrays ordered oldest to newest.
Exogenous windows include the current step as their last entry (filter
taps j = 0..n); autoregressive output windows hold past values only
(taps j = 1..n).  Predicted heat flows are clamped at zero: the physics
forbids negative delivered heat even though the ARX form does not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientLagsError
from .features import DAYS_PER_YEAR, GroundModelConfig
from .gates import (
    SeasonGatingNetwork,
    TimeGatingNetwork,
    season_gate_probs,
    time_gate_probs,
)


@dataclass(frozen=True, eq=False)
class SetpointModel:
    """Gated blend of per-context indoor temperature targets.

    ``temperatures`` has shape (contexts, day types): the target for each
    context on weekdays and weekend/holidays.
    """

    temperatures: np.ndarray
    gate: TimeGatingNetwork

    def __post_init__(self):
        t = np.asarray(self.temperatures, dtype=np.float64)
        if t.shape != (self.gate.n_contexts, 2):
            raise ValueError(f"temperatures must have shape ({self.gate.n_contexts}, 2)")
        if not np.all(np.isfinite(t)):
            raise ValueError("temperatures must be finite")
        object.__setattr__(self, "temperatures", t)


def setpoint_predict(m: SetpointModel, hour, day_type):
    """Expected setpoint temperature; a convex combination of the context targets."""
    probs = time_gate_probs(m.gate, hour, day_type)
    d_idx = np.asarray(day_type, dtype=np.int64) - 1
    per_context = np.moveaxis(m.temperatures[:, d_idx], 0, -1)
    value = np.sum(probs * per_context, axis=-1)
    return float(value) if np.isscalar(hour) else value


@dataclass(frozen=True, eq=False)
class ActiveHouseholdsModel:
    """Fraction of buildings still below their setpoint.

    The fraction factorizes into a season influence (levels ``season_levels``
    blended by ``season_gate``) and a time-of-day influence (``time_levels``
    of shape (contexts, day types) blended by ``time_gate``); all levels
    live in [0, 1], so the product does too.
    """

    season_levels: np.ndarray
    time_levels: np.ndarray
    season_gate: SeasonGatingNetwork
    time_gate: TimeGatingNetwork

    def __post_init__(self):
        eta = np.asarray(self.season_levels, dtype=np.float64)
        mu = np.asarray(self.time_levels, dtype=np.float64)
        if eta.shape != (self.season_gate.n_contexts,):
            raise ValueError("season_levels must have one entry per season context")
        if mu.shape != (self.time_gate.n_contexts, 2):
            raise ValueError(f"time_levels must have shape ({self.time_gate.n_contexts}, 2)")
        if np.any(eta < 0) or np.any(eta > 1) or np.any(mu < 0) or np.any(mu > 1):
            raise ValueError("activity levels must lie in [0, 1]")
        object.__setattr__(self, "season_levels", eta)
        object.__setattr__(self, "time_levels", mu)


def active_fraction(m: ActiveHouseholdsModel, season, hour, day_type):
    """Product of the season and time-of-day activity influences, in [0, 1]."""
    p_season = season_gate_probs(m.season_gate, season)
    season_part = np.sum(p_season * m.season_levels, axis=-1)
    p_time = time_gate_probs(m.time_gate, hour, day_type)
    d_idx = np.asarray(day_type, dtype=np.int64) - 1
    levels = np.moveaxis(m.time_levels[:, d_idx], 0, -1)
    time_part = np.sum(p_time * levels, axis=-1)
    value = season_part * time_part
    return float(value) if np.isscalar(hour) else value


@dataclass(frozen=True, eq=False)
class SpaceHeatingARX:
    """First-order-by-default ARX for aggregated space heating.

    Output lags are filtered by ``ar_coeffs`` (taps 1..n_a); the weather
    drives (setpoint-ambient difference, radiance, wind times difference)
    are filtered by their ``*_coeffs`` (taps 0..n_b) and scaled by the
    non-negative ``gains``.  Stability of the AR polynomial is not
    enforced.
    """

    ar_coeffs: np.ndarray
    temp_coeffs: np.ndarray
    radiance_coeffs: np.ndarray
    wind_coeffs: np.ndarray
    gains: np.ndarray

    def __post_init__(self):
        for name in ("ar_coeffs", "temp_coeffs", "radiance_coeffs", "wind_coeffs", "gains"):
            arr = np.atleast_1d(np.asarray(getattr(self, name), dtype=np.float64))
            object.__setattr__(self, name, arr)
        if self.gains.shape != (3,):
            raise ValueError("gains must hold exactly (temperature, radiance, wind) entries")
        if np.any(self.gains < 0):
            raise ValueError("gains must be non-negative")


def _filter_exog(coeffs: np.ndarray, window: np.ndarray, label: str) -> float:
    """Apply filter taps 0..n to a newest-last window including the current step."""
    n = len(coeffs)
    window = np.asarray(window, dtype=np.float64)
    if len(window) < n:
        raise InsufficientLagsError(f"{label} window needs {n} values, got {len(window)}")
    recent = window[-n:]
    # tap j multiplies the value j steps back
    return float(np.dot(coeffs, recent[::-1]))


def _filter_auto(coeffs: np.ndarray, window: np.ndarray, label: str) -> float:
    """Apply AR taps 1..n to a newest-last window of past outputs."""
    n = len(coeffs)
    window = np.asarray(window, dtype=np.float64)
    if len(window) < n:
        raise InsufficientLagsError(f"{label} window needs {n} past values, got {len(window)}")
    recent = window[-n:]
    return float(np.dot(coeffs, recent[::-1]))


def space_heating_predict(
    m: SpaceHeatingARX,
    lagged_output: np.ndarray,
    setpoint_window: np.ndarray,
    ambient_window: np.ndarray,
    radiance_window: np.ndarray,
    wind_window: np.ndarray,
    active: float,
) -> float:
    """One-step space heating prediction, clamped at zero.

    The wind drive forms the per-lag product V_w * (setpoint - ambient)
    before filtering.  ``active`` is the current-step fraction and scales
    all weather drives.
    """
    setpoint_window = np.asarray(setpoint_window, dtype=np.float64)
    ambient_window = np.asarray(ambient_window, dtype=np.float64)
    wind_window = np.asarray(wind_window, dtype=np.float64)
    if not len(setpoint_window) == len(ambient_window) == len(wind_window):
        raise InsufficientLagsError("setpoint, ambient, and wind windows must have equal length")
    diff = setpoint_window - ambient_window
    wind_drive_window = wind_window * diff

    ar_part = _filter_auto(m.ar_coeffs, lagged_output, "space output")
    drive = (
        m.gains[0] * _filter_exog(m.temp_coeffs, diff, "setpoint-ambient")
        + m.gains[1] * _filter_exog(m.radiance_coeffs, radiance_window, "radiance")
        + m.gains[2] * _filter_exog(m.wind_coeffs, wind_drive_window, "wind")
    )
    return max(0.0, ar_part + active * drive)


@dataclass(frozen=True, eq=False)
class HotWaterModel:
    """Gated activity demand with an annual cosine correction.

    ``nominal_demand`` holds the maximum nominal draw per activity (kW);
    ``seasonal_gain`` scales the winter/summer swing and ``peak_day`` is
    the day of year of maximum demand.
    """

    nominal_demand: np.ndarray
    gate: TimeGatingNetwork
    seasonal_gain: float = 0.2
    peak_day: float = 15.0

    def __post_init__(self):
        q = np.asarray(self.nominal_demand, dtype=np.float64)
        if q.shape != (self.gate.n_contexts,):
            raise ValueError("nominal_demand must have one entry per activity")
        if np.any(q < 0):
            raise ValueError("nominal_demand must be non-negative")
        if self.seasonal_gain < 0:
            raise ValueError("seasonal_gain must be non-negative")
        object.__setattr__(self, "nominal_demand", q)


def user_demand(m: HotWaterModel, hour, day_type):
    """Gated blend of the per-activity nominal demands."""
    probs = time_gate_probs(m.gate, hour, day_type)
    value = np.sum(probs * m.nominal_demand, axis=-1)
    return float(value) if np.isscalar(hour) else value


def seasonal_demand_factor(m: HotWaterModel, day_of_year):
    d = np.asarray(day_of_year, dtype=np.float64)
    value = 1.0 + m.seasonal_gain * np.cos(2.0 * np.pi * (d - m.peak_day) / DAYS_PER_YEAR)
    return float(value) if np.isscalar(day_of_year) else value


def hot_water_predict(m: HotWaterModel, hour, day_type, day_of_year):
    """Hot water load: user demand times the annual correction factor."""
    value = user_demand(m, hour, day_type) * seasonal_demand_factor(m, day_of_year)
    return float(value) if np.isscalar(hour) else value


@dataclass(frozen=True, eq=False)
class PipingLossModel:
    """ARX for transmission loss driven by the pipe-to-ground temperature gap."""

    ar_coeffs: np.ndarray
    drive_coeffs: np.ndarray
    gain: float
    ground: GroundModelConfig = GroundModelConfig()

    def __post_init__(self):
        for name in ("ar_coeffs", "drive_coeffs"):
            arr = np.atleast_1d(np.asarray(getattr(self, name), dtype=np.float64))
            object.__setattr__(self, name, arr)
        if self.gain < 0:
            raise ValueError("gain must be non-negative")


def piping_loss_predict(
    m: PipingLossModel,
    lagged_output: np.ndarray,
    temp_diff_window: np.ndarray,
) -> float:
    """One-step piping loss prediction, clamped at zero.

    ``temp_diff_window`` holds equivalent-pipe minus ground temperature,
    newest last, current step included.
    """
    ar_part = _filter_auto(m.ar_coeffs, lagged_output, "loss output")
    drive = m.gain * _filter_exog(m.drive_coeffs, temp_diff_window, "pipe-ground difference")
    return max(0.0, ar_part + drive)
