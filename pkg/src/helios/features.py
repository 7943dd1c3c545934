"""Deterministic feature transforms shared by every model component.

All functions are pure and accept scalars or numpy arrays where noted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientHistoryError

HOURS_PER_DAY = 24.0
DAYS_PER_YEAR = 365.0


@dataclass(frozen=True)
class FourierConfig:
    """Harmonic encoding of the hour of day.

    ``harmonics`` sine/cosine pairs on a fixed 24 h period; the output
    feature vector has dimension ``2 * harmonics``.
    """

    harmonics: int = 3

    def __post_init__(self):
        if self.harmonics < 1:
            raise ValueError("harmonics must be >= 1")

    @property
    def dim(self) -> int:
        return 2 * self.harmonics


@dataclass(frozen=True)
class GroundModelConfig:
    """Depth-damped annual sinusoid for the soil temperature around pipes.

    ``mean_ambient`` and ``amplitude`` are the annual mean and half the
    peak-to-peak swing of the ambient temperature; ``phase_shift_days``
    is the day of year of the ambient minimum; ``diffusivity`` is the
    ground thermal diffusivity in m^2/day.
    """

    pipe_depth: float = 1.0
    mean_ambient: float = 10.0
    amplitude: float = 8.0
    phase_shift_days: float = 15.0
    diffusivity: float = 0.07

    def __post_init__(self):
        if self.pipe_depth < 0:
            raise ValueError("pipe_depth must be >= 0")
        if self.amplitude < 0:
            raise ValueError("amplitude must be >= 0")
        if self.diffusivity <= 0:
            raise ValueError("diffusivity must be > 0")


def fourier_features(hour, cfg: FourierConfig = FourierConfig()) -> np.ndarray:
    """Map hour of day to interleaved [sin, cos] harmonics on a 24 h period.

    ``hour`` may be a scalar or an array; the harmonic axis is appended
    last, giving shape ``(..., 2 * harmonics)``.
    """
    h = np.asarray(hour, dtype=np.float64)
    p = np.arange(1, cfg.harmonics + 1, dtype=np.float64)
    angle = 2.0 * np.pi * p * h[..., None] / HOURS_PER_DAY
    out = np.empty(h.shape + (cfg.dim,), dtype=np.float64)
    out[..., 0::2] = np.sin(angle)
    out[..., 1::2] = np.cos(angle)
    return out


def season_index(ambient_history: np.ndarray, window: int) -> float:
    """Moving-average season indicator from past ambient temperatures.

    Averages the most recent ``window`` samples of ``ambient_history``
    (newest last); this is the season value for the step following the
    history.  Raises :class:`InsufficientHistoryError` when the history
    is shorter than the window.
    """
    hist = np.asarray(ambient_history, dtype=np.float64)
    if window < 1:
        raise ValueError("window must be >= 1")
    if len(hist) < window:
        raise InsufficientHistoryError(
            f"need {window} past samples, have {len(hist)}"
        )
    return float(np.mean(hist[-window:]))


def season_series(ambient: np.ndarray, window: int) -> np.ndarray:
    """Season indicator for every row of an ambient temperature series.

    Entry ``k`` averages samples ``k - window .. k - 1``; the first
    ``window`` entries have no valid value and are returned as NaN.
    Callers drop this warm-up span before fitting or predicting.
    """
    t = np.asarray(ambient, dtype=np.float64)
    if window < 1:
        raise ValueError("window must be >= 1")
    out = np.full(len(t), np.nan)
    if len(t) > window:
        csum = np.concatenate([[0.0], np.cumsum(t)])
        # entry k averages t[k-window:k]
        out[window:] = (csum[window:len(t)] - csum[0:len(t) - window]) / window
    return out


def ground_temperature(day_of_year, cfg: GroundModelConfig) -> np.ndarray | float:
    """Soil temperature at pipe depth for a given day of year.

    Annual sinusoid damped and phase-lagged with depth; 365-day periodic
    in ``day_of_year``.  Accepts scalars or arrays.
    """
    d = np.asarray(day_of_year, dtype=np.float64)
    damping = cfg.pipe_depth * np.sqrt(np.pi / (DAYS_PER_YEAR * cfg.diffusivity))
    value = cfg.mean_ambient - cfg.amplitude * np.exp(-damping) * np.cos(
        2.0 * np.pi * (d - cfg.phase_shift_days) / DAYS_PER_YEAR - damping
    )
    return float(value) if np.isscalar(day_of_year) else value


def equivalent_pipe_temperature(supply, return_) -> np.ndarray | float:
    """Midpoint of supply and return temperatures."""
    t_s = np.asarray(supply, dtype=np.float64)
    t_r = np.asarray(return_, dtype=np.float64)
    value = (t_s + t_r) / 2.0
    if np.isscalar(supply) and np.isscalar(return_):
        return float(value)
    return value
