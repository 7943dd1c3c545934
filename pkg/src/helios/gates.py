"""Softmax gating networks over hour-of-day harmonics and the season index.

Every softmax in the package routes through :func:`log_softmax_stable`;
gate outputs feed likelihood terms raised to possibility-weight exponents,
so underflow here would silently corrupt the posterior.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteInputError
from .features import FourierConfig, fourier_features

N_DAY_TYPES = 2


def log_softmax_stable(z: np.ndarray) -> np.ndarray:
    """Log-probabilities of a softmax over the last axis, max-subtracted.

    Safe for logit magnitudes up to at least 1e3; adding a constant to all
    logits leaves the output unchanged.
    """
    z = np.asarray(z, dtype=np.float64)
    if not np.all(np.isfinite(z)):
        raise NonFiniteInputError("softmax input contains NaN or infinity")
    shifted = z - np.max(z, axis=-1, keepdims=True)
    return shifted - np.log(np.sum(np.exp(shifted), axis=-1, keepdims=True))


def softmax_stable(z: np.ndarray) -> np.ndarray:
    return np.exp(log_softmax_stable(z))


@dataclass(frozen=True, eq=False)
class TimeGatingNetwork:
    """Per-context, per-day-type linear gate on hour harmonics.

    ``weights`` has shape (contexts, day types, 2 * harmonics); the gate
    logit for context c on day type d at hour h is the dot product of
    ``weights[c, d]`` with the Fourier features of h.
    """

    weights: np.ndarray
    fourier: FourierConfig = FourierConfig()

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 3 or w.shape[1] != N_DAY_TYPES or w.shape[2] != self.fourier.dim:
            raise ValueError(
                f"weights must have shape (contexts, {N_DAY_TYPES}, {self.fourier.dim}), "
                f"got {w.shape}"
            )
        if w.shape[0] < 1:
            raise ValueError("need at least one context")
        object.__setattr__(self, "weights", w)

    @property
    def n_contexts(self) -> int:
        return self.weights.shape[0]

    @staticmethod
    def zeros(n_contexts: int, fourier: FourierConfig = FourierConfig()) -> "TimeGatingNetwork":
        return TimeGatingNetwork(
            weights=np.zeros((n_contexts, N_DAY_TYPES, fourier.dim)), fourier=fourier
        )


def time_gate_logits(net: TimeGatingNetwork, hour, day_type) -> np.ndarray:
    """Gate logits for scalar or array (hour, day_type); contexts on the last axis."""
    r = fourier_features(hour, net.fourier)
    d_idx = np.asarray(day_type, dtype=np.int64) - 1
    # weights gathered per sample day type: (..., contexts, 2P)
    w = net.weights[:, d_idx, :]  # (contexts, ..., 2P)
    w = np.moveaxis(w, 0, -2)
    return np.einsum("...f,...cf->...c", r, w)


def time_gate_probs(net: TimeGatingNetwork, hour, day_type) -> np.ndarray:
    """Context probability simplex at a given hour and day type."""
    return softmax_stable(time_gate_logits(net, hour, day_type))


@dataclass(frozen=True, eq=False)
class SeasonGatingNetwork:
    """Per-context affine gate on the season index."""

    intercepts: np.ndarray
    slopes: np.ndarray

    def __post_init__(self):
        i = np.asarray(self.intercepts, dtype=np.float64)
        s = np.asarray(self.slopes, dtype=np.float64)
        if i.shape != s.shape or i.ndim != 1:
            raise ValueError("intercepts and slopes must be 1-d and the same length")
        if len(i) < 1:
            raise ValueError("need at least one context")
        object.__setattr__(self, "intercepts", i)
        object.__setattr__(self, "slopes", s)

    @property
    def n_contexts(self) -> int:
        return len(self.intercepts)

    @staticmethod
    def zeros(n_contexts: int) -> "SeasonGatingNetwork":
        return SeasonGatingNetwork(np.zeros(n_contexts), np.zeros(n_contexts))


def season_gate_logits(net: SeasonGatingNetwork, season) -> np.ndarray:
    s = np.asarray(season, dtype=np.float64)
    return net.intercepts + net.slopes * s[..., None]


def season_gate_probs(net: SeasonGatingNetwork, season) -> np.ndarray:
    """Context probability simplex at a given season index."""
    return softmax_stable(season_gate_logits(net, season))
