"""Composite heat-load model: decomposed prediction, forecasting, residual
targets, priors, and model-file round-tripping.

The total load is always emitted as the sum of the three component
predictions, so the decomposition identity holds constructively.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .contexts import ContextSets, context_sets_from_dict, context_sets_to_dict
from .data import Dataset
from .errors import (
    DegenerateDataError,
    InsufficientHistoryError,
    MissingExogenousError,
    ModelIoError,
    SchemaVersionMismatchError,
)
from .features import (
    GroundModelConfig,
    FourierConfig,
    equivalent_pipe_temperature,
    ground_temperature,
    season_series,
)
from .components import (
    ActiveHouseholdsModel,
    HotWaterModel,
    PipingLossModel,
    SetpointModel,
    SpaceHeatingARX,
    active_fraction,
    hot_water_predict,
    setpoint_predict,
)
from .gates import SeasonGatingNetwork, TimeGatingNetwork

MODEL_SCHEMA_VERSION = 1

TEACHER_FORCED = "teacher_forced"
RECURSIVE = "recursive"

DEFAULT_SEASON_WINDOW = 24 * 90


@dataclass(frozen=True)
class Prior:
    """One prior: ``normal`` or ``half_normal`` with location and scale.

    ``half_normal(loc, scale)`` is a normal truncated to the parameter's
    support; the truncation normalizer is constant in the parameters and
    is omitted from log densities.
    """

    family: str
    loc: float
    scale: float

    def __post_init__(self):
        if self.family not in ("normal", "half_normal"):
            raise ValueError(f"unknown prior family {self.family!r}")
        if self.scale <= 0:
            raise ValueError("prior scale must be positive")

    def log_density(self, value: float) -> float:
        z = (value - self.loc) / self.scale
        return -0.5 * np.log(2.0 * np.pi) - np.log(self.scale) - 0.5 * z * z


@dataclass(frozen=True)
class PriorSpec:
    """Priors for every parameter block, keyed by context name where needed."""

    gate: Prior
    setpoint_by_context: dict[str, Prior]
    setpoint_default: Prior
    season_level_by_context: dict[str, Prior]
    season_level_default: Prior
    time_level_by_context: dict[str, Prior]
    time_level_default: Prior
    gain: Prior
    arx_coefficient: Prior
    nominal_demand: Prior
    seasonal_gain: Prior
    noise_scale: Prior

    def setpoint_prior(self, context_name: str) -> Prior:
        return self.setpoint_by_context.get(context_name, self.setpoint_default)

    def season_level_prior(self, context_name: str) -> Prior:
        return self.season_level_by_context.get(context_name, self.season_level_default)

    def time_level_prior(self, context_name: str) -> Prior:
        return self.time_level_by_context.get(context_name, self.time_level_default)


def default_priors() -> PriorSpec:
    """Shipped priors: weakly informative gates, comfort/setback targets
    around 20 and 16 C, near-zero hot-season activity, near-full cold-season
    activity, and a seasonal hot-water swing around 20 percent."""
    return PriorSpec(
        gate=Prior("normal", 0.0, 2.0),
        setpoint_by_context={
            "setback": Prior("normal", 16.0, 2.0),
            "comfort": Prior("normal", 20.0, 2.0),
        },
        setpoint_default=Prior("normal", 18.0, 2.0),
        season_level_by_context={
            "hot": Prior("half_normal", 0.0, 0.1),
            "cold": Prior("half_normal", 1.0, 0.1),
        },
        season_level_default=Prior("half_normal", 0.5, 0.2),
        time_level_by_context={
            "setback": Prior("half_normal", 0.2, 0.2),
            "comfort": Prior("half_normal", 0.8, 0.2),
        },
        time_level_default=Prior("half_normal", 0.5, 0.2),
        gain=Prior("half_normal", 0.0, 10.0),
        arx_coefficient=Prior("half_normal", 0.0, 1.0),
        nominal_demand=Prior("half_normal", 0.0, 10.0),
        seasonal_gain=Prior("half_normal", 0.2, 0.05),
        noise_scale=Prior("half_normal", 0.0, 10.0),
    )


@dataclass(frozen=True, eq=False)
class HeliosModel:
    """All component models plus the observation noise scale."""

    setpoint: SetpointModel
    active: ActiveHouseholdsModel
    space: SpaceHeatingARX
    hot_water: HotWaterModel
    loss: PipingLossModel
    noise_scale: float
    contexts: ContextSets
    season_window: int = DEFAULT_SEASON_WINDOW
    priors: PriorSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.noise_scale <= 0:
            raise ValueError("noise_scale must be positive")
        if self.season_window < 1:
            raise ValueError("season_window must be >= 1")

    @property
    def max_lag(self) -> int:
        return max(
            len(self.space.ar_coeffs),
            len(self.space.temp_coeffs) - 1,
            len(self.space.radiance_coeffs) - 1,
            len(self.space.wind_coeffs) - 1,
            len(self.loss.ar_coeffs),
            len(self.loss.drive_coeffs) - 1,
        )

    @property
    def warmup(self) -> int:
        """Rows at the head of a dataset unusable for fitting or prediction."""
        return max(self.season_window, self.max_lag)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Per-step component predictions; total is their sum by construction."""

    timestamp: np.ndarray
    space: np.ndarray
    hot_water: np.ndarray
    loss: np.ndarray
    total: np.ndarray

    @staticmethod
    def from_components(timestamp, space, hot_water, loss) -> "Decomposition":
        space = np.asarray(space, dtype=np.float64)
        hot_water = np.asarray(hot_water, dtype=np.float64)
        loss = np.asarray(loss, dtype=np.float64)
        return Decomposition(
            timestamp=np.asarray(timestamp, dtype=np.int64),
            space=space,
            hot_water=hot_water,
            loss=loss,
            total=space + hot_water + loss,
        )

    def __len__(self) -> int:
        return len(self.total)


@dataclass(frozen=True, eq=False)
class PredictionInputs:
    """Per-row driver series shared by target computation and prediction."""

    first: int
    season: np.ndarray
    setpoint: np.ndarray
    active: np.ndarray
    hot_water: np.ndarray
    setpoint_minus_ambient: np.ndarray
    radiance: np.ndarray
    wind_drive: np.ndarray
    pipe_ground_diff: np.ndarray


def prediction_inputs(m: HeliosModel, ds: Dataset) -> PredictionInputs:
    """Evaluate every non-autoregressive driver over the dataset rows.

    The first ``m.warmup`` rows have no valid season value; the active
    fraction there is evaluated against a padded season purely to keep
    arrays aligned and is never used.
    """
    if ds.has_gaps:
        raise DegenerateDataError("dataset has gaps; lagged models need contiguous rows")
    n = len(ds)
    first = m.warmup
    if n <= first:
        raise InsufficientHistoryError(
            f"need more than {first} rows (season warm-up plus lags), have {n}"
        )
    season = season_series(ds.ambient_temperature, m.season_window)
    season_filled = np.where(np.isfinite(season), season, season[first])

    hours = ds.hour.astype(np.float64)
    tset = setpoint_predict(m.setpoint, hours, ds.day_type)
    act = active_fraction(m.active, season_filled, hours, ds.day_type)
    qhw = hot_water_predict(m.hot_water, hours, ds.day_type, ds.day_of_year)
    diff = tset - ds.ambient_temperature
    wind_drive = ds.wind_speed * diff
    t_sr = equivalent_pipe_temperature(ds.supply_temperature, ds.return_temperature)
    t_g = ground_temperature(ds.day_of_year, m.loss.ground)
    return PredictionInputs(
        first=first,
        season=season_filled,
        setpoint=np.asarray(tset, dtype=np.float64),
        active=np.asarray(act, dtype=np.float64),
        hot_water=np.asarray(qhw, dtype=np.float64),
        setpoint_minus_ambient=diff,
        radiance=ds.global_radiance,
        wind_drive=wind_drive,
        pipe_ground_diff=t_sr - t_g,
    )


def _exog_filter_series(coeffs: np.ndarray, x: np.ndarray, first: int) -> np.ndarray:
    """Taps 0..n over rows [first, N): entry k-first is sum_j c_j x[k-j]."""
    n = len(x)
    out = np.zeros(n - first)
    for j, c in enumerate(coeffs):
        out += c * x[first - j:n - j]
    return out


def _space_drive(m: HeliosModel, inp: PredictionInputs) -> np.ndarray:
    """Weather drive of the space ARX over rows [first, N), before the
    active-fraction scaling."""
    first = inp.first
    sp = m.space
    return (
        sp.gains[0] * _exog_filter_series(sp.temp_coeffs, inp.setpoint_minus_ambient, first)
        + sp.gains[1] * _exog_filter_series(sp.radiance_coeffs, inp.radiance, first)
        + sp.gains[2] * _exog_filter_series(sp.wind_coeffs, inp.wind_drive, first)
    )


def residual_targets(m: HeliosModel, ds: Dataset) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Component targets from the heat balance under the current parameters.

    Each target is the measured load minus the other two components'
    predictions, floored at zero.  Component predictions are rolled
    forward sequentially, feeding the just-computed targets back into the
    autoregressive lags (zero lag seed before the warm-up boundary).

    Returns (space, hot_water, loss) arrays aligned with ``ds``; rows
    before the warm-up boundary are zero.
    """
    inp = prediction_inputs(m, ds)
    n = len(ds)
    first = inp.first
    q = ds.heat_load

    drive_space = _space_drive(m, inp)
    drive_loss = m.loss.gain * _exog_filter_series(m.loss.drive_coeffs, inp.pipe_ground_diff, first)

    a1 = m.space.ar_coeffs
    a2 = m.loss.ar_coeffs
    tgt_space = np.zeros(n)
    tgt_hw = np.zeros(n)
    tgt_loss = np.zeros(n)
    for k in range(first, n):
        ar_space = sum(a1[j] * tgt_space[k - 1 - j] for j in range(len(a1)))
        ar_loss = sum(a2[j] * tgt_loss[k - 1 - j] for j in range(len(a2)))
        q_space = max(0.0, ar_space + inp.active[k] * drive_space[k - first])
        q_loss = max(0.0, ar_loss + drive_loss[k - first])
        q_hw = inp.hot_water[k]
        tgt_space[k] = max(0.0, q[k] - q_hw - q_loss)
        tgt_hw[k] = max(0.0, q[k] - q_space - q_loss)
        tgt_loss[k] = max(0.0, q[k] - q_space - q_hw)
    return tgt_space, tgt_hw, tgt_loss


def _ar_filter_series(coeffs: np.ndarray, x: np.ndarray, first: int) -> np.ndarray:
    """Taps 1..n over rows [first, N): entry k-first is sum_j a_j x[k-j]."""
    n = len(x)
    out = np.zeros(n - first)
    for j, c in enumerate(coeffs, start=1):
        out += c * x[first - j:n - j]
    return out


def predict_decomposed(m: HeliosModel, ds: Dataset, mode: str = RECURSIVE) -> Decomposition:
    """Component-wise prediction over the usable rows of a dataset.

    ``teacher_forced`` feeds residual-target values into the ARX lags
    (requires measured loads); ``recursive`` feeds the model's own
    previous outputs back and is inherently sequential.  Both clamp the
    emitted components at zero.
    """
    if mode not in (TEACHER_FORCED, RECURSIVE):
        raise ValueError(f"mode must be {TEACHER_FORCED!r} or {RECURSIVE!r}")
    inp = prediction_inputs(m, ds)
    n = len(ds)
    first = inp.first
    drive_space = inp.active[first:] * _space_drive(m, inp)
    drive_loss = m.loss.gain * _exog_filter_series(m.loss.drive_coeffs, inp.pipe_ground_diff, first)

    if mode == TEACHER_FORCED:
        tgt_space, _, tgt_loss = residual_targets(m, ds)
        space = np.maximum(0.0, _ar_filter_series(m.space.ar_coeffs, tgt_space, first) + drive_space)
        loss = np.maximum(0.0, _ar_filter_series(m.loss.ar_coeffs, tgt_loss, first) + drive_loss)
    else:
        space_full = np.zeros(n)
        loss_full = np.zeros(n)
        a1, a2 = m.space.ar_coeffs, m.loss.ar_coeffs
        for k in range(first, n):
            ar_space = sum(a1[j] * space_full[k - 1 - j] for j in range(len(a1)))
            ar_loss = sum(a2[j] * loss_full[k - 1 - j] for j in range(len(a2)))
            space_full[k] = max(0.0, ar_space + drive_space[k - first])
            loss_full[k] = max(0.0, ar_loss + drive_loss[k - first])
        space = space_full[first:]
        loss = loss_full[first:]

    return Decomposition.from_components(
        timestamp=ds.timestamp[first:],
        space=space,
        hot_water=inp.hot_water[first:],
        loss=loss,
    )


def forecast(
    m: HeliosModel,
    history: Dataset,
    horizon: int,
    future_exogenous: Dataset,
) -> Decomposition:
    """Recursive multi-step forecast past the end of ``history``.

    ``future_exogenous`` must continue the hourly grid and cover the
    horizon; its weather, calendar, and supply/return columns are used and
    its heat-load column is ignored.  Component lags start from the
    residual targets of the history and are then fed back from the
    model's own clamped outputs.
    """
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if horizon == 0:
        return Decomposition.from_components(
            timestamp=np.array([], dtype=np.int64),
            space=np.array([]), hot_water=np.array([]), loss=np.array([]),
        )
    if len(future_exogenous) < horizon:
        raise MissingExogenousError(
            f"horizon {horizon} needs {horizon} future rows, got {len(future_exogenous)}"
        )
    from .data import concat_datasets  # local import to avoid cycle at module load

    future = future_exogenous.slice(0, horizon)
    full = concat_datasets(history, future)
    inp = prediction_inputs(m, full)
    n_hist = len(history)
    if n_hist <= inp.first:
        raise InsufficientHistoryError("history shorter than season warm-up plus lags")

    tgt_space, _, tgt_loss = residual_targets(m, history)
    space_full = np.zeros(len(full))
    loss_full = np.zeros(len(full))
    space_full[:n_hist] = tgt_space
    loss_full[:n_hist] = tgt_loss

    first = inp.first
    drive_space = inp.active[first:] * _space_drive(m, inp)
    drive_loss = m.loss.gain * _exog_filter_series(m.loss.drive_coeffs, inp.pipe_ground_diff, first)
    a1, a2 = m.space.ar_coeffs, m.loss.ar_coeffs
    for k in range(n_hist, len(full)):
        ar_space = sum(a1[j] * space_full[k - 1 - j] for j in range(len(a1)))
        ar_loss = sum(a2[j] * loss_full[k - 1 - j] for j in range(len(a2)))
        space_full[k] = max(0.0, ar_space + drive_space[k - first])
        loss_full[k] = max(0.0, ar_loss + drive_loss[k - first])

    return Decomposition.from_components(
        timestamp=full.timestamp[n_hist:],
        space=space_full[n_hist:],
        hot_water=inp.hot_water[n_hist:],
        loss=loss_full[n_hist:],
    )


# ---------------------------------------------------------------------------
# serialization


def _prior_to_dict(p: Prior) -> dict:
    return {"family": p.family, "loc": p.loc, "scale": p.scale}


def _prior_from_dict(d: dict) -> Prior:
    return Prior(d["family"], float(d["loc"]), float(d["scale"]))


def _priors_to_dict(spec: PriorSpec) -> dict:
    return {
        "gate": _prior_to_dict(spec.gate),
        "setpoint_by_context": {k: _prior_to_dict(v) for k, v in spec.setpoint_by_context.items()},
        "setpoint_default": _prior_to_dict(spec.setpoint_default),
        "season_level_by_context": {k: _prior_to_dict(v) for k, v in spec.season_level_by_context.items()},
        "season_level_default": _prior_to_dict(spec.season_level_default),
        "time_level_by_context": {k: _prior_to_dict(v) for k, v in spec.time_level_by_context.items()},
        "time_level_default": _prior_to_dict(spec.time_level_default),
        "gain": _prior_to_dict(spec.gain),
        "arx_coefficient": _prior_to_dict(spec.arx_coefficient),
        "nominal_demand": _prior_to_dict(spec.nominal_demand),
        "seasonal_gain": _prior_to_dict(spec.seasonal_gain),
        "noise_scale": _prior_to_dict(spec.noise_scale),
    }


def _priors_from_dict(d: dict) -> PriorSpec:
    return PriorSpec(
        gate=_prior_from_dict(d["gate"]),
        setpoint_by_context={k: _prior_from_dict(v) for k, v in d["setpoint_by_context"].items()},
        setpoint_default=_prior_from_dict(d["setpoint_default"]),
        season_level_by_context={k: _prior_from_dict(v) for k, v in d["season_level_by_context"].items()},
        season_level_default=_prior_from_dict(d["season_level_default"]),
        time_level_by_context={k: _prior_from_dict(v) for k, v in d["time_level_by_context"].items()},
        time_level_default=_prior_from_dict(d["time_level_default"]),
        gain=_prior_from_dict(d["gain"]),
        arx_coefficient=_prior_from_dict(d["arx_coefficient"]),
        nominal_demand=_prior_from_dict(d["nominal_demand"]),
        seasonal_gain=_prior_from_dict(d["seasonal_gain"]),
        noise_scale=_prior_from_dict(d["noise_scale"]),
    )


def save_model(m: HeliosModel, path) -> None:
    """Write the model as a versioned, human-readable JSON document.

    Every float is serialized through ``repr`` semantics so that
    ``load_model(save_model(m))`` reproduces parameters bit for bit.
    """
    doc = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "fourier_harmonics": m.setpoint.gate.fourier.harmonics,
        "season_window": m.season_window,
        "noise_scale": m.noise_scale,
        "contexts": context_sets_to_dict(m.contexts),
        "setpoint": {
            "temperatures": m.setpoint.temperatures.tolist(),
            "gate_weights": m.setpoint.gate.weights.tolist(),
        },
        "active": {
            "season_levels": m.active.season_levels.tolist(),
            "time_levels": m.active.time_levels.tolist(),
            "season_gate_intercepts": m.active.season_gate.intercepts.tolist(),
            "season_gate_slopes": m.active.season_gate.slopes.tolist(),
            "gate_weights": m.active.time_gate.weights.tolist(),
        },
        "space": {
            "ar_coeffs": m.space.ar_coeffs.tolist(),
            "temp_coeffs": m.space.temp_coeffs.tolist(),
            "radiance_coeffs": m.space.radiance_coeffs.tolist(),
            "wind_coeffs": m.space.wind_coeffs.tolist(),
            "gains": m.space.gains.tolist(),
        },
        "hot_water": {
            "nominal_demand": m.hot_water.nominal_demand.tolist(),
            "gate_weights": m.hot_water.gate.weights.tolist(),
            "seasonal_gain": m.hot_water.seasonal_gain,
            "peak_day": m.hot_water.peak_day,
        },
        "loss": {
            "ar_coeffs": m.loss.ar_coeffs.tolist(),
            "drive_coeffs": m.loss.drive_coeffs.tolist(),
            "gain": m.loss.gain,
            "ground": {
                "pipe_depth": m.loss.ground.pipe_depth,
                "mean_ambient": m.loss.ground.mean_ambient,
                "amplitude": m.loss.ground.amplitude,
                "phase_shift_days": m.loss.ground.phase_shift_days,
                "diffusivity": m.loss.ground.diffusivity,
            },
        },
        "priors": _priors_to_dict(m.priors) if m.priors is not None else None,
    }
    try:
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1)
    except OSError as exc:
        raise ModelIoError(str(exc)) from exc


def load_model(path) -> HeliosModel:
    """Read a model file written by :func:`save_model`."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ModelIoError(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise ModelIoError(f"not a valid model file: {exc}") from exc
    version = doc.get("schema_version")
    if version != MODEL_SCHEMA_VERSION:
        raise SchemaVersionMismatchError(
            f"model file schema {version!r}, supported {MODEL_SCHEMA_VERSION}"
        )
    try:
        fourier = FourierConfig(harmonics=int(doc["fourier_harmonics"]))
        contexts = context_sets_from_dict(doc["contexts"])
        sp = doc["setpoint"]
        setpoint = SetpointModel(
            temperatures=np.array(sp["temperatures"]),
            gate=TimeGatingNetwork(np.array(sp["gate_weights"]), fourier),
        )
        ac = doc["active"]
        active = ActiveHouseholdsModel(
            season_levels=np.array(ac["season_levels"]),
            time_levels=np.array(ac["time_levels"]),
            season_gate=SeasonGatingNetwork(
                np.array(ac["season_gate_intercepts"]), np.array(ac["season_gate_slopes"])
            ),
            time_gate=TimeGatingNetwork(np.array(ac["gate_weights"]), fourier),
        )
        spc = doc["space"]
        space = SpaceHeatingARX(
            ar_coeffs=np.array(spc["ar_coeffs"]),
            temp_coeffs=np.array(spc["temp_coeffs"]),
            radiance_coeffs=np.array(spc["radiance_coeffs"]),
            wind_coeffs=np.array(spc["wind_coeffs"]),
            gains=np.array(spc["gains"]),
        )
        hw = doc["hot_water"]
        hot_water = HotWaterModel(
            nominal_demand=np.array(hw["nominal_demand"]),
            gate=TimeGatingNetwork(np.array(hw["gate_weights"]), fourier),
            seasonal_gain=float(hw["seasonal_gain"]),
            peak_day=float(hw["peak_day"]),
        )
        ls = doc["loss"]
        loss = PipingLossModel(
            ar_coeffs=np.array(ls["ar_coeffs"]),
            drive_coeffs=np.array(ls["drive_coeffs"]),
            gain=float(ls["gain"]),
            ground=GroundModelConfig(**ls["ground"]),
        )
        priors = _priors_from_dict(doc["priors"]) if doc.get("priors") else None
        return HeliosModel(
            setpoint=setpoint,
            active=active,
            space=space,
            hot_water=hot_water,
            loss=loss,
            noise_scale=float(doc["noise_scale"]),
            contexts=contexts,
            season_window=int(doc["season_window"]),
            priors=priors,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelIoError(f"malformed model file: {exc}") from exc
