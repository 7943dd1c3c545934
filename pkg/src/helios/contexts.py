"""Expert-knowledge contexts as certainty-weighted possibility distributions.

A context names a region of the (hour, season) sample space an expert
believes a model element behaves distinctly in, together with a certainty
``alpha``.  Samples inside the support get weight 1, samples outside get
``1 - alpha``; these weights later scale per-context likelihood terms.
"""

from __future__ import annotations

import warnings as _warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .data import Dataset
from .errors import AlignmentMismatchError

DEFAULT_CERTAINTY = 0.9


class ModelElement(Enum):
    TEMPERATURE_SETPOINT = "temperature_setpoint"
    SEASON = "season"
    HOT_WATER = "hot_water"


@dataclass(frozen=True)
class PossibilityContext:
    """Support region plus certainty for one expert context.

    The support is the conjunction of whichever conditions are set:
    ``hour_intervals`` (union of half-open [start, end) hour ranges,
    wraparound allowed, e.g. 22-6), ``season_above``/``season_below``
    thresholds in deg C.  A context with no conditions covers everything.
    """

    name: str
    certainty: float = DEFAULT_CERTAINTY
    hour_intervals: tuple[tuple[float, float], ...] = ()
    season_above: float | None = None
    season_below: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.certainty <= 1.0:
            raise ValueError("certainty must lie in [0, 1]")
        for start, end in self.hour_intervals:
            if not (0 <= start < 24 and 0 <= end <= 24):
                raise ValueError(f"hour interval ({start}, {end}) outside [0, 24]")

    def in_support(self, hour, day_type=None, season=None):
        """Support membership; vectorizes over array inputs.

        ``day_type`` is accepted for interface symmetry but never alters
        the support: contexts are drawn per hour and per season only.
        """
        h = np.asarray(hour, dtype=np.float64)
        member = np.ones(h.shape, dtype=bool)
        if self.hour_intervals:
            in_hours = np.zeros(h.shape, dtype=bool)
            for start, end in self.hour_intervals:
                if start < end:
                    in_hours |= (h >= start) & (h < end)
                else:  # wraparound, e.g. 22-6
                    in_hours |= (h >= start) | (h < end)
            member &= in_hours
        if self.season_above is not None:
            s = np.asarray(season, dtype=np.float64)
            member &= s > self.season_above
        if self.season_below is not None:
            s = np.asarray(season, dtype=np.float64)
            member &= s < self.season_below
        if np.isscalar(hour) or (member.ndim == 0):
            return bool(member)
        return member


def possibility_weight(ctx: PossibilityContext, hour, day_type=None, season=None) -> float:
    """Certainty-weighted possibility of one sample under one context.

    Exactly 1 inside the support, exactly ``1 - alpha`` outside; no other
    value is ever produced.
    """
    inside = ctx.in_support(hour, day_type, season)
    return 1.0 if inside else 1.0 - ctx.certainty


@dataclass(frozen=True)
class ContextSet:
    """Named, ordered contexts for one model element."""

    element: ModelElement
    contexts: tuple[PossibilityContext, ...]

    def __post_init__(self):
        # a single context is permitted so the context machinery can be
        # collapsed to plain regression in reduction checks; the shipped
        # defaults always carry at least two
        if len(self.contexts) < 1:
            raise ValueError("a context set needs at least one context")
        names = [c.name for c in self.contexts]
        if len(set(names)) != len(names):
            raise ValueError("context names must be unique within a set")

    def __len__(self) -> int:
        return len(self.contexts)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.contexts)


def weight_matrix(cs: ContextSet, ds: Dataset, season: np.ndarray) -> np.ndarray:
    """Per-sample possibility weights, one column per context.

    ``season`` must align row-for-row with ``ds``.  Rows whose weights are
    all zero (possible only when every context has certainty 1) are legal
    but reported through a warning since such samples exert no contextual
    pull.
    """
    season = np.asarray(season, dtype=np.float64)
    if len(season) != len(ds):
        raise AlignmentMismatchError(
            f"season series has {len(season)} rows, dataset has {len(ds)}"
        )
    n = len(ds)
    out = np.empty((n, len(cs)), dtype=np.float64)
    for j, ctx in enumerate(cs.contexts):
        inside = ctx.in_support(ds.hour.astype(float), ds.day_type, season)
        out[:, j] = np.where(inside, 1.0, 1.0 - ctx.certainty)
    zero_rows = np.flatnonzero(~out.any(axis=1))
    if zero_rows.size:
        _warnings.warn(
            f"{zero_rows.size} rows have all-zero context weights for "
            f"{cs.element.value}; they contribute no contextual pull",
            stacklevel=2,
        )
    return out


def default_contexts(element: ModelElement, certainty: float = DEFAULT_CERTAINTY) -> ContextSet:
    """Shipped expert contexts for each model element.

    Setpoint: setback 22-6 and 9-18, comfort 4-10 and 16-24 (overlaps
    encode uncertainty about the exact switching hours).  Season: hot
    above 10 C, cold below 10 C.  Hot water: night 22-6, waking-up 4-10,
    working-hours 9-18, after-work 16-24.
    """
    if element is ModelElement.TEMPERATURE_SETPOINT:
        contexts = (
            PossibilityContext("setback", certainty, hour_intervals=((22, 6), (9, 18))),
            PossibilityContext("comfort", certainty, hour_intervals=((4, 10), (16, 24))),
        )
    elif element is ModelElement.SEASON:
        contexts = (
            PossibilityContext("hot", certainty, season_above=10.0),
            PossibilityContext("cold", certainty, season_below=10.0),
        )
    elif element is ModelElement.HOT_WATER:
        contexts = (
            PossibilityContext("night", certainty, hour_intervals=((22, 6),)),
            PossibilityContext("waking_up", certainty, hour_intervals=((4, 10),)),
            PossibilityContext("working_hours", certainty, hour_intervals=((9, 18),)),
            PossibilityContext("after_work", certainty, hour_intervals=((16, 24),)),
        )
    else:
        raise ValueError(f"unknown element {element!r}")
    return ContextSet(element=element, contexts=contexts)


@dataclass(frozen=True)
class ContextSets:
    """The three context sets the full model consumes."""

    setpoint: ContextSet
    season: ContextSet
    hot_water: ContextSet

    @staticmethod
    def defaults(certainty: float = DEFAULT_CERTAINTY) -> "ContextSets":
        return ContextSets(
            setpoint=default_contexts(ModelElement.TEMPERATURE_SETPOINT, certainty),
            season=default_contexts(ModelElement.SEASON, certainty),
            hot_water=default_contexts(ModelElement.HOT_WATER, certainty),
        )


def context_to_dict(ctx: PossibilityContext) -> dict:
    return {
        "name": ctx.name,
        "certainty": ctx.certainty,
        "hour_intervals": [list(iv) for iv in ctx.hour_intervals],
        "season_above": ctx.season_above,
        "season_below": ctx.season_below,
    }


def context_from_dict(d: dict) -> PossibilityContext:
    return PossibilityContext(
        name=d["name"],
        certainty=float(d["certainty"]),
        hour_intervals=tuple((float(a), float(b)) for a, b in d.get("hour_intervals", [])),
        season_above=d.get("season_above"),
        season_below=d.get("season_below"),
    )


def context_set_to_dict(cs: ContextSet) -> dict:
    return {
        "element": cs.element.value,
        "contexts": [context_to_dict(c) for c in cs.contexts],
    }


def context_set_from_dict(d: dict) -> ContextSet:
    return ContextSet(
        element=ModelElement(d["element"]),
        contexts=tuple(context_from_dict(c) for c in d["contexts"]),
    )


def context_sets_to_dict(sets: ContextSets) -> dict:
    return {
        "setpoint": context_set_to_dict(sets.setpoint),
        "season": context_set_to_dict(sets.season),
        "hot_water": context_set_to_dict(sets.hot_water),
    }


def context_sets_from_dict(d: dict) -> ContextSets:
    return ContextSets(
        setpoint=context_set_from_dict(d["setpoint"]),
        season=context_set_from_dict(d["season"]),
        hot_water=context_set_from_dict(d["hot_water"]),
    )
