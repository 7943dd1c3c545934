"""Canonical hourly time-series data model and CSV ingestion.

A :class:`Dataset` holds aligned hourly records of calendar features,
weather, and substation measurements.  Rows are immutable numpy arrays;
all timestamps are UTC epoch seconds.  Gaps are detected at construction
and reported as quality warnings; learning code rejects gapped data
because lag windows require contiguity.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from datetime import date, datetime, timezone

import numpy as np

from .errors import (
    BoundaryOutOfRangeError,
    MissingColumnError,
    NonMonotonicTimestampsError,
    UnparsableRowError,
)

WEEKDAY = 1
WEEKEND_HOLIDAY = 2

#: canonical column names, also used when writing CSV
CSV_COLUMNS = (
    "timestamp",
    "ambient_temperature",
    "global_radiance",
    "wind_speed",
    "heat_load",
    "supply_temperature",
    "return_temperature",
)


@dataclass(frozen=True)
class CalendarFeatures:
    """Calendar attributes of one hourly sample (UTC)."""

    hour: int
    day_type: int
    day_of_year: int
    timestamp: int


def derive_calendar(timestamp: int, holidays: frozenset[date] = frozenset()) -> CalendarFeatures:
    """Derive calendar features from a UTC epoch timestamp.

    ``day_type`` is 2 on Saturdays, Sundays, and any date in ``holidays``,
    and 1 otherwise.  Pure: the same inputs always map to the same output.
    """
    dt = datetime.fromtimestamp(int(timestamp), tz=timezone.utc)
    is_offday = dt.weekday() >= 5 or dt.date() in holidays
    return CalendarFeatures(
        hour=dt.hour,
        day_type=WEEKEND_HOLIDAY if is_offday else WEEKDAY,
        day_of_year=dt.timetuple().tm_yday,
        timestamp=int(timestamp),
    )


@dataclass(frozen=True)
class Dataset:
    """Immutable, ordered hourly records.

    Timestamps must be strictly increasing.  Gaps (consecutive timestamps
    more than one sampling interval apart) are permitted here but recorded
    in ``quality_warnings``; fitting rejects gapped datasets.
    """

    timestamp: np.ndarray
    hour: np.ndarray
    day_type: np.ndarray
    day_of_year: np.ndarray
    ambient_temperature: np.ndarray
    global_radiance: np.ndarray
    wind_speed: np.ndarray
    heat_load: np.ndarray
    supply_temperature: np.ndarray
    return_temperature: np.ndarray
    sampling_interval_hours: int = 1
    quality_warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        n = len(self.timestamp)
        arrays = {
            "timestamp": np.asarray(self.timestamp, dtype=np.int64),
            "hour": np.asarray(self.hour, dtype=np.int64),
            "day_type": np.asarray(self.day_type, dtype=np.int64),
            "day_of_year": np.asarray(self.day_of_year, dtype=np.int64),
            "ambient_temperature": np.asarray(self.ambient_temperature, dtype=np.float64),
            "global_radiance": np.asarray(self.global_radiance, dtype=np.float64),
            "wind_speed": np.asarray(self.wind_speed, dtype=np.float64),
            "heat_load": np.asarray(self.heat_load, dtype=np.float64),
            "supply_temperature": np.asarray(self.supply_temperature, dtype=np.float64),
            "return_temperature": np.asarray(self.return_temperature, dtype=np.float64),
        }
        for name, arr in arrays.items():
            if len(arr) != n:
                raise ValueError(f"column {name} has {len(arr)} rows, expected {n}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

        if n > 1 and not np.all(np.diff(arrays["timestamp"]) > 0):
            raise NonMonotonicTimestampsError("timestamps must be strictly increasing")
        for name in ("ambient_temperature", "global_radiance", "wind_speed",
                     "heat_load", "supply_temperature", "return_temperature"):
            if not np.all(np.isfinite(arrays[name])):
                raise ValueError(f"column {name} contains non-finite values")
        if np.any(arrays["global_radiance"] < 0):
            raise ValueError("global_radiance must be non-negative")
        if np.any(arrays["wind_speed"] < 0):
            raise ValueError("wind_speed must be non-negative")
        if np.any(arrays["heat_load"] < 0):
            raise ValueError("heat_load must be non-negative")
        if np.any(arrays["hour"] < 0) or np.any(arrays["hour"] > 23):
            raise ValueError("hour out of range 0..23")
        if not np.all(np.isin(arrays["day_type"], (WEEKDAY, WEEKEND_HOLIDAY))):
            raise ValueError("day_type must be 1 (weekday) or 2 (weekend/holiday)")

        warnings = list(self.quality_warnings)
        bad_temp = np.flatnonzero(arrays["supply_temperature"] < arrays["return_temperature"])
        # supply below return is physically suspect but measured data does it;
        # flag instead of rejecting
        for i in bad_temp:
            warnings.append(
                f"supply_temperature below return_temperature at timestamp {arrays['timestamp'][i]}"
            )
        for ts in self.gap_timestamps():
            warnings.append(f"gap: missing timestamp {ts}")
        object.__setattr__(self, "quality_warnings", tuple(warnings))

    def __len__(self) -> int:
        return len(self.timestamp)

    def gap_timestamps(self) -> list[int]:
        """Epoch seconds of every missing hourly sample."""
        step = self.sampling_interval_hours * 3600
        missing: list[int] = []
        ts = self.timestamp
        for i in range(len(ts) - 1):
            expected = ts[i] + step
            while expected < ts[i + 1]:
                missing.append(int(expected))
                expected += step
        return missing

    @property
    def has_gaps(self) -> bool:
        step = self.sampling_interval_hours * 3600
        return len(self) > 1 and bool(np.any(np.diff(self.timestamp) != step))

    def slice(self, start: int, stop: int) -> "Dataset":
        """Row slice [start, stop) as a new Dataset."""
        return Dataset(
            timestamp=self.timestamp[start:stop],
            hour=self.hour[start:stop],
            day_type=self.day_type[start:stop],
            day_of_year=self.day_of_year[start:stop],
            ambient_temperature=self.ambient_temperature[start:stop],
            global_radiance=self.global_radiance[start:stop],
            wind_speed=self.wind_speed[start:stop],
            heat_load=self.heat_load[start:stop],
            supply_temperature=self.supply_temperature[start:stop],
            return_temperature=self.return_temperature[start:stop],
            sampling_interval_hours=self.sampling_interval_hours,
        )


def dataset_from_arrays(
    timestamp,
    ambient_temperature,
    global_radiance,
    wind_speed,
    heat_load,
    supply_temperature,
    return_temperature,
    holidays: frozenset[date] = frozenset(),
) -> Dataset:
    """Build a Dataset from raw measurement arrays, deriving calendar features."""
    ts = np.asarray(timestamp, dtype=np.int64)
    cal = [derive_calendar(int(t), holidays) for t in ts]
    return Dataset(
        timestamp=ts,
        hour=np.array([c.hour for c in cal], dtype=np.int64),
        day_type=np.array([c.day_type for c in cal], dtype=np.int64),
        day_of_year=np.array([c.day_of_year for c in cal], dtype=np.int64),
        ambient_temperature=np.asarray(ambient_temperature, dtype=np.float64),
        global_radiance=np.asarray(global_radiance, dtype=np.float64),
        wind_speed=np.asarray(wind_speed, dtype=np.float64),
        heat_load=np.asarray(heat_load, dtype=np.float64),
        supply_temperature=np.asarray(supply_temperature, dtype=np.float64),
        return_temperature=np.asarray(return_temperature, dtype=np.float64),
    )


def concat_datasets(first: Dataset, second: Dataset) -> Dataset:
    """Concatenate two datasets; the second must directly continue the first."""
    if len(first) == 0:
        return second
    if len(second) == 0:
        return first
    step = first.sampling_interval_hours * 3600
    if second.timestamp[0] != first.timestamp[-1] + step:
        raise NonMonotonicTimestampsError(
            "second dataset does not start one sampling interval after the first ends"
        )
    cat = np.concatenate
    return Dataset(
        timestamp=cat([first.timestamp, second.timestamp]),
        hour=cat([first.hour, second.hour]),
        day_type=cat([first.day_type, second.day_type]),
        day_of_year=cat([first.day_of_year, second.day_of_year]),
        ambient_temperature=cat([first.ambient_temperature, second.ambient_temperature]),
        global_radiance=cat([first.global_radiance, second.global_radiance]),
        wind_speed=cat([first.wind_speed, second.wind_speed]),
        heat_load=cat([first.heat_load, second.heat_load]),
        supply_temperature=cat([first.supply_temperature, second.supply_temperature]),
        return_temperature=cat([first.return_temperature, second.return_temperature]),
        sampling_interval_hours=first.sampling_interval_hours,
    )


def _parse_timestamp(text: str) -> int:
    """Parse an ISO-8601 or epoch-seconds timestamp to UTC epoch seconds."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return int(float(text))
    except ValueError:
        pass
    iso = text.replace("Z", "+00:00")
    dt = datetime.fromisoformat(iso)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def ingest_csv(
    path,
    schema: dict[str, str] | None = None,
    holidays: frozenset[date] = frozenset(),
) -> Dataset:
    """Read an hourly CSV file into a validated Dataset.

    Parameters
    ----------
    path : str or Path
        CSV file with a header row (RFC-4180 quoting, ``.`` decimal point).
    schema : dict, optional
        Maps canonical names (``timestamp``, ``ambient_temperature``, ...)
        to the file's column names.  Defaults to the canonical names.
    holidays : frozenset of datetime.date
        Dates treated as day type 2 alongside weekends.

    Rows are sorted by timestamp before validation.  Duplicate timestamps
    raise :class:`NonMonotonicTimestampsError`; gaps become quality
    warnings on the returned Dataset.
    """
    colmap = dict(zip(CSV_COLUMNS, CSV_COLUMNS))
    if schema:
        colmap.update(schema)

    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise UnparsableRowError(1, "empty file") from None
        index: dict[str, int] = {}
        for canonical, column in colmap.items():
            if column not in header:
                raise MissingColumnError(f"column {column!r} (for {canonical}) not in header")
            index[canonical] = header.index(column)

        rows: list[tuple] = []
        for line_number, row in enumerate(reader, start=2):
            if not row or all(cell.strip() == "" for cell in row):
                continue
            try:
                ts = _parse_timestamp(row[index["timestamp"]])
                values = [float(row[index[c]]) for c in CSV_COLUMNS[1:]]
            except (ValueError, IndexError) as exc:
                raise UnparsableRowError(line_number, str(exc)) from None
            rows.append((ts, *values))

    rows.sort(key=lambda r: r[0])
    columns = list(zip(*rows)) if rows else [[] for _ in CSV_COLUMNS]
    return dataset_from_arrays(
        timestamp=columns[0],
        ambient_temperature=columns[1],
        global_radiance=columns[2],
        wind_speed=columns[3],
        heat_load=columns[4],
        supply_temperature=columns[5],
        return_temperature=columns[6],
        holidays=holidays,
    )


def write_csv(ds: Dataset, path) -> None:
    """Write a Dataset to CSV; numeric fields round-trip bit-for-bit."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for i in range(len(ds)):
            stamp = datetime.fromtimestamp(int(ds.timestamp[i]), tz=timezone.utc)
            writer.writerow(
                [
                    stamp.strftime("%Y-%m-%dT%H:%M:%SZ"),
                    repr(float(ds.ambient_temperature[i])),
                    repr(float(ds.global_radiance[i])),
                    repr(float(ds.wind_speed[i])),
                    repr(float(ds.heat_load[i])),
                    repr(float(ds.supply_temperature[i])),
                    repr(float(ds.return_temperature[i])),
                ]
            )


def split_train_test(ds: Dataset, boundary: int) -> tuple[Dataset, Dataset]:
    """Chronological split: rows before ``boundary`` vs. the rest.

    ``boundary`` (epoch seconds) must not lie past the final timestamp.
    """
    if len(ds) == 0:
        raise BoundaryOutOfRangeError("cannot split an empty dataset")
    if boundary > int(ds.timestamp[-1]):
        raise BoundaryOutOfRangeError(
            f"boundary {boundary} is after the last timestamp {int(ds.timestamp[-1])}"
        )
    cut = int(np.searchsorted(ds.timestamp, boundary, side="left"))
    return ds.slice(0, cut), ds.slice(cut, len(ds))
