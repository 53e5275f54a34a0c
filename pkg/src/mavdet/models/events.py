"""Event stream types."""

from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from mavdet.exceptions import EventValidationError

# Column layout shared by every in-memory event array.
EVENT_DTYPE = np.dtype([("t", "<i8"), ("x", "<i4"), ("y", "<i4"), ("p", "u1")])


class Polarity(IntEnum):
    """Sign of the brightness change; encoded 1/0 in every file format."""

    NEGATIVE = 0
    POSITIVE = 1

    def __str__(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class SensorGeometry:
    """Sensor resolution in pixels."""

    width: int
    height: int

    def __post_init__(self) -> None:
        """Validate geometry."""
        if self.width <= 0:
            raise ValueError(f"Invalid sensor width: {self.width}")
        if self.height <= 0:
            raise ValueError(f"Invalid sensor height: {self.height}")

    @property
    def shape(self) -> tuple[int, int]:
        """Grid shape as (rows, columns)."""
        return (self.height, self.width)


@dataclass(frozen=True)
class Event:
    """A single event e(x, y, t, p)."""

    t: int
    x: int
    y: int
    p: Polarity


def make_events(
    t: np.ndarray | list[int],
    x: np.ndarray | list[int],
    y: np.ndarray | list[int],
    p: np.ndarray | list[int],
) -> np.ndarray:
    """Pack column arrays into an EVENT_DTYPE record array.

    Raises:
        EventValidationError: A coordinate does not fit the int32 columns
    """
    t = np.asarray(t, dtype=np.int64)
    events = np.empty(t.shape[0], dtype=EVENT_DTYPE)
    events["t"] = t
    events["x"] = _narrow(x, "x")
    events["y"] = _narrow(y, "y")
    events["p"] = np.asarray(p, dtype=np.uint8)
    return events


def _narrow(values: np.ndarray | list[int], name: str) -> np.ndarray:
    wide = np.asarray(values, dtype=np.int64)
    limits = np.iinfo(np.int32)
    outside = np.flatnonzero((wide < limits.min) | (wide > limits.max))
    if outside.size:
        raise EventValidationError(
            f"Coordinate {name}={wide[outside[0]]} outside any sensor"
        )
    return wide.astype(np.int32)


@dataclass(frozen=True, eq=False)
class EventPeriod:
    """Events of one detection window [t_start, t_start + duration).

    Construction validates bounds and the time window, and repairs
    out-of-order timestamps with a stable sort (``repaired`` is then True).
    The event array is made read-only.

    Attributes:
        events: EVENT_DTYPE array sorted by t
        t_start: Window start in microseconds
        duration: Window length in microseconds
        sensor: Sensor geometry
        repaired: Whether the input had to be re-sorted
    """

    events: np.ndarray
    t_start: int
    duration: int
    sensor: SensorGeometry
    repaired: bool = field(default=False)

    def __post_init__(self) -> None:
        """Validate and freeze the event array."""
        if self.duration <= 0:
            raise ValueError(f"Invalid period duration: {self.duration}")
        if self.t_start < 0:
            raise ValueError(f"Invalid period start: {self.t_start}")

        events = np.asarray(self.events)
        if events.dtype != EVENT_DTYPE:
            events = events.astype(EVENT_DTYPE)

        repaired = self.repaired
        if events.size > 1 and np.any(np.diff(events["t"]) < 0):
            events = events[np.argsort(events["t"], kind="stable")]
            repaired = True
        else:
            events = events.copy()

        _check_bounds(events, self.sensor)
        _check_window(events, self.t_start, self.duration)

        events.setflags(write=False)
        object.__setattr__(self, "events", events)
        object.__setattr__(self, "repaired", repaired)

    def __len__(self) -> int:
        return int(self.events.shape[0])

    def __iter__(self) -> Iterator[Event]:
        for t, x, y, p in self.events:
            yield Event(t=int(t), x=int(x), y=int(y), p=Polarity(int(p)))

    @property
    def t_end(self) -> int:
        """Exclusive window end in microseconds."""
        return self.t_start + self.duration

    @property
    def duration_ms(self) -> float:
        """Window length in milliseconds."""
        return self.duration / 1000.0

    @property
    def t(self) -> np.ndarray:
        return self.events["t"]

    @property
    def x(self) -> np.ndarray:
        return self.events["x"]

    @property
    def y(self) -> np.ndarray:
        return self.events["y"]

    @property
    def p(self) -> np.ndarray:
        return self.events["p"]

    def with_events(self, events: np.ndarray) -> "EventPeriod":
        """Same window and sensor, different events."""
        return EventPeriod(
            events=events,
            t_start=self.t_start,
            duration=self.duration,
            sensor=self.sensor,
        )


def _check_bounds(events: np.ndarray, sensor: SensorGeometry) -> None:
    if events.size == 0:
        return
    bad = (
        (events["x"] < 0)
        | (events["x"] >= sensor.width)
        | (events["y"] < 0)
        | (events["y"] >= sensor.height)
    )
    if np.any(bad):
        first = events[np.argmax(bad)]
        raise EventValidationError(
            f"Event at ({first['x']}, {first['y']}) outside "
            f"{sensor.width}x{sensor.height} sensor"
        )
    if np.any(events["p"] > 1):
        raise EventValidationError("Polarity must be 0 or 1")


def _check_window(events: np.ndarray, t_start: int, duration: int) -> None:
    if events.size == 0:
        return
    t_min = int(events["t"][0])
    t_max = int(events["t"][-1])
    if t_min < t_start or t_max >= t_start + duration:
        raise EventValidationError(
            f"Timestamps [{t_min}, {t_max}] outside period "
            f"[{t_start}, {t_start + duration})"
        )
