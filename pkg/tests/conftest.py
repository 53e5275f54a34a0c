"""Pytest configuration and shared fixtures."""

import numpy as np
import pytest

from mavdet.core.synth import default_scene, generate_scene
from mavdet.models.annotation import PeriodAnnotation
from mavdet.models.config import DetectorConfig
from mavdet.models.events import EventPeriod, SensorGeometry, make_events


@pytest.fixture
def small_sensor() -> SensorGeometry:
    """32x24 sensor for hand-built periods."""
    return SensorGeometry(width=32, height=24)


@pytest.fixture
def vga_sensor() -> SensorGeometry:
    """640x480 sensor of the synthetic scenes."""
    return SensorGeometry(width=640, height=480)


@pytest.fixture
def default_config() -> DetectorConfig:
    """Detector with default parameters."""
    return DetectorConfig()


@pytest.fixture
def flicker_period(small_sensor: SensorGeometry) -> EventPeriod:
    """A 4x4 patch firing both polarities in every 1 ms slice of 10 ms.

    Every patch cell intersects in all 10 slices (gray 255); one extra
    positive-only cell at (20, 20) never does.
    """
    t, x, y, p = [], [], [], []
    for s in range(10):
        for cx in range(4, 8):
            for cy in range(4, 8):
                t += [s * 1000 + 100, s * 1000 + 600]
                x += [cx, cx]
                y += [cy, cy]
                p += [1, 0]
    t.append(5000)
    x.append(20)
    y.append(20)
    p.append(1)
    events = make_events(t, x, y, p)
    events = events[np.argsort(events["t"], kind="stable")]
    return EventPeriod(events=events, t_start=0, duration=10_000, sensor=small_sensor)


@pytest.fixture(scope="session")
def propeller_scene() -> tuple[EventPeriod, PeriodAnnotation]:
    """Centred 10k RPM two-blade propeller (radius 50) with background edges."""
    return generate_scene(default_scene(seed=7))
