"""Synthetic scene descriptions."""

import math
from dataclasses import dataclass, field

from mavdet.models.events import SensorGeometry

RPM_RANGE = (5000.0, 15000.0)


@dataclass(frozen=True)
class PropellerSpec:
    """A rotating propeller.

    Attributes:
        center: (x, y) hub position in pixels
        radius: Blade tip radius in pixels
        blades: Blade count
        rpm: Revolutions per minute
        phase: Initial blade angle in radians
        events_per_edge: Mean events per swept pixel per edge passage
        blade_width: Angular width of a blade in radians
        contrast_modulation: Depth of the blade-pass glint term, in [0, 1)
        bright_blade: Leading edge emits positive events when True
        jitter_us: Maximum timestamp jitter of emitted events
    """

    center: tuple[int, int]
    radius: int
    blades: int = 2
    rpm: float = 10000.0
    phase: float = 0.0
    events_per_edge: float = 4.0
    blade_width: float = 0.12
    contrast_modulation: float = 0.25
    bright_blade: bool = True
    jitter_us: int = 30

    def __post_init__(self) -> None:
        """Validate propeller parameters."""
        if self.radius < 5:
            raise ValueError(f"Propeller radius must be >= 5, got {self.radius}")
        if self.blades < 2:
            raise ValueError(f"Propeller needs >= 2 blades, got {self.blades}")
        if not RPM_RANGE[0] <= self.rpm <= RPM_RANGE[1]:
            raise ValueError(
                f"rpm must be in {RPM_RANGE[0]:.0f}-{RPM_RANGE[1]:.0f}, got {self.rpm}"
            )
        if self.events_per_edge <= 0:
            raise ValueError(f"Invalid events_per_edge: {self.events_per_edge}")
        if not 0 < self.blade_width < math.pi / self.blades:
            raise ValueError(f"Invalid blade_width: {self.blade_width}")
        if not 0 <= self.contrast_modulation < 1:
            raise ValueError(
                f"Invalid contrast_modulation: {self.contrast_modulation}"
            )
        if self.jitter_us < 0:
            raise ValueError(f"Invalid jitter_us: {self.jitter_us}")

    @property
    def blade_pass_hz(self) -> float:
        """rpm / 60 * blades."""
        return self.rpm / 60.0 * self.blades


@dataclass(frozen=True)
class BackgroundSpec:
    """Camera-motion clutter: translating straight edges plus uniform noise.

    Attributes:
        edge_count: Number of moving edges
        speed: Edge speed in pixels per millisecond
        noise_rate: Uniform noise events per millisecond over the frame
        edge_width: Bar width in pixels; sets the positive/negative gap
    """

    edge_count: int = 3
    speed: float = 2.0
    noise_rate: float = 20.0
    edge_width: float = 3.0

    def __post_init__(self) -> None:
        """Validate background parameters."""
        if self.edge_count < 0:
            raise ValueError(f"Invalid edge_count: {self.edge_count}")
        if self.speed < 0:
            raise ValueError(f"Invalid speed: {self.speed}")
        if self.noise_rate < 0:
            raise ValueError(f"Invalid noise_rate: {self.noise_rate}")
        if self.edge_width <= 0:
            raise ValueError(f"Invalid edge_width: {self.edge_width}")
        if self.edge_count > 0 and self.speed == 0:
            raise ValueError("Moving edges need a positive speed")


@dataclass(frozen=True)
class SynthScene:
    """A complete synthetic period description; same seed, same events."""

    sensor: SensorGeometry = field(default_factory=lambda: SensorGeometry(640, 480))
    duration: int = 20_000
    propellers: tuple[PropellerSpec, ...] = field(default_factory=tuple)
    background: BackgroundSpec = field(default_factory=BackgroundSpec)
    seed: int = 0
    name: str = "synthetic"

    def __post_init__(self) -> None:
        """Validate scene."""
        if self.duration <= 0:
            raise ValueError(f"Invalid scene duration: {self.duration}")
        if self.seed < 0:
            raise ValueError(f"Invalid seed: {self.seed}")
