"""Synthetic propeller scenes with known ground truth.

A propeller is modeled as B angular blade sectors sweeping a disk. Each
swept pixel fires when the leading edge arrives and again, with the other
polarity, when the trailing edge leaves, so both polarities recur at the
same pixel once per blade pass. Background edges cross each pixel once.
"""

import math

import numpy as np

from mavdet.exceptions import ConfigurationError
from mavdet.models.annotation import AnnotatedBox, PeriodAnnotation
from mavdet.models.bbox import BBox
from mavdet.models.events import EventPeriod, SensorGeometry, make_events
from mavdet.models.scene import BackgroundSpec, PropellerSpec, SynthScene
from mavdet.utils.logger import get_logger

logger = get_logger(__name__)

HUB_RADIUS = 2.0
US_PER_MS = 1000.0

Seed = int | np.random.Generator


def _rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _empty() -> np.ndarray:
    return make_events([], [], [], [])


def propeller_box(spec: PropellerSpec, sensor: SensorGeometry) -> BBox:
    """Square of side 2 * radius centred on the hub, clamped to the sensor."""
    cx, cy = spec.center
    box = BBox(cx - spec.radius, cy - spec.radius, 2 * spec.radius, 2 * spec.radius)
    clamped = box.clamp(sensor)
    if clamped is None:
        raise ConfigurationError(f"Propeller box {box} lies outside the sensor")
    return clamped


def _swept_pixels(
    spec: PropellerSpec, sensor: SensorGeometry
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    cx, cy = spec.center
    xs = np.arange(max(cx - spec.radius, 0), min(cx + spec.radius + 1, sensor.width))
    ys = np.arange(max(cy - spec.radius, 0), min(cy + spec.radius + 1, sensor.height))
    gx, gy = np.meshgrid(xs, ys)
    dx, dy = gx - cx, gy - cy
    rho = np.hypot(dx, dy)
    inside = (rho <= spec.radius) & (rho >= HUB_RADIUS)
    return gx[inside], gy[inside], np.arctan2(dy[inside], dx[inside])


def _edge_events(
    first_us: np.ndarray,
    pass_us: float,
    passes: int,
    duration: int,
    spec: PropellerSpec,
    omega: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Event times and pixel indices for one edge over every blade pass."""
    crossings = first_us[:, None] + pass_us * np.arange(passes)[None, :]
    pixel = np.broadcast_to(np.arange(first_us.size)[:, None], crossings.shape)
    valid = crossings < duration
    crossings, pixel = crossings[valid], pixel[valid]

    # Glint: contrast varies with the blades' common angle, once per pass.
    angle = spec.blades * (omega * crossings + spec.phase) / 2.0
    gain = 1.0 - spec.contrast_modulation * np.sin(angle) ** 2
    counts = rng.poisson(spec.events_per_edge * gain)

    times = np.repeat(crossings, counts)
    jitter = rng.uniform(0.0, spec.jitter_us, size=times.size)
    times = np.minimum(np.floor(times + jitter), duration - 1).astype(np.int64)
    return times, np.repeat(pixel, counts)


def generate_propeller_events(
    spec: PropellerSpec,
    duration: int,
    seed: Seed,
    sensor: SensorGeometry | None = None,
    t_start: int = 0,
) -> tuple[np.ndarray, BBox]:
    """Events of one rotating propeller and its ground-truth box.

    Args:
        spec: Propeller description
        duration: Period length in microseconds
        seed: RNG seed or generator
        sensor: Sensor geometry (default 640x480)
        t_start: Period start in microseconds

    Returns:
        (unsorted EVENT_DTYPE array, ground-truth box)

    Raises:
        ConfigurationError: Hub outside the sensor
    """
    sensor = sensor or SensorGeometry(640, 480)
    cx, cy = spec.center
    if not (0 <= cx < sensor.width and 0 <= cy < sensor.height):
        raise ConfigurationError(f"Propeller center {spec.center} outside the sensor")
    rng = _rng(seed)

    omega = spec.rpm * 2.0 * math.pi / 60.0 / 1e6
    sector = 2.0 * math.pi / spec.blades
    pass_us = sector / omega
    passes = int(math.ceil(duration / pass_us)) + 1

    xs, ys, phi = _swept_pixels(spec, sensor)
    lead_first = np.mod(phi - spec.phase - spec.blade_width, sector) / omega
    trail_first = np.mod(phi - spec.phase, sector) / omega

    lead_t, lead_px = _edge_events(
        lead_first, pass_us, passes, duration, spec, omega, rng
    )
    trail_t, trail_px = _edge_events(
        trail_first, pass_us, passes, duration, spec, omega, rng
    )

    lead_p, trail_p = (1, 0) if spec.bright_blade else (0, 1)
    events = make_events(
        np.concatenate([lead_t, trail_t]) + t_start,
        np.concatenate([xs[lead_px], xs[trail_px]]),
        np.concatenate([ys[lead_px], ys[trail_px]]),
        np.concatenate(
            [np.full(lead_t.size, lead_p), np.full(trail_t.size, trail_p)]
        ),
    )
    return events, propeller_box(spec, sensor)


def generate_background_events(
    spec: BackgroundSpec,
    sensor: SensorGeometry,
    duration: int,
    seed: Seed,
    t_start: int = 0,
) -> np.ndarray:
    """Translating straight edges plus uniform noise.

    Every pixel an edge crosses emits one positive event, then one negative
    event ``edge_width / speed`` later.
    """
    rng = _rng(seed)
    parts = [_moving_edge(spec, sensor, duration, rng) for _ in range(spec.edge_count)]
    parts.append(_noise(spec, sensor, duration, rng))
    events = np.concatenate(parts) if parts else _empty()
    events["t"] += t_start
    return events


def _moving_edge(
    spec: BackgroundSpec,
    sensor: SensorGeometry,
    duration: int,
    rng: np.random.Generator,
) -> np.ndarray:
    normal = rng.uniform(0.0, math.pi)
    direction = rng.choice([-1.0, 1.0])
    gy, gx = np.indices(sensor.shape)
    projection = direction * (gx * math.cos(normal) + gy * math.sin(normal))

    speed_us = spec.speed / US_PER_MS
    travel = speed_us * duration
    start = rng.uniform(projection.min() - travel, projection.max())
    cross = (projection - start) / speed_us
    hit = (cross >= 0) & (cross < duration)

    t_pos = np.floor(cross[hit]).astype(np.int64)
    t_neg = np.floor(cross[hit] + spec.edge_width / speed_us).astype(np.int64)
    keep_neg = t_neg < duration
    x, y = gx[hit], gy[hit]
    return make_events(
        np.concatenate([t_pos, t_neg[keep_neg]]),
        np.concatenate([x, x[keep_neg]]),
        np.concatenate([y, y[keep_neg]]),
        np.concatenate([np.ones(t_pos.size), np.zeros(int(keep_neg.sum()))]),
    )


def _noise(
    spec: BackgroundSpec,
    sensor: SensorGeometry,
    duration: int,
    rng: np.random.Generator,
) -> np.ndarray:
    count = int(rng.poisson(spec.noise_rate * duration / US_PER_MS))
    return make_events(
        rng.integers(0, duration, size=count),
        rng.integers(0, sensor.width, size=count),
        rng.integers(0, sensor.height, size=count),
        rng.integers(0, 2, size=count),
    )


def generate_scene(scene: SynthScene) -> tuple[EventPeriod, PeriodAnnotation]:
    """Render a scene into a time-sorted period and its ground truth.

    Each propeller and the background draw from independent child streams
    of the scene seed, so the output is reproducible bit for bit.
    """
    children = np.random.SeedSequence(scene.seed).spawn(len(scene.propellers) + 1)
    parts = []
    boxes = []
    for spec, child in zip(scene.propellers, children[:-1], strict=True):
        events, box = generate_propeller_events(
            spec, scene.duration, np.random.default_rng(child), scene.sensor
        )
        parts.append(events)
        boxes.append(AnnotatedBox(bbox=box))
    parts.append(
        generate_background_events(
            scene.background,
            scene.sensor,
            scene.duration,
            np.random.default_rng(children[-1]),
        )
    )

    events = np.concatenate(parts)
    events = events[np.argsort(events["t"], kind="stable")]
    period = EventPeriod(
        events=events, t_start=0, duration=scene.duration, sensor=scene.sensor
    )
    annotation = PeriodAnnotation(
        file=scene.name,
        width=scene.sensor.width,
        height=scene.sensor.height,
        duration_us=scene.duration,
        boxes=tuple(boxes),
    )
    logger.debug(
        f"Scene {scene.name} (seed {scene.seed}): {len(period)} events, "
        f"{len(boxes)} propellers"
    )
    return period, annotation


def sample_scene(
    seed: int,
    with_propeller: bool = True,
    sensor: SensorGeometry | None = None,
    duration: int = 20_000,
) -> SynthScene:
    """Random scene of the acceptance suites.

    One propeller with rpm in 8k-12k and radius in 30-80 px fully inside the
    frame (when ``with_propeller``), three moving edges and moderate noise.
    """
    sensor = sensor or SensorGeometry(640, 480)
    rng = np.random.default_rng(seed)
    propellers: tuple[PropellerSpec, ...] = ()
    if with_propeller:
        radius = int(rng.integers(30, 81))
        margin = radius + 2
        propellers = (
            PropellerSpec(
                center=(
                    int(rng.integers(margin, sensor.width - margin)),
                    int(rng.integers(margin, sensor.height - margin)),
                ),
                radius=radius,
                rpm=float(rng.uniform(8000.0, 12000.0)),
                phase=float(rng.uniform(0.0, 2.0 * math.pi)),
            ),
        )
    return SynthScene(
        sensor=sensor,
        duration=duration,
        propellers=propellers,
        background=BackgroundSpec(edge_count=3, noise_rate=20.0),
        seed=seed,
        name=f"scene_{seed:05d}",
    )


def default_scene(
    seed: int = 0, sensor: SensorGeometry | None = None, duration: int = 20_000
) -> SynthScene:
    """Centred 10k RPM two-blade propeller of radius 50 over the default background."""
    sensor = sensor or SensorGeometry(640, 480)
    return SynthScene(
        sensor=sensor,
        duration=duration,
        propellers=(
            PropellerSpec(center=(sensor.width // 2, sensor.height // 2), radius=50),
        ),
        seed=seed,
        name=f"default_{seed:05d}",
    )


def bench_period(events: int, seed: int = 0) -> EventPeriod:
    """Default scene resized to exactly ``events`` events.

    Larger scenes are subsampled without replacement; smaller ones are padded
    with uniform noise.
    """
    if events < 0:
        raise ConfigurationError(f"Event count must be >= 0, got {events}")
    period, _ = generate_scene(default_scene(seed))
    rng = np.random.default_rng(seed + 1)
    data = np.array(period.events)
    if data.size >= events:
        keep = np.sort(rng.choice(data.size, size=events, replace=False))
        data = data[keep]
    else:
        missing = events - data.size
        padding = make_events(
            rng.integers(0, period.duration, size=missing),
            rng.integers(0, period.sensor.width, size=missing),
            rng.integers(0, period.sensor.height, size=missing),
            rng.integers(0, 2, size=missing),
        )
        data = np.concatenate([data, padding])
        data = data[np.argsort(data["t"], kind="stable")]
    return period.with_events(data)
