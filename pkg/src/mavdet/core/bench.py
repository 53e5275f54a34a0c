"""Detector latency benchmark."""

import time

import numpy as np

from mavdet.core.detector import MAVDetector
from mavdet.core.synth import bench_period
from mavdet.exceptions import ConfigurationError
from mavdet.models.config import DetectorConfig
from mavdet.models.metrics import BenchmarkReport
from mavdet.utils.logger import get_logger

logger = get_logger(__name__)


def run_benchmark(
    events: int = 200_000,
    reps: int = 50,
    seed: int = 0,
    config: DetectorConfig | None = None,
) -> BenchmarkReport:
    """Time the full pipeline on the default 640x480, 20 ms scene.

    Args:
        events: Exact event count of the benchmark period
        reps: Timed runs
        seed: Scene seed
        config: Detector parameters

    Returns:
        Median, 95th percentile and mean wall time per period

    Raises:
        ConfigurationError: reps < 1 or events < 0
    """
    if reps < 1:
        raise ConfigurationError(f"reps must be >= 1, got {reps}")
    period = bench_period(events, seed)
    detector = MAVDetector(config)
    logger.info(f"Benchmarking {len(period)} events x {reps} runs")

    # warm-up
    detector.detect(period)

    timings = np.empty(reps, dtype=np.float64)
    for i in range(reps):
        start = time.perf_counter()
        detector.detect(period)
        timings[i] = (time.perf_counter() - start) * 1000.0

    median = float(np.median(timings))
    return BenchmarkReport(
        events=len(period),
        reps=reps,
        median_ms=median,
        p95_ms=median if reps == 1 else float(np.percentile(timings, 95)),
        mean_ms=float(timings.mean()),
    )
