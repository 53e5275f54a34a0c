"""Density-aware saliency map.

The period is cut into n slices; a cell is salient in a slice when it saw
both a positive and a negative event. Rotating blades revisit the same
cells every blade pass, so their intersections accumulate while translating
edges contribute at most once per cell.
"""

from collections.abc import Sequence

import numpy as np
from scipy import ndimage

from mavdet.exceptions import ConfigurationError
from mavdet.models.bbox import BBox
from mavdet.models.events import EventPeriod, Polarity
from mavdet.models.regions import Region
from mavdet.models.saliency import PolaritySlicePair, SaliencyMap
from mavdet.utils.logger import get_logger

logger = get_logger(__name__)

EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


def slice_indices(t: np.ndarray, t_start: int, duration: int, n: int) -> np.ndarray:
    """0-based slice of each timestamp; the last boundary is inclusive."""
    offsets = t.astype(np.int64) - t_start
    index = offsets * n // duration
    return np.clip(index, 0, n - 1)


def _check_slice_count(period: EventPeriod, n: int) -> None:
    if n < 2:
        raise ConfigurationError(f"Slice count must be >= 2, got {n}")
    if n > period.duration:
        raise ConfigurationError(
            f"Slice count {n} exceeds period duration of {period.duration} us"
        )


def occupancy_volumes(period: EventPeriod, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Stacked (n, height, width) occupancy of positive and negative events."""
    _check_slice_count(period, n)
    shape = (n, *period.sensor.shape)
    pos = np.zeros(shape, dtype=bool)
    neg = np.zeros(shape, dtype=bool)
    if len(period) == 0:
        return pos, neg

    s = slice_indices(period.t, period.t_start, period.duration, n)
    positive = period.p == Polarity.POSITIVE
    pos[s[positive], period.y[positive], period.x[positive]] = True
    neg[s[~positive], period.y[~positive], period.x[~positive]] = True
    return pos, neg


def partition_polarity_slices(period: EventPeriod, n: int) -> list[PolaritySlicePair]:
    """Split a period into n polarity occupancy pairs.

    Slice t covers [t_start + (t-1)*dT/n, t_start + t*dT/n).

    Raises:
        ConfigurationError: n < 2 or n larger than the duration in us
    """
    pos, neg = occupancy_volumes(period, n)
    return [
        PolaritySlicePair(pos=pos[i], neg=neg[i], slice_index=i + 1) for i in range(n)
    ]


def polarity_intersection(pair: PolaritySlicePair) -> np.ndarray:
    """I_s^t = I_p^t AND I_n^t."""
    return np.logical_and(pair.pos, pair.neg)


def render_gray(counts: np.ndarray, n_slices: int) -> np.ndarray:
    """8-bit rendering with round-half-up, saturating at 255."""
    scaled = np.floor(255.0 * counts.astype(np.float64) / n_slices + 0.5)
    return np.minimum(scaled, 255).astype(np.uint8)


def accumulate_saliency(
    intersections: Sequence[np.ndarray] | np.ndarray,
) -> SaliencyMap:
    """Sum per-slice intersections into the saliency map.

    Raises:
        ConfigurationError: Grids differ in shape or the sequence is empty
    """
    if isinstance(intersections, np.ndarray) and intersections.ndim == 3:
        stack = intersections
    else:
        grids = list(intersections)
        if not grids:
            raise ConfigurationError("Cannot accumulate zero slices")
        shapes = {g.shape for g in grids}
        if len(shapes) != 1:
            raise ConfigurationError(f"Slice grids differ in shape: {sorted(shapes)}")
        stack = np.stack(grids)

    n = int(stack.shape[0])
    counts = stack.sum(axis=0, dtype=np.int32)
    return SaliencyMap(counts=counts, gray=render_gray(counts, n), n_slices=n)


def build_saliency_map(period: EventPeriod, n: int) -> SaliencyMap:
    """partition -> intersect -> accumulate in one vectorized pass."""
    pos, neg = occupancy_volumes(period, n)
    np.logical_and(pos, neg, out=pos)
    saliency = accumulate_saliency(pos)
    logger.debug(
        f"Saliency over {n} slices: max count {int(saliency.counts.max())}, "
        f"{int(np.count_nonzero(saliency.counts))} active cells"
    )
    return saliency


def threshold_mask(saliency: SaliencyMap, tau_s: int) -> np.ndarray:
    """Cells whose gray value is strictly above tau_s."""
    if not 0 <= tau_s <= 255:
        raise ConfigurationError(f"tau_s must be in 0-255, got {tau_s}")
    return saliency.gray > tau_s


def connected_components(mask: np.ndarray) -> list[Region]:
    """Maximal 8-connected regions, row-major by bbox top-left."""
    labels, count = ndimage.label(mask, structure=EIGHT_CONNECTED)
    if count == 0:
        return []

    ys, xs = np.nonzero(labels)
    label_of = labels[ys, xs]
    order = np.argsort(label_of, kind="stable")
    ys, xs, label_of = ys[order], xs[order], label_of[order]
    bounds = np.searchsorted(label_of, np.arange(1, count + 2))

    regions = []
    spans = zip(bounds[:-1], bounds[1:], strict=True)
    for objects, (lo, hi) in zip(ndimage.find_objects(labels), spans, strict=True):
        rows, cols = objects
        bbox = BBox.from_corners(cols.start, rows.start, cols.stop, rows.stop)
        coords = np.column_stack([xs[lo:hi], ys[lo:hi]]).astype(np.int64)
        regions.append(Region(bbox=bbox, coords=coords))

    regions.sort(key=lambda r: r.bbox.top_left)
    return regions
