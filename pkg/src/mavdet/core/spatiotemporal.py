"""Saliency and periodicity scores of candidate areas."""

from typing import Protocol

import numpy as np
from scipy.signal import find_peaks

from mavdet.core.saliency import slice_indices
from mavdet.exceptions import ConfigurationError, DegenerateInputError
from mavdet.models.bbox import BBox
from mavdet.models.events import EventPeriod, Polarity
from mavdet.models.features import FeatureSeries, PointSet, PrincipalAxis
from mavdet.models.mode import ExtremaSource
from mavdet.models.saliency import SaliencyMap

MIN_EXTREMA = 2
MIN_SERIES_LENGTH = 5
PROMINENCE_STD_FACTOR = 0.5
ISOTROPY_TOLERANCE = 1e-12
# Relative spread below which a series counts as constant (float ripple).
CONSTANT_RTOL = 1e-9


class Boxed(Protocol):
    """Anything with a bounding box (Region, Cluster)."""

    @property
    def bbox(self) -> BBox: ...


class HasCoords(Protocol):
    """Anything with member cells (Region, Cluster)."""

    @property
    def coords(self) -> np.ndarray: ...


def local_window(period: EventPeriod, region: Boxed, margin: int) -> BBox:
    """Region bbox dilated by ``margin`` and clamped to the sensor.

    Raises:
        DegenerateInputError: Nothing of the window lies on the sensor
    """
    window = region.bbox.dilate(margin).clamp(period.sensor)
    if window is None:
        raise DegenerateInputError(f"Empty local window around {region.bbox}")
    return window


def extract_local_slices(
    period: EventPeriod, region: Boxed, m: int, margin: int
) -> np.ndarray:
    """Per-slice positive-event counts inside the dilated region bbox.

    Returns:
        (m, h, w) integer array; grid j counts positive events of slice j

    Raises:
        ConfigurationError: m < 4
        DegenerateInputError: Dilated window is empty
    """
    if m < 4:
        raise ConfigurationError(f"Feature slice count must be >= 4, got {m}")
    if m > period.duration:
        raise ConfigurationError(
            f"Feature slice count {m} exceeds period duration of {period.duration} us"
        )
    window = local_window(period, region, margin)

    x, y = period.x, period.y
    inside = (
        (period.p == Polarity.POSITIVE)
        & (x >= window.x)
        & (x < window.x1)
        & (y >= window.y)
        & (y < window.y1)
    )
    s = slice_indices(period.t[inside], period.t_start, period.duration, m)
    local_y = y[inside] - window.y
    local_x = x[inside] - window.x
    flat = (s * window.h + local_y) * window.w + local_x
    counts = np.bincount(flat, minlength=m * window.h * window.w)
    return counts.reshape(m, window.h, window.w)


def density_series(local_slices: np.ndarray) -> np.ndarray:
    """f_d: positive-event count of each slice."""
    return np.asarray(local_slices).sum(axis=(1, 2)).astype(np.float64)


def structural_similarity(slice_a: np.ndarray, slice_b: np.ndarray) -> float:
    """f_s: Pearson correlation of two flattened slice images.

    Constant slices carry no structure and score 0.
    """
    if slice_a.shape != slice_b.shape:
        raise ValueError(f"Slice shapes differ: {slice_a.shape} vs {slice_b.shape}")
    a = slice_a.ravel().astype(np.float64)
    b = slice_b.ravel().astype(np.float64)
    std_a, std_b = a.std(), b.std()
    if std_a == 0 or std_b == 0:
        return 0.0
    za = (a - a.mean()) / std_a
    zb = (b - b.mean()) / std_b
    return float(np.clip(za @ zb / a.size, -1.0, 1.0))


def principal_direction(points: PointSet) -> PrincipalAxis:
    """Unit eigenvector xi of the largest eigenvalue of C.

    The sign is canonical: first nonzero coordinate positive. Equal
    eigenvalues yield xi = (1, 0) flagged ``isotropic``.

    Raises:
        DegenerateInputError: Fewer than two distinct points
    """
    if points.w < 2 or np.all(points.points == points.points[0]):
        raise DegenerateInputError("Principal direction needs two distinct points")

    eigenvalues, eigenvectors = np.linalg.eigh(points.covariance)
    low, high = float(eigenvalues[0]), float(eigenvalues[1])
    if high - low <= ISOTROPY_TOLERANCE * max(high, 1.0):
        return PrincipalAxis(direction=(1.0, 0.0), eigenvalue=high, isotropic=True)

    xi = eigenvectors[:, 1]
    xi = xi / np.linalg.norm(xi)
    lead = xi[0] if abs(xi[0]) > ISOTROPY_TOLERANCE else xi[1]
    if lead < 0:
        xi = -xi
    return PrincipalAxis(direction=(float(xi[0]), float(xi[1])), eigenvalue=high)


def direction_similarity(xi_1: np.ndarray, xi_2: np.ndarray) -> float:
    """f_p = |xi_1 . xi_2| / (|xi_1| |xi_2|).

    Raises:
        ValueError: Either vector is zero
    """
    a = np.asarray(xi_1, dtype=np.float64)
    b = np.asarray(xi_2, dtype=np.float64)
    norm = np.linalg.norm(a) * np.linalg.norm(b)
    if norm == 0:
        raise ValueError("Direction vectors must be nonzero")
    return float(min(1.0, abs(a @ b) / norm))


def slice_points(local_slice: np.ndarray) -> PointSet | None:
    """Occupied cells of one slice as (x, y) points; None when empty."""
    ys, xs = np.nonzero(local_slice)
    if xs.size == 0:
        return None
    return PointSet(np.column_stack([xs, ys]))


def _slice_direction(local_slice: np.ndarray) -> np.ndarray | None:
    points = slice_points(local_slice)
    if points is None:
        return None
    try:
        return principal_direction(points).as_array()
    except DegenerateInputError:
        return None


def direction_series(local_slices: np.ndarray) -> np.ndarray:
    """f_p between consecutive slices; 1.0 where a slice has no direction."""
    directions = [_slice_direction(s) for s in local_slices]
    values = [
        1.0 if a is None or b is None else direction_similarity(a, b)
        for a, b in zip(directions[:-1], directions[1:], strict=True)
    ]
    return np.asarray(values, dtype=np.float64)


def compute_features(local_slices: np.ndarray) -> FeatureSeries:
    """f_d, f_s and f_p of one candidate's local slice stack."""
    f_s = [
        structural_similarity(a, b)
        for a, b in zip(local_slices[:-1], local_slices[1:], strict=True)
    ]
    return FeatureSeries(
        f_d=density_series(local_slices),
        f_s=np.asarray(f_s, dtype=np.float64),
        f_p=direction_series(local_slices),
    )


def moving_average(series: np.ndarray, window: int) -> np.ndarray:
    """Centered moving mean; edge windows are truncated to the series.

    Raises:
        ConfigurationError: Window even, < 1, or longer than the series
    """
    values = np.asarray(series, dtype=np.float64)
    if window < 1 or window % 2 == 0:
        raise ConfigurationError(f"Moving-average window must be odd, got {window}")
    if window > values.size:
        raise ConfigurationError(
            f"Window {window} longer than series of length {values.size}"
        )

    half = window // 2
    cumsum = np.concatenate([[0.0], np.cumsum(values)])
    idx = np.arange(values.size)
    lo = np.maximum(idx - half, 0)
    hi = np.minimum(idx + half + 1, values.size)
    return (cumsum[hi] - cumsum[lo]) / (hi - lo)


def is_constant(series: np.ndarray) -> bool:
    """Whether a series is flat up to floating-point ripple."""
    values = np.asarray(series, dtype=np.float64)
    if values.size == 0:
        return True
    scale = max(1.0, float(np.abs(values).mean()))
    return float(values.std()) <= CONSTANT_RTOL * scale


def peaks_valleys(series: np.ndarray) -> tuple[bool, bool]:
    """Whether a series repeats peaks and valleys.

    A peak is an interior strict local maximum (flat tops do not count) with
    prominence >= 0.5 * std; at least two are needed. Valleys mirror peaks.
    """
    values = np.asarray(series, dtype=np.float64)
    if values.size < MIN_SERIES_LENGTH or is_constant(values):
        return (False, False)

    prominence = PROMINENCE_STD_FACTOR * float(values.std())
    peaks, _ = find_peaks(values, prominence=prominence, plateau_size=(1, 1))
    valleys, _ = find_peaks(-values, prominence=prominence, plateau_size=(1, 1))
    return (peaks.size >= MIN_EXTREMA, valleys.size >= MIN_EXTREMA)


def autocorrelation(series: np.ndarray) -> np.ndarray:
    """Normalized autocorrelation for lags 0..L-1 (zeros for constants)."""
    values = np.asarray(series, dtype=np.float64)
    if is_constant(values):
        return np.zeros_like(values)
    centered = values - values.mean()
    energy = float(centered @ centered)
    full = np.correlate(centered, centered, mode="full")
    return full[values.size - 1 :] / energy


def _effective_window(window: int, length: int) -> int:
    if length <= 0:
        return 1
    capped = min(window, length)
    return capped if capped % 2 == 1 else capped - 1


def periodicity_score(
    features: FeatureSeries,
    smooth_window: int,
    source: ExtremaSource = ExtremaSource.SERIES,
) -> int:
    """s_p: one point per series for repeated peaks, one for valleys (max 6)."""
    if smooth_window < 1 or smooth_window % 2 == 0:
        raise ConfigurationError(
            f"Moving-average window must be odd, got {smooth_window}"
        )

    score = 0
    for series in (features.f_d, features.f_s, features.f_p):
        if series.size == 0:
            continue
        smoothed = moving_average(series, _effective_window(smooth_window, series.size))
        if source is ExtremaSource.AUTOCORRELATION:
            smoothed = autocorrelation(smoothed)
        has_peaks, has_valleys = peaks_valleys(smoothed)
        score += int(has_peaks) + int(has_valleys)
    return score


def saliency_score(region: HasCoords, saliency: SaliencyMap) -> float:
    """s_s: sum of gray values over the region's cells."""
    coords = region.coords
    if coords.size == 0:
        return 0.0
    return float(saliency.gray[coords[:, 1], coords[:, 0]].sum(dtype=np.int64))
