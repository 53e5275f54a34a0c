"""Tests for saliency and periodicity scoring."""

import math

import numpy as np
import pytest

from mavdet.core.spatiotemporal import (
    autocorrelation,
    compute_features,
    density_series,
    direction_similarity,
    extract_local_slices,
    local_window,
    moving_average,
    peaks_valleys,
    periodicity_score,
    principal_direction,
    saliency_score,
    structural_similarity,
)
from mavdet.exceptions import ConfigurationError, DegenerateInputError
from mavdet.models.bbox import BBox
from mavdet.models.events import EventPeriod, SensorGeometry, make_events
from mavdet.models.features import FeatureSeries, PointSet
from mavdet.models.mode import ExtremaSource
from mavdet.models.regions import Region
from mavdet.models.saliency import SaliencyMap

EIGEN_TRIALS = 1000
ORACLE_ANGLES = 3600


def _region(x: int, y: int, w: int, h: int) -> Region:
    xs, ys = np.meshgrid(np.arange(x, x + w), np.arange(y, y + h))
    return Region(BBox(x, y, w, h), np.column_stack([xs.ravel(), ys.ravel()]))


def _empty_period(size: int, duration: int = 1000) -> EventPeriod:
    events = make_events([], [], [], [])
    return EventPeriod(events, 0, duration, SensorGeometry(size, size))


def _saliency(gray: np.ndarray) -> SaliencyMap:
    counts = np.zeros(gray.shape, np.int32)
    return SaliencyMap(counts=counts, gray=gray, n_slices=20)


def _sine(
    length: int, cycles: float, offset: float = 0.0, scale: float = 1.0
) -> np.ndarray:
    i = np.arange(length)
    return offset + scale * np.sin(2 * math.pi * cycles * i / length)


class TestLocalSlices:
    """Test local event stream extraction."""

    def test_window_dilation(self) -> None:
        """Test margin 2 around (10, 10, 5, 5)."""
        period = _empty_period(64)

        assert local_window(period, _region(10, 10, 5, 5), 2) == BBox(8, 8, 9, 9)

    def test_window_clamped(self) -> None:
        """Test dilation clamps to the sensor."""
        period = _empty_period(64)

        assert local_window(period, _region(0, 0, 3, 3), 2) == BBox(0, 0, 5, 5)

    def test_positive_counts_per_slice(self) -> None:
        """Test m slices of positive counts inside the window."""
        events = make_events(
            [0, 10, 600, 700, 700, 900],
            [5, 5, 6, 6, 30, 5],
            [5, 5, 6, 6, 30, 5],
            [1, 1, 1, 0, 1, 1],
        )
        period = EventPeriod(events, 0, 1000, SensorGeometry(64, 64))

        local = extract_local_slices(period, _region(5, 5, 2, 2), m=4, margin=0)

        assert local.shape == (4, 2, 2)
        assert local[0, 0, 0] == 2
        assert local[2, 1, 1] == 1
        assert local[3, 0, 0] == 1
        assert local[1].sum() == 0
        assert density_series(local).tolist() == [2.0, 0.0, 1.0, 1.0]

    def test_uniform_partition(self) -> None:
        """Test 20 ms into 40 slices of 0.5 ms."""
        events = make_events([499, 500, 19_999], [1, 1, 1], [1, 1, 1], [1, 1, 1])
        period = EventPeriod(events, 0, 20_000, SensorGeometry(8, 8))

        local = extract_local_slices(period, _region(0, 0, 4, 4), m=40, margin=2)

        assert local.shape[0] == 40
        assert density_series(local)[[0, 1, 39]].tolist() == [1.0, 1.0, 1.0]

    def test_too_few_slices(self) -> None:
        """Test m below 4."""
        period = _empty_period(8)
        with pytest.raises(ConfigurationError):
            extract_local_slices(period, _region(0, 0, 2, 2), m=3, margin=0)

    def test_empty_window(self) -> None:
        """Test a region entirely off the sensor."""
        period = _empty_period(8)
        region = Region(BBox(20, 20, 2, 2), np.array([[20, 20]]))

        with pytest.raises(DegenerateInputError):
            extract_local_slices(period, region, m=4, margin=0)


class TestStructuralSimilarity:
    """Test f_s."""

    def test_identical(self) -> None:
        """Test identical non-constant slices."""
        a = np.array([[0, 1], [2, 5]])
        assert structural_similarity(a, a) == pytest.approx(1.0)

    def test_inverted(self) -> None:
        """Test value-inverted pattern."""
        a = np.array([[0, 1], [2, 5]])
        assert structural_similarity(a, 7 - a) == pytest.approx(-1.0)

    def test_affine_invariance(self) -> None:
        """Test positive affine maps leave f_s unchanged."""
        rng = np.random.default_rng(5)
        a = rng.integers(0, 9, size=(6, 6))
        b = rng.integers(0, 9, size=(6, 6))
        assert structural_similarity(a, 3 * a + 5) == pytest.approx(1.0)
        assert structural_similarity(a, 2 * b + 1) == pytest.approx(
            structural_similarity(a, b)
        )

    def test_constant_slice(self) -> None:
        """Test constant slices score 0."""
        a = np.array([[0, 1], [2, 5]])
        assert structural_similarity(a, np.zeros((2, 2))) == 0.0


class TestPrincipalDirection:
    """Test the principal direction xi."""

    def test_horizontal(self) -> None:
        """Test collinear horizontal points."""
        axis = principal_direction(PointSet(np.array([[0, 0], [1, 0], [2, 0]])))
        assert np.allclose(axis.as_array(), [1.0, 0.0])
        assert not axis.isotropic

    def test_diagonal(self) -> None:
        """Test collinear diagonal points."""
        axis = principal_direction(PointSet(np.array([[0, 0], [1, 1], [2, 2]])))
        assert np.allclose(axis.as_array(), [math.sqrt(2) / 2, math.sqrt(2) / 2])

    def test_canonical_sign(self) -> None:
        """Test first nonzero coordinate is positive."""
        axis = principal_direction(PointSet(np.array([[0, 2], [1, 1], [2, 0]])))
        assert axis.direction[0] > 0
        assert np.allclose(axis.as_array(), [math.sqrt(2) / 2, -math.sqrt(2) / 2])

    def test_identical_points(self) -> None:
        """Test all points identical."""
        with pytest.raises(DegenerateInputError):
            principal_direction(PointSet(np.array([[3, 3], [3, 3]])))

    def test_isotropic(self) -> None:
        """Test equal eigenvalues fall back to (1, 0)."""
        square = PointSet(np.array([[0, 0], [1, 0], [0, 1], [1, 1]]))
        axis = principal_direction(square)
        assert axis.isotropic
        assert axis.direction == (1.0, 0.0)

    @pytest.mark.parametrize("degrees", [30.0, 90.0])
    def test_rotation_equivariance(self, degrees: float) -> None:
        """Test rotating a collinear set rotates xi."""
        theta = math.radians(degrees)
        i = np.arange(5, dtype=float)
        points = np.column_stack([i * math.cos(theta), i * math.sin(theta)])

        axis = principal_direction(PointSet(points)).as_array()

        assert abs(axis @ [math.cos(theta), math.sin(theta)]) == pytest.approx(1.0)

    def test_variance_sweep_oracle(self) -> None:
        """Test xi matches a 3600-angle projected-variance sweep within 1 degree."""
        rng = np.random.default_rng(42)
        angles = np.arange(ORACLE_ANGLES) * math.pi / ORACLE_ANGLES
        sweep = np.column_stack([np.cos(angles), np.sin(angles)])

        for _ in range(EIGEN_TRIALS):
            w = int(rng.integers(5, 60))
            spread = np.array([rng.uniform(2.0, 10.0), rng.uniform(0.2, 1.0)])
            theta = rng.uniform(0, math.pi)
            c, s = math.cos(theta), math.sin(theta)
            rotation = np.array([[c, -s], [s, c]])
            points = (rng.normal(size=(w, 2)) * spread) @ rotation.T + 50.0

            xi = principal_direction(PointSet(points)).as_array()

            centered = points - points.mean(axis=0)
            best = angles[np.argmax((centered @ sweep.T).var(axis=0))]
            found = math.atan2(xi[1], xi[0]) % math.pi
            diff = abs(found - best) % math.pi
            assert min(diff, math.pi - diff) <= math.radians(1.0)


class TestDirectionSimilarity:
    """Test f_p."""

    def test_orthogonal(self) -> None:
        """Test orthogonal directions."""
        assert direction_similarity(np.array([1, 0]), np.array([0, 1])) == 0.0

    def test_identical(self) -> None:
        """Test identical directions."""
        xi = np.array([0.6, 0.8])
        assert direction_similarity(xi, xi) == pytest.approx(1.0)

    def test_45_degrees(self) -> None:
        """Test the 45 degree case."""
        half = math.sqrt(2) / 2
        value = direction_similarity(np.array([1.0, 0.0]), np.array([half, half]))
        assert value == pytest.approx(0.7071, abs=1e-4)

    def test_sign_invariance(self) -> None:
        """Test flipping a direction leaves f_p unchanged."""
        a, b = np.array([0.6, 0.8]), np.array([1.0, 0.0])
        assert direction_similarity(a, -b) == direction_similarity(a, b)

    def test_zero_vector(self) -> None:
        """Test zero vector."""
        with pytest.raises(ValueError):
            direction_similarity(np.array([0.0, 0.0]), np.array([1.0, 0.0]))


class TestMovingAverage:
    """Test smoothing."""

    def test_identity_window(self) -> None:
        """Test window 1."""
        series = np.array([3.0, 1.0, 4.0])
        assert np.array_equal(moving_average(series, 1), series)

    def test_constant(self) -> None:
        """Test constant series unchanged."""
        assert np.allclose(moving_average(np.full(7, 2.5), 5), 2.5)

    def test_truncated_edges(self) -> None:
        """Test [0, 3, 0] with window 3."""
        smoothed = moving_average(np.array([0.0, 3.0, 0.0]), 3)
        assert np.allclose(smoothed, [1.5, 1.0, 1.5])

    def test_even_window(self) -> None:
        """Test even window."""
        with pytest.raises(ConfigurationError, match="odd"):
            moving_average(np.zeros(5), 2)

    def test_window_too_long(self) -> None:
        """Test window longer than the series."""
        with pytest.raises(ConfigurationError):
            moving_average(np.zeros(2), 3)


class TestPeaksValleys:
    """Test repeated extrema detection."""

    def test_constant(self) -> None:
        """Test constant series."""
        assert peaks_valleys(np.ones(20)) == (False, False)

    def test_three_cycle_sine(self) -> None:
        """Test sine over three full periods."""
        assert peaks_valleys(_sine(60, 3)) == (True, True)

    def test_single_bump(self) -> None:
        """Test one triangular bump."""
        bump = np.array([0, 0, 0, 1, 2, 3, 2, 1, 0, 0, 0], dtype=float)
        assert peaks_valleys(bump) == (False, False)

    def test_short_series(self) -> None:
        """Test fewer than five samples."""
        assert peaks_valleys(np.array([0.0, 1.0, 0.0, 1.0])) == (False, False)

    @pytest.mark.parametrize("level", [0.2, 0.9, 5.0, 1234.5])
    def test_smoothed_constant(self, level: float) -> None:
        """Test rounding ripple left by smoothing a constant is ignored."""
        smoothed = moving_average(np.full(40, level), 3)
        assert peaks_valleys(smoothed) == (False, False)

    def test_plateau_not_a_peak(self) -> None:
        """Test flat tops are not strict maxima."""
        series = np.array([0, 2, 2, 0, 2, 2, 0, 1], dtype=float)
        assert peaks_valleys(series) == (False, True)

    def test_plateau_not_a_valley(self) -> None:
        """Test flat bottoms are not strict minima."""
        series = np.array([2, 0, 0, 2, 0, 0, 2, 1], dtype=float)
        assert peaks_valleys(series) == (True, False)


def _features(f_d: np.ndarray, f_s: np.ndarray, f_p: np.ndarray) -> FeatureSeries:
    return FeatureSeries(f_d=f_d, f_s=f_s, f_p=f_p)


class TestPeriodicityScore:
    """Test s_p."""

    M = 41

    def _flat(self) -> FeatureSeries:
        return _features(
            np.full(self.M, 5.0), np.zeros(self.M - 1), np.ones(self.M - 1)
        )

    def test_all_constant(self) -> None:
        """Test constant series score 0."""
        features = self._flat()
        assert periodicity_score(features, 3) == 0

    def test_all_periodic(self) -> None:
        """Test three multi-cycle sinusoids score 6."""
        features = _features(
            _sine(self.M, 4, offset=100, scale=20),
            _sine(self.M - 1, 4, scale=0.5),
            _sine(self.M - 1, 4, offset=0.5, scale=0.4),
        )
        assert periodicity_score(features, 3) == 6

    def test_only_density_periodic(self) -> None:
        """Test periodic f_d with constant f_s and f_p."""
        features = _features(
            _sine(self.M, 4, offset=100, scale=20),
            np.full(self.M - 1, 0.2),
            np.full(self.M - 1, 0.9),
        )
        assert periodicity_score(features, 3) == 2

    def test_non_integer_constants(self) -> None:
        """Test constants that smoothing cannot reproduce exactly score 0."""
        features = _features(
            np.full(self.M, 5.0), np.full(self.M - 1, 0.2), np.full(self.M - 1, 0.9)
        )

        assert periodicity_score(features, 3) == 0
        assert periodicity_score(features, 3, ExtremaSource.AUTOCORRELATION) == 0

    def test_scale_invariance(self) -> None:
        """Test uniform positive scaling keeps s_p."""
        rng = np.random.default_rng(9)
        for _ in range(50):
            f_d = rng.uniform(0, 100, size=self.M)
            f_s = rng.uniform(-1, 1, size=self.M - 1)
            f_p = rng.uniform(0, 1, size=self.M - 1)
            base = periodicity_score(_features(f_d, f_s, f_p), 3)
            scaled = periodicity_score(_features(7.0 * f_d, 0.5 * f_s, 0.5 * f_p), 3)
            assert base == scaled
            assert 0 <= base <= 6

    def test_autocorrelation_source(self) -> None:
        """Test extrema counted on the autocorrelation."""
        periodic = _features(
            _sine(self.M, 4, offset=100, scale=20),
            _sine(self.M - 1, 4, scale=0.5),
            _sine(self.M - 1, 4, offset=0.5, scale=0.4),
        )
        flat = self._flat()

        assert periodicity_score(periodic, 3, ExtremaSource.AUTOCORRELATION) == 6
        assert periodicity_score(flat, 3, ExtremaSource.AUTOCORRELATION) == 0

    def test_window_capped(self) -> None:
        """Test windows longer than a short series are capped."""
        features = _features(np.array([1.0, 2.0, 1.0]), np.zeros(2), np.ones(2))
        assert periodicity_score(features, 5) == 0

    def test_autocorrelation_lag_zero(self) -> None:
        """Test normalized autocorrelation starts at 1."""
        acf = autocorrelation(_sine(40, 4))
        assert acf[0] == pytest.approx(1.0)
        assert acf.shape == (40,)


class TestFeatures:
    """Test feature extraction from a local stack."""

    def test_lengths(self) -> None:
        """Test m, m - 1, m - 1 entries."""
        rng = np.random.default_rng(0)
        local = rng.integers(0, 3, size=(6, 5, 5))

        features = compute_features(local)

        assert features.f_d.shape == (6,)
        assert features.f_s.shape == (5,)
        assert features.f_p.shape == (5,)

    def test_missing_direction_scores_one(self) -> None:
        """Test slices without two distinct cells give f_p 1."""
        local = np.zeros((3, 4, 4), dtype=np.int64)
        local[1, 0, 0] = 1
        local[2, 0, :] = 1

        features = compute_features(local)

        assert features.f_p.tolist() == [1.0, 1.0]


class TestSaliencyScore:
    """Test s_s."""

    def test_direct_sum(self) -> None:
        """Test 9 cells of gray 51."""
        gray = np.full((10, 10), 51, dtype=np.uint8)
        saliency = _saliency(gray)

        assert saliency_score(_region(2, 2, 3, 3), saliency) == 459.0

    def test_zero_region(self) -> None:
        """Test all-zero gray."""
        gray = np.zeros((10, 10), dtype=np.uint8)
        saliency = _saliency(gray)

        assert saliency_score(_region(0, 0, 4, 4), saliency) == 0.0

    def test_monotone_growth(self) -> None:
        """Test a superset region never scores lower."""
        rng = np.random.default_rng(1)
        gray = rng.integers(0, 256, size=(10, 10)).astype(np.uint8)
        saliency = _saliency(gray)

        assert saliency_score(_region(1, 1, 5, 5), saliency) >= saliency_score(
            _region(2, 2, 3, 3), saliency
        )
