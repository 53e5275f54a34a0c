"""Clustering-based MAV detection (coarse-to-fine)."""

import math
from collections.abc import Sequence
from dataclasses import replace

import numpy as np
from scipy import ndimage

from mavdet.core.clustering import cluster_regions
from mavdet.core.saliency import (
    EIGHT_CONNECTED,
    build_saliency_map,
    connected_components,
    threshold_mask,
)
from mavdet.core.spatiotemporal import (
    compute_features,
    extract_local_slices,
    periodicity_score,
    saliency_score,
)
from mavdet.exceptions import DegenerateInputError
from mavdet.models.bbox import BBox
from mavdet.models.config import DetectorConfig
from mavdet.models.events import EventPeriod
from mavdet.models.features import FeatureSeries
from mavdet.models.mode import DetectionMode
from mavdet.models.regions import Cluster, Detection, Region, RegionScores
from mavdet.models.saliency import SaliencyMap
from mavdet.models.trace import Candidate, DetectionTrace
from mavdet.utils.logger import get_logger

logger = get_logger(__name__)


def _saliency_key(cluster: Cluster) -> tuple[float, int, tuple[int, int]]:
    s_s = cluster.scores.s_s if cluster.scores else 0.0
    return (-s_s, -cluster.area, cluster.bbox.top_left)


def _rank_by_saliency(
    clusters: Sequence[Cluster], saliency: SaliencyMap
) -> list[Cluster]:
    """Clusters with s_s filled, best first (ties: larger area, row-major)."""
    scored = [
        replace(c, scores=RegionScores(s_s=saliency_score(c, saliency), s_p=0))
        for c in clusters
    ]
    return sorted(scored, key=_saliency_key)


def score_periodicity(
    cluster: Cluster, period: EventPeriod, config: DetectorConfig
) -> tuple[int, FeatureSeries]:
    """s_p of one area from its local event stream."""
    config = config.resolve(period.duration)
    assert config.m_slices is not None
    local = extract_local_slices(period, cluster, config.m_slices, config.region_margin)
    features = compute_features(local)
    s_p = periodicity_score(features, config.smooth_window, config.extrema_source)
    return s_p, features


def coarse_select(
    clusters: Sequence[Cluster],
    period: EventPeriod,
    saliency: SaliencyMap,
    config: DetectorConfig,
) -> list[Candidate]:
    """Top-K areas by s_s, kept when s_p >= tau_p.

    Returns:
        Candidates ranked by s_p, then s_s, descending
    """
    top = _rank_by_saliency(clusters, saliency)[: config.k_top]
    candidates = []
    for cluster in top:
        try:
            s_p, features = score_periodicity(cluster, period, config)
        except DegenerateInputError as e:
            logger.warning(f"Skipping degenerate candidate {cluster.bbox}: {e}")
            continue
        s_s = cluster.scores.s_s if cluster.scores else 0.0
        logger.debug(f"Candidate {cluster.bbox}: s_s={s_s:.0f} s_p={s_p}")
        if s_p < config.tau_p:
            continue
        scored = replace(cluster, scores=RegionScores(s_s=s_s, s_p=s_p))
        candidates.append(Candidate(cluster=scored, features=features))

    candidates.sort(key=lambda c: (-c.s_p, -c.s_s, c.cluster.bbox.top_left))
    return candidates


def shape_ratio(coords: np.ndarray, weights: np.ndarray) -> tuple[np.ndarray, float]:
    """Gray-weighted centroid and 2-sigma ellipse area over pixel area."""
    w = weights.astype(np.float64)
    points = coords.astype(np.float64)
    centroid = (points * w[:, None]).sum(axis=0) / w.sum()
    centered = points - centroid
    covariance = (centered * w[:, None]).T @ centered / w.sum()
    det = max(float(np.linalg.det(covariance)), 0.0)
    ellipse_area = 4.0 * math.pi * math.sqrt(det)
    return centroid, ellipse_area / coords.shape[0]


def gaussian_fine_refine(
    candidate: Cluster,
    saliency: SaliencyMap,
    tau_s: int,
    ratio_range: tuple[float, float] = (0.5, 2.0),
) -> Detection:
    """Keep the components inside the candidate whose Gaussian shape is consistent.

    A component is consistent when its 2-sigma ellipse area is within
    ``ratio_range`` of its pixel area and its centroid lies in the candidate
    box. Falls back to the whole candidate when none is.
    """
    window = candidate.bbox
    gray = saliency.gray[window.slices()]
    labels, count = ndimage.label(gray > tau_s, structure=EIGHT_CONNECTED)

    kept: list[np.ndarray] = []
    for label in range(1, count + 1):
        ys, xs = np.nonzero(labels == label)
        coords = np.column_stack([xs + window.x, ys + window.y]).astype(np.int64)
        centroid, ratio = shape_ratio(coords, gray[ys, xs])
        inside = window.contains(float(centroid[0]), float(centroid[1]))
        if inside and ratio_range[0] <= ratio <= ratio_range[1]:
            kept.append(coords)
        else:
            logger.debug(f"Dropping component of {len(coords)} px, ratio {ratio:.2f}")

    scores = candidate.scores or RegionScores(
        s_s=saliency_score(candidate, saliency), s_p=0
    )
    if not kept:
        return Detection(
            bbox=window, s_p=scores.s_p, s_s=scores.s_s, coords=candidate.coords
        )

    coords = np.concatenate(kept, axis=0)
    x0, y0 = coords.min(axis=0)
    x1, y1 = coords.max(axis=0) + 1
    bbox = BBox.from_corners(x0, y0, x1, y1)
    return Detection(bbox=bbox, s_p=scores.s_p, s_s=scores.s_s, coords=coords)


class MAVDetector:
    """Detect MAV propellers in event periods."""

    def __init__(self, config: DetectorConfig | None = None) -> None:
        """Initialize detector.

        Args:
            config: Detector parameters (default: DetectorConfig())
        """
        self.config = config or DetectorConfig()

    def detect(self, period: EventPeriod) -> list[Detection]:
        """Ranked detections of one period."""
        return list(self.run(period).detections)

    def run(self, period: EventPeriod) -> DetectionTrace:
        """Run the pipeline and keep every intermediate result.

        Raises:
            ConfigurationError: Slice counts do not fit the period
        """
        config = self.config.resolve(period.duration)
        assert config.n_slices is not None

        saliency = build_saliency_map(period, config.n_slices)
        regions = connected_components(threshold_mask(saliency, config.tau_s))
        logger.debug(f"{len(regions)} regions above tau_s={config.tau_s}")

        mode = config.mode
        if mode is DetectionMode.SALIENCY:
            detections = self._saliency_only(regions, saliency)
            return DetectionTrace(
                config=config,
                saliency=saliency,
                regions=tuple(regions),
                clusters=(),
                candidates=(),
                detections=detections,
            )

        if mode.uses_clustering:
            clusters = cluster_regions(regions, config.d_merge)
        else:
            clusters = [Cluster(members=(r,)) for r in regions]

        if mode.uses_periodicity:
            # Without clustering every region is scored, not only the top K.
            coarse_config = config
            if not mode.uses_clustering:
                coarse_config = replace(config, k_top=max(1, len(clusters)))
            candidates = coarse_select(clusters, period, saliency, coarse_config)
        else:
            ranked = _rank_by_saliency(clusters, saliency)[: config.k_top]
            candidates = [Candidate(cluster=c) for c in ranked]

        if mode.uses_clustering:
            ratio_range = (config.shape_ratio_min, config.shape_ratio_max)
            detections = tuple(
                gaussian_fine_refine(c.cluster, saliency, config.tau_s, ratio_range)
                for c in candidates
            )
        else:
            detections = tuple(
                Detection(c.cluster.bbox, c.s_p, c.s_s, c.cluster.coords)
                for c in candidates
            )

        logger.debug(f"{len(detections)} detections ({mode})")
        return DetectionTrace(
            config=config,
            saliency=saliency,
            regions=tuple(regions),
            clusters=tuple(clusters),
            candidates=tuple(candidates),
            detections=detections,
        )

    @staticmethod
    def _saliency_only(
        regions: Sequence[Region], saliency: SaliencyMap
    ) -> tuple[Detection, ...]:
        scored = [(saliency_score(r, saliency), r) for r in regions]
        scored.sort(key=lambda item: (-item[0], item[1].bbox.top_left))
        return tuple(Detection(r.bbox, 0, s_s, r.coords) for s_s, r in scored)


def detect_period(period: EventPeriod, config: DetectorConfig) -> list[Detection]:
    """Full pipeline: saliency, threshold, components, clusters, coarse, fine."""
    return MAVDetector(config).detect(period)
