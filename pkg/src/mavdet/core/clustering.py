"""Rectangle min-distance clustering of saliency regions."""

import math
from collections.abc import Sequence

import numpy as np

from mavdet.models.bbox import BBox
from mavdet.models.regions import Cluster, Region
from mavdet.utils.logger import get_logger

logger = get_logger(__name__)


def rect_gaps(a: BBox, b: BBox) -> tuple[int, int]:
    """Horizontal and vertical gaps between two boxes (0 where they overlap)."""
    dx = max(0, b.x - a.x1, a.x - b.x1)
    dy = max(0, b.y - a.y1, a.y - b.y1)
    return dx, dy


def rect_min_distance(a: BBox, b: BBox) -> float:
    """Distance between the closest points of two boxes; 0 when touching."""
    dx, dy = rect_gaps(a, b)
    return math.hypot(dx, dy)


def _pairwise_gap_sq(boxes: list[BBox]) -> np.ndarray:
    x0 = np.array([b.x for b in boxes], dtype=np.int64)
    y0 = np.array([b.y for b in boxes], dtype=np.int64)
    x1 = np.array([b.x1 for b in boxes], dtype=np.int64)
    y1 = np.array([b.y1 for b in boxes], dtype=np.int64)
    dx = np.maximum(0, np.maximum(x0[None, :] - x1[:, None], x0[:, None] - x1[None, :]))
    dy = np.maximum(0, np.maximum(y0[None, :] - y1[:, None], y0[:, None] - y1[None, :]))
    return dx * dx + dy * dy


def cluster_regions(regions: Sequence[Region], d_merge: float) -> list[Cluster]:
    """Single-linkage agglomeration on union-box min-distance.

    Repeatedly merges the closest pair of clusters while their union boxes
    are at most ``d_merge`` apart. Equal distances resolve to the pair whose
    first cluster, then second cluster, comes first row-major by top-left.

    Args:
        regions: Pairwise disjoint regions
        d_merge: Merge distance in pixels

    Returns:
        Clusters, row-major by bbox top-left
    """
    ordered = sorted(regions, key=lambda r: r.bbox.top_left)
    # Each group holds indices into ``ordered``; the smallest index breaks
    # ties between groups with the same top-left corner.
    groups: list[list[int]] = [[i] for i in range(len(ordered))]
    boxes: list[BBox] = [r.bbox for r in ordered]
    limit_sq = d_merge * d_merge

    while len(groups) > 1:
        gap_sq = _pairwise_gap_sq(boxes)
        upper = np.triu(np.ones_like(gap_sq, dtype=bool), k=1)
        best = int(gap_sq[upper].min())
        if best > limit_sq:
            break

        i, j = (int(v) for v in np.argwhere(upper & (gap_sq == best))[0])
        groups[i] = sorted(groups[i] + groups[j])
        boxes[i] = boxes[i].union(boxes[j])
        del groups[j], boxes[j]

        order = sorted(
            range(len(groups)), key=lambda k: (boxes[k].top_left, groups[k][0])
        )
        groups = [groups[k] for k in order]
        boxes = [boxes[k] for k in order]

    clusters = [Cluster(members=tuple(ordered[k] for k in group)) for group in groups]
    logger.debug(f"Clustered {len(ordered)} regions into {len(clusters)} clusters")
    return clusters

