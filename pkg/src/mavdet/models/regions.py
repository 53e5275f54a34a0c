"""Candidate areas and detections."""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from mavdet.models.bbox import BBox, union_all


@dataclass(frozen=True, eq=False)
class Region:
    """One 8-connected component of the thresholded saliency map.

    Attributes:
        bbox: Tight bounding box
        coords: (k, 2) integer array of (x, y) cells
    """

    bbox: BBox
    coords: np.ndarray

    def __post_init__(self) -> None:
        """Validate cells."""
        if self.coords.ndim != 2 or self.coords.shape[1] != 2:
            raise ValueError(f"coords must be (k, 2), got {self.coords.shape}")
        if self.coords.shape[0] < 1:
            raise ValueError("Region must contain at least one pixel")

    @property
    def area(self) -> int:
        return int(self.coords.shape[0])

    @cached_property
    def pixels(self) -> frozenset[tuple[int, int]]:
        """Cells as a set of (x, y) tuples."""
        return frozenset((int(x), int(y)) for x, y in self.coords)


@dataclass(frozen=True)
class RegionScores:
    """Saliency and periodicity scores of a candidate area."""

    s_s: float
    s_p: int

    def __post_init__(self) -> None:
        """Validate scores."""
        if self.s_s < 0:
            raise ValueError(f"Invalid saliency score: {self.s_s}")
        if not 0 <= self.s_p <= 6:
            raise ValueError(f"Invalid periodicity score: {self.s_p}")


@dataclass(frozen=True, eq=False)
class Cluster:
    """Group of regions merged by rectangle min-distance.

    Attributes:
        members: Regions, row-major by bbox top-left
        bbox: Minimal box covering every member bbox
        scores: Filled once the coarse stage scores the cluster
    """

    members: tuple[Region, ...]
    bbox: BBox = field(init=False)
    scores: RegionScores | None = None

    def __post_init__(self) -> None:
        """Derive the union box."""
        if not self.members:
            raise ValueError("Cluster must have at least one member")
        object.__setattr__(self, "bbox", union_all([m.bbox for m in self.members]))

    @property
    def area(self) -> int:
        """Pixel count over all members."""
        return sum(m.area for m in self.members)

    @cached_property
    def coords(self) -> np.ndarray:
        """Member cells stacked in member order."""
        return np.concatenate([m.coords for m in self.members], axis=0)


@dataclass(frozen=True, eq=False)
class Detection:
    """Final propeller area P(x, y, w, h) with its scores.

    Attributes:
        bbox: Output box
        s_p: Periodicity score
        s_s: Saliency score
        coords: (k, 2) array of segmented (x, y) cells
    """

    bbox: BBox
    s_p: int
    s_s: float
    coords: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), np.int64))

    @property
    def confidence(self) -> tuple[int, float]:
        """Ranking key: s_p first, then s_s."""
        return (self.s_p, self.s_s)

    @cached_property
    def pixels(self) -> frozenset[tuple[int, int]]:
        return frozenset((int(x), int(y)) for x, y in self.coords)
