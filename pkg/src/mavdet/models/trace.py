"""Intermediate results of one detector run."""

from dataclasses import dataclass

from mavdet.models.config import DetectorConfig
from mavdet.models.features import FeatureSeries
from mavdet.models.regions import Cluster, Detection, Region
from mavdet.models.saliency import SaliencyMap


@dataclass(frozen=True, eq=False)
class Candidate:
    """A scored area that passed the coarse stage."""

    cluster: Cluster
    features: FeatureSeries | None = None

    @property
    def s_s(self) -> float:
        """Saliency score, 0 when the cluster was never scored."""
        return self.cluster.scores.s_s if self.cluster.scores else 0.0

    @property
    def s_p(self) -> int:
        """Periodicity score, 0 when the cluster was never scored."""
        return self.cluster.scores.s_p if self.cluster.scores else 0


@dataclass(frozen=True, eq=False)
class DetectionTrace:
    """Everything the pipeline produced for one period."""

    config: DetectorConfig
    saliency: SaliencyMap
    regions: tuple[Region, ...]
    clusters: tuple[Cluster, ...]
    candidates: tuple[Candidate, ...]
    detections: tuple[Detection, ...]
