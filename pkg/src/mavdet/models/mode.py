"""Pipeline variants."""

from enum import Enum


class DetectionMode(Enum):
    """Which stages of the detector run."""

    FULL = "full"
    SALIENCY = "saliency"
    SALIENCY_FEATURES = "saliency-features"
    SALIENCY_CLUSTERING = "saliency-clustering"

    def __str__(self) -> str:
        return self.value

    @property
    def uses_periodicity(self) -> bool:
        """Whether s_p is computed and filtered at tau_p."""
        return self in (DetectionMode.FULL, DetectionMode.SALIENCY_FEATURES)

    @property
    def uses_clustering(self) -> bool:
        return self in (DetectionMode.FULL, DetectionMode.SALIENCY_CLUSTERING)


class ExtremaSource(Enum):
    """Series on which peaks and valleys are counted."""

    SERIES = "series"
    AUTOCORRELATION = "autocorrelation"

    def __str__(self) -> str:
        return self.value
