"""Data models for mavdet."""

from mavdet.models.annotation import (
    AnnotatedBox,
    AspectBucket,
    PeriodAnnotation,
    ScaleBucket,
)
from mavdet.models.bbox import BBox
from mavdet.models.config import DetectorConfig
from mavdet.models.events import (
    EVENT_DTYPE,
    Event,
    EventPeriod,
    Polarity,
    SensorGeometry,
)
from mavdet.models.features import FeatureSeries, PointSet, PrincipalAxis
from mavdet.models.metrics import (
    BenchmarkReport,
    Match,
    MatchResult,
    MetricsReport,
    PeriodResult,
)
from mavdet.models.mode import DetectionMode, ExtremaSource
from mavdet.models.regions import Cluster, Detection, Region, RegionScores
from mavdet.models.saliency import PolaritySlicePair, SaliencyMap
from mavdet.models.scene import BackgroundSpec, PropellerSpec, SynthScene
from mavdet.models.trace import Candidate, DetectionTrace

__all__ = [
    "EVENT_DTYPE",
    "AnnotatedBox",
    "AspectBucket",
    "BBox",
    "BackgroundSpec",
    "BenchmarkReport",
    "Candidate",
    "Cluster",
    "Detection",
    "DetectionMode",
    "DetectionTrace",
    "DetectorConfig",
    "Event",
    "EventPeriod",
    "ExtremaSource",
    "FeatureSeries",
    "Match",
    "MatchResult",
    "MetricsReport",
    "PeriodAnnotation",
    "PeriodResult",
    "PointSet",
    "Polarity",
    "PolaritySlicePair",
    "PrincipalAxis",
    "PropellerSpec",
    "Region",
    "RegionScores",
    "SaliencyMap",
    "ScaleBucket",
    "SensorGeometry",
    "SynthScene",
]
