"""Per-period annotation records (detections and ground truth)."""

from dataclasses import dataclass, field
from enum import Enum

from mavdet.models.bbox import BBox


class ScaleBucket(Enum):
    """Target size bucket by ground-truth box area."""

    TINY = "tiny"
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def of(cls, box: BBox) -> "ScaleBucket":
        if box.area < 32 * 32:
            return cls.TINY
        if box.area < 64 * 64:
            return cls.SMALL
        if box.area < 128 * 128:
            return cls.MEDIUM
        return cls.LARGE


class AspectBucket(Enum):
    """Viewing-angle bucket by min(w, h) / max(w, h)."""

    LOW = "low"
    MID = "mid"
    HIGH = "high"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def of(cls, box: BBox) -> "AspectBucket":
        ratio = min(box.w, box.h) / max(box.w, box.h)
        if ratio <= 0.3:
            return cls.LOW
        if ratio <= 0.6:
            return cls.MID
        return cls.HIGH


@dataclass(frozen=True)
class AnnotatedBox:
    """A box from an annotation file; scores are None for ground truth."""

    bbox: BBox
    s_p: int | None = None
    s_s: float | None = None

    @property
    def is_prediction(self) -> bool:
        return self.s_p is not None

    @property
    def confidence(self) -> tuple[int, float]:
        return (self.s_p or 0, self.s_s or 0.0)


@dataclass(frozen=True)
class PeriodAnnotation:
    """One JSON record: the boxes of one event period.

    Attributes:
        file: Source event file name
        width: Sensor width
        height: Sensor height
        duration_us: Period length
        boxes: Boxes, ranked by confidence for predictions
    """

    file: str
    width: int
    height: int
    duration_us: int
    boxes: tuple[AnnotatedBox, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        """Validate header fields."""
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"Invalid geometry: {self.width}x{self.height}")
        if self.duration_us <= 0:
            raise ValueError(f"Invalid duration: {self.duration_us}")
