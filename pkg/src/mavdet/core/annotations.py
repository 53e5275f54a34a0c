"""Detection and ground-truth annotation JSON."""

import json
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from mavdet.exceptions import AnnotationError, OutputError
from mavdet.models.annotation import AnnotatedBox, PeriodAnnotation
from mavdet.models.bbox import BBox
from mavdet.models.events import SensorGeometry
from mavdet.models.regions import Detection
from mavdet.utils.logger import get_logger

logger = get_logger(__name__)


def detections_to_annotation(
    detections: Sequence[Detection],
    source: str,
    sensor: SensorGeometry,
    duration_us: int,
) -> PeriodAnnotation:
    """Wrap ranked detections in an annotation record."""
    boxes = tuple(
        AnnotatedBox(bbox=d.bbox, s_p=int(d.s_p), s_s=float(d.s_s)) for d in detections
    )
    return PeriodAnnotation(
        file=source,
        width=sensor.width,
        height=sensor.height,
        duration_us=duration_us,
        boxes=boxes,
    )


def write_detections(
    detections: Sequence[Detection],
    path: Path,
    *,
    source: str,
    sensor: SensorGeometry,
    duration_us: int,
) -> None:
    """Write the detections of one period as a JSON record.

    Raises:
        OutputError: File could not be written
    """
    annotation = detections_to_annotation(detections, source, sensor, duration_us)
    write_annotation(annotation, path)


def write_annotation(annotation: PeriodAnnotation, path: Path) -> None:
    """Write one annotation record; score fields only for predictions.

    Raises:
        OutputError: File could not be written
    """
    path = Path(path)
    try:
        path.write_text(json.dumps(annotation_to_dict(annotation)) + "\n")
    except OSError as e:
        raise OutputError(f"Failed to write annotation to {path}: {e}") from e
    logger.debug(f"Wrote {len(annotation.boxes)} boxes to {path}")


def annotation_to_dict(annotation: PeriodAnnotation) -> dict[str, Any]:
    boxes = []
    for box in annotation.boxes:
        record: dict[str, Any] = {
            "x": box.bbox.x,
            "y": box.bbox.y,
            "w": box.bbox.w,
            "h": box.bbox.h,
        }
        if box.is_prediction:
            record["s_p"] = box.s_p
            record["s_s"] = box.s_s
        boxes.append(record)
    return {
        "file": annotation.file,
        "width": annotation.width,
        "height": annotation.height,
        "duration_us": annotation.duration_us,
        "boxes": boxes,
    }


def load_annotations(path: Path) -> PeriodAnnotation:
    """Load a detection or ground-truth record.

    Raises:
        AnnotationError: File is not a valid annotation record
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as e:
        raise AnnotationError(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise AnnotationError(f"{path}: invalid JSON: {e}") from e

    try:
        return annotation_from_dict(data)
    except (KeyError, TypeError, ValueError) as e:
        raise AnnotationError(f"{path}: malformed annotation: {e}") from e


def annotation_from_dict(data: dict[str, Any]) -> PeriodAnnotation:
    boxes = tuple(_box_from_dict(record) for record in data["boxes"])
    return PeriodAnnotation(
        file=str(data["file"]),
        width=int(data["width"]),
        height=int(data["height"]),
        duration_us=int(data["duration_us"]),
        boxes=boxes,
    )


def _box_from_dict(record: dict[str, Any]) -> AnnotatedBox:
    bbox = BBox(
        x=int(record["x"]), y=int(record["y"]), w=int(record["w"]), h=int(record["h"])
    )
    s_p = record.get("s_p")
    s_s = record.get("s_s")
    return AnnotatedBox(
        bbox=bbox,
        s_p=None if s_p is None else int(s_p),
        s_s=None if s_s is None else float(s_s),
    )
