"""Detection scoring: IoU matching, precision/recall/F1 and single-class AP."""

from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from mavdet.core.annotations import load_annotations
from mavdet.core.discovery import PeriodDiscovery
from mavdet.models.annotation import AspectBucket, PeriodAnnotation, ScaleBucket
from mavdet.models.bbox import BBox
from mavdet.models.metrics import Match, MatchResult, MetricsReport, PeriodResult
from mavdet.utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_IOU = 0.4


def iou(a: BBox, b: BBox) -> float:
    """Intersection over union of two boxes."""
    iw = min(a.x1, b.x1) - max(a.x, b.x)
    ih = min(a.y1, b.y1) - max(a.y, b.y)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    return inter / (a.area + b.area - inter)


def match_detections(
    dets: Sequence[BBox], gts: Sequence[BBox], iou_thr: float = DEFAULT_IOU
) -> MatchResult:
    """Greedy matching of ranked detections against ground truth.

    Each detection, in rank order, claims the unclaimed ground-truth box of
    highest IoU >= ``iou_thr``; equal IoU goes to the lower ground-truth index.

    Args:
        dets: Detections, highest confidence first
        gts: Ground-truth boxes
        iou_thr: Minimum IoU of a match

    Returns:
        Counts and one Match per detection
    """
    claimed = [False] * len(gts)
    matches = []
    for d, det in enumerate(dets):
        best, best_iou = None, 0.0
        for g, gt in enumerate(gts):
            if claimed[g]:
                continue
            overlap = iou(det, gt)
            if overlap >= iou_thr and (best is None or overlap > best_iou):
                best, best_iou = g, overlap
        if best is not None:
            claimed[best] = True
        matches.append(Match(det_index=d, gt_index=best, iou=best_iou))

    tp = sum(1 for m in matches if m.is_tp)
    return MatchResult(
        tp=tp, fp=len(dets) - tp, fn=len(gts) - tp, matches=tuple(matches)
    )


def precision_recall_f1(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    """Precision, recall and F1, each 0 when undefined."""
    if min(tp, fp, fn) < 0:
        raise ValueError(f"Counts must be non-negative, got {tp}, {fp}, {fn}")
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0:
        return precision, recall, 0.0
    return precision, recall, 2 * precision * recall / (precision + recall)


def average_precision(outcomes: Sequence[bool], total_gt: int) -> float:
    """All-points interpolated AP of ranked TP/FP outcomes.

    Args:
        outcomes: True for TP, False for FP, highest confidence first
        total_gt: Number of ground-truth boxes

    Returns:
        AP in [0, 1]; 0 when there is no ground truth or no detection
    """
    if total_gt <= 0 or len(outcomes) == 0:
        return 0.0
    hits = np.asarray(outcomes, dtype=bool)
    tp = np.cumsum(hits)
    fp = np.cumsum(~hits)
    rec = tp / float(total_gt)
    prec = tp / np.maximum(tp + fp, np.finfo(np.float64).eps)

    mrec = np.concatenate(([0.0], rec, [1.0]))
    mpre = np.concatenate(([0.0], prec, [0.0]))
    # precision envelope
    mpre = np.maximum.accumulate(mpre[::-1])[::-1]
    i = np.where(mrec[1:] != mrec[:-1])[0]
    return float(np.sum((mrec[i + 1] - mrec[i]) * mpre[i + 1]))


@dataclass(frozen=True)
class _Scored:
    confidence: tuple[int, float]
    period: int
    rank: int
    is_tp: bool


def in_subset(
    truth: PeriodAnnotation,
    scale: ScaleBucket | None = None,
    aspect: AspectBucket | None = None,
) -> bool:
    """True when every ground-truth box falls in the requested buckets."""
    if scale is None and aspect is None:
        return True
    if not truth.boxes:
        return False
    return all(
        (scale is None or ScaleBucket.of(b.bbox) is scale)
        and (aspect is None or AspectBucket.of(b.bbox) is aspect)
        for b in truth.boxes
    )


def evaluate_annotations(
    pairs: Sequence[tuple[str, PeriodAnnotation, PeriodAnnotation]],
    iou_thr: float = DEFAULT_IOU,
    scale: ScaleBucket | None = None,
    aspect: AspectBucket | None = None,
) -> MetricsReport:
    """Score (name, prediction, ground truth) triples.

    Matching runs per period; detections of all periods are then ranked
    together by confidence (s_p, then s_s) for AP.
    """
    tp = fp = fn = total_gt = 0
    rows: list[PeriodResult] = []
    scored: list[_Scored] = []

    for index, (name, prediction, truth) in enumerate(pairs):
        if not in_subset(truth, scale, aspect):
            continue
        ranked = sorted(
            prediction.boxes, key=lambda b: (-b.confidence[0], -b.confidence[1])
        )
        result = match_detections(
            [b.bbox for b in ranked], [b.bbox for b in truth.boxes], iou_thr
        )
        tp, fp, fn = tp + result.tp, fp + result.fp, fn + result.fn
        total_gt += len(truth.boxes)
        rows.append(PeriodResult(file=name, tp=result.tp, fp=result.fp, fn=result.fn))
        scored.extend(
            _Scored(ranked[m.det_index].confidence, index, m.det_index, m.is_tp)
            for m in result.matches
        )

    scored.sort(key=lambda s: (-s.confidence[0], -s.confidence[1], s.period, s.rank))
    precision, recall, f1 = precision_recall_f1(tp, fp, fn)
    ap = average_precision([s.is_tp for s in scored], total_gt)
    logger.debug(f"Scored {len(rows)} periods: TP={tp} FP={fp} FN={fn}")
    return MetricsReport(
        tp=tp,
        fp=fp,
        fn=fn,
        precision=precision,
        recall=recall,
        f1=f1,
        map=ap,
        per_period=tuple(rows),
    )


def evaluate_dataset(
    pred_dir: Path,
    gt_dir: Path,
    iou_thr: float = DEFAULT_IOU,
    scale: ScaleBucket | None = None,
    aspect: AspectBucket | None = None,
) -> MetricsReport:
    """Score a directory of detection records against ground truth.

    Records are paired by file name.

    Raises:
        OrphanFilesError: A record has no counterpart
        AnnotationError: A record is malformed
    """
    logger.info(f"Evaluating {pred_dir} against {gt_dir} at IoU {iou_thr}")
    pairs = PeriodDiscovery().pair_annotations(pred_dir, gt_dir)
    loaded = [
        (
            pair.name,
            load_annotations(pair.prediction),
            load_annotations(pair.ground_truth),
        )
        for pair in pairs
    ]
    return evaluate_annotations(loaded, iou_thr, scale, aspect)
