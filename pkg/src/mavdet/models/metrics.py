"""Evaluation results."""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Match:
    """Outcome of one ranked detection: matched GT index or None for FP."""

    det_index: int
    gt_index: int | None
    iou: float

    @property
    def is_tp(self) -> bool:
        return self.gt_index is not None


@dataclass(frozen=True)
class MatchResult:
    """Greedy matching of one period."""

    tp: int
    fp: int
    fn: int
    matches: tuple[Match, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class PeriodResult:
    """Per-period breakdown row."""

    file: str
    tp: int
    fp: int
    fn: int


@dataclass(frozen=True)
class MetricsReport:
    """Detection metrics over a dataset.

    precision = tp / (tp + fp), recall = tp / (tp + fn), f1 their harmonic
    mean; each is 0 when its denominator is 0. ``map`` is the single-class AP.
    """

    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    map: float
    per_period: tuple[PeriodResult, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        """Validate ranges."""
        if min(self.tp, self.fp, self.fn) < 0:
            raise ValueError("Counts must be non-negative")
        for name in ("precision", "recall", "f1", "map"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0 + 1e-12:
                raise ValueError(f"Invalid {name}: {value}")

    def to_dict(self, include_periods: bool = False) -> dict[str, object]:
        """JSON-ready view."""
        data: dict[str, object] = {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "map": self.map,
        }
        if include_periods:
            data["per_period"] = [
                {"file": r.file, "tp": r.tp, "fp": r.fp, "fn": r.fn}
                for r in self.per_period
            ]
        return data


@dataclass(frozen=True)
class BenchmarkReport:
    """Wall time of detect_period over repeated runs, in milliseconds."""

    events: int
    reps: int
    median_ms: float
    p95_ms: float
    mean_ms: float

    def __post_init__(self) -> None:
        """Validate counts."""
        if self.reps < 1:
            raise ValueError(f"Invalid reps: {self.reps}")
        if self.events < 0:
            raise ValueError(f"Invalid events: {self.events}")

    def to_dict(self) -> dict[str, object]:
        return {
            "events": self.events,
            "reps": self.reps,
            "median_ms": self.median_ms,
            "p95_ms": self.p95_ms,
            "mean_ms": self.mean_ms,
        }
