"""Integration tests for the synth, detect and evaluate pipeline."""

from pathlib import Path

import pytest

from mavdet.core.annotations import write_annotation, write_detections
from mavdet.core.detector import MAVDetector
from mavdet.core.evaluation import evaluate_dataset
from mavdet.core.event_io import load_events, write_events
from mavdet.core.synth import generate_scene, sample_scene
from mavdet.models.config import DetectorConfig


class TestFilePipeline:
    """Test the full round trip through event and annotation files."""

    @pytest.mark.parametrize("suffix", [".csv", ".evd"])
    def test_detect_and_score(self, tmp_path: Path, suffix: str) -> None:
        """Test scenes written to disk are detected and scored."""
        events_dir = tmp_path / "events"
        pred_dir = tmp_path / "pred"
        gt_dir = tmp_path / "gt"
        for directory in (events_dir, pred_dir, gt_dir):
            directory.mkdir()

        for seed in range(4):
            period, truth = generate_scene(sample_scene(seed))
            name = f"scene_{seed:05d}"
            write_events(period, events_dir / f"{name}{suffix}")
            write_annotation(truth, gt_dir / f"{name}.json")

        detector = MAVDetector(DetectorConfig())
        for path in sorted(events_dir.iterdir()):
            period = load_events(path)
            write_detections(
                detector.detect(period),
                pred_dir / f"{path.stem}.json",
                source=path.name,
                sensor=period.sensor,
                duration_us=period.duration,
            )

        report = evaluate_dataset(pred_dir, gt_dir)

        assert report.tp + report.fn == 4
        assert report.tp >= 3
        assert len(report.per_period) == 4

    def test_file_round_trip_keeps_detections(self, tmp_path: Path) -> None:
        """Test detection on a reloaded period matches the in-memory result."""
        period, _ = generate_scene(sample_scene(11))
        path = tmp_path / "scene.evd"
        write_events(period, path)
        detector = MAVDetector(DetectorConfig())

        direct = detector.detect(period)
        reloaded = detector.detect(load_events(path))

        assert [(d.bbox, d.s_p, d.s_s) for d in direct] == [
            (d.bbox, d.s_p, d.s_s) for d in reloaded
        ]
