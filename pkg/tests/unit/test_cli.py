"""Tests for CLI commands."""

import json
from pathlib import Path
from unittest.mock import Mock, patch

import pytest
from click.testing import CliRunner

from mavdet.cli import main
from mavdet.core.annotations import load_annotations
from mavdet.models.metrics import BenchmarkReport

SMALL_SCENE = [
    "--width",
    "160",
    "--height",
    "120",
    "--radius",
    "30",
    "--edges",
    "1",
    "--noise-rate",
    "5",
]


def _synth(tmp_path: Path, name: str = "scene.csv", *extra: str) -> Path:
    output = tmp_path / name
    result = CliRunner().invoke(
        main, ["synth", "-o", str(output), *SMALL_SCENE, *extra]
    )
    assert result.exit_code == 0, result.output
    return output


class TestDetectCommand:
    """Test detect command."""

    def test_detect_success(self, tmp_path: Path) -> None:
        """Test detection on a synthetic scene with ground truth."""
        scene = _synth(tmp_path, "scene.csv", "--seed", "7")
        output = tmp_path / "out.json"

        result = CliRunner().invoke(
            main,
            [
                "detect",
                "--input",
                str(scene),
                "--tau-s",
                "50",
                "--tau-p",
                "3",
                "--k",
                "4",
                "--iou",
                "0.4",
                "--output",
                str(output),
                "--ground-truth",
                str(tmp_path / "scene.json"),
            ],
        )

        assert result.exit_code == 0, result.output
        assert "TP=" in result.output
        record = load_annotations(output)
        assert record.file == "scene.csv"
        assert (record.width, record.height) == (160, 120)
        assert all(box.is_prediction for box in record.boxes)

    def test_detect_empty_file(self, tmp_path: Path) -> None:
        """Test an empty period gives an empty record and exit 0."""
        events = tmp_path / "empty.csv"
        events.write_text(
            "# t_start_us=0 duration_us=20000 width=64 height=48\nt_us,x,y,p\n"
        )
        output = tmp_path / "out.json"

        result = CliRunner().invoke(
            main, ["detect", "-i", str(events), "-o", str(output)]
        )

        assert result.exit_code == 0, result.output
        assert json.loads(output.read_text())["boxes"] == []

    def test_detect_header_only_file(self, tmp_path: Path) -> None:
        """Test a bare CSV header with geometry flags gives empty boxes."""
        events = tmp_path / "empty.csv"
        events.write_text("t_us,x,y,p\n")
        output = tmp_path / "out.json"

        result = CliRunner().invoke(
            main,
            [
                "detect",
                "--input",
                str(events),
                "--width",
                "640",
                "--height",
                "480",
                "--output",
                str(output),
            ],
        )

        assert result.exit_code == 0, result.output
        record = json.loads(output.read_text())
        assert record["boxes"] == []
        assert record["duration_us"] == 20_000

    def test_detect_undecodable_file(self, tmp_path: Path) -> None:
        """Test non-UTF-8 bytes exit with a located error, not a traceback."""
        events = tmp_path / "bad.csv"
        events.write_bytes(b"t_us,x,y,p\n\xff\xfe,1,1,1\n")

        result = CliRunner().invoke(
            main,
            [
                "detect",
                "-i",
                str(events),
                "--width",
                "64",
                "--height",
                "48",
                "-o",
                str(tmp_path / "out.json"),
            ],
        )

        assert result.exit_code != 0
        assert isinstance(result.exception, SystemExit)
        assert "UTF-8" in result.output

    def test_invalid_threshold(self, tmp_path: Path) -> None:
        """Test an out-of-range tau_s exits 1."""
        scene = _synth(tmp_path)

        result = CliRunner().invoke(
            main,
            ["detect", "-i", str(scene), "--tau-s", "300", "-o", str(tmp_path / "o")],
        )

        assert result.exit_code == 1
        assert "0-255" in result.output

    def test_partial_geometry(self, tmp_path: Path) -> None:
        """Test --width without --height exits 1."""
        scene = _synth(tmp_path)

        result = CliRunner().invoke(
            main,
            ["detect", "-i", str(scene), "--width", "160", "-o", str(tmp_path / "o")],
        )

        assert result.exit_code == 1
        assert "together" in result.output

    def test_malformed_file(self, tmp_path: Path) -> None:
        """Test a malformed event file exits 1."""
        events = tmp_path / "bad.csv"
        events.write_text("t_us,x,y,p\n10,1,1,7\n")

        result = CliRunner().invoke(
            main,
            [
                "detect",
                "-i",
                str(events),
                "--width",
                "32",
                "--height",
                "24",
                "-o",
                str(tmp_path / "out.json"),
            ],
        )

        assert result.exit_code == 1
        assert "Polarity" in result.output

    def test_dumps(self, tmp_path: Path) -> None:
        """Test saliency and feature dumps are written."""
        scene = _synth(tmp_path)
        saliency = tmp_path / "saliency.pgm"
        features = tmp_path / "features.csv"

        result = CliRunner().invoke(
            main,
            [
                "detect",
                "-i",
                str(scene),
                "-o",
                str(tmp_path / "out.json"),
                "--dump-saliency",
                str(saliency),
                "--dump-features",
                str(features),
            ],
        )

        assert result.exit_code == 0, result.output
        assert saliency.read_bytes().startswith(b"P5")
        assert features.read_text().startswith("candidate,index,f_d,f_s,f_p")

    def test_batch(self, tmp_path: Path) -> None:
        """Test a directory of periods writes one record per period."""
        scenes = tmp_path / "scenes"
        scenes.mkdir()
        _synth(scenes, "a.csv", "--seed", "1")
        _synth(scenes, "b.csv", "--seed", "2", "--no-propeller")
        output = tmp_path / "out"

        result = CliRunner().invoke(
            main, ["detect", "-i", str(scenes), "-o", str(output)]
        )

        assert result.exit_code == 0, result.output
        assert sorted(p.name for p in output.iterdir()) == ["a.json", "b.json"]

    def test_batch_rejects_dumps(self, tmp_path: Path) -> None:
        """Test dumps need a single input."""
        scenes = tmp_path / "scenes"
        scenes.mkdir()
        _synth(scenes, "a.csv")
        _synth(scenes, "b.csv")

        result = CliRunner().invoke(
            main,
            [
                "detect",
                "-i",
                str(scenes),
                "-o",
                str(tmp_path / "out"),
                "--dump-saliency",
                str(tmp_path / "s.pgm"),
            ],
        )

        assert result.exit_code == 1
        assert "--dump-saliency" in result.output


class TestSynthCommand:
    """Test synth command."""

    def test_deterministic(self, tmp_path: Path) -> None:
        """Test the same seed writes identical event files."""
        first = _synth(tmp_path, "a.csv", "--seed", "3")
        second = _synth(tmp_path, "b.csv", "--seed", "3")

        assert first.read_bytes() == second.read_bytes()

    def test_annotation(self, tmp_path: Path) -> None:
        """Test the ground-truth record next to the events."""
        _synth(tmp_path, "scene.evd", "--center", "60", "50")

        truth = load_annotations(tmp_path / "scene.json")

        assert truth.file == "scene.evd"
        assert [(b.bbox.x, b.bbox.y, b.bbox.w) for b in truth.boxes] == [(30, 20, 60)]

    def test_negative_control(self, tmp_path: Path) -> None:
        """Test --no-propeller writes no boxes."""
        _synth(tmp_path, "scene.csv", "--no-propeller")

        assert load_annotations(tmp_path / "scene.json").boxes == ()

    def test_invalid_radius(self, tmp_path: Path) -> None:
        """Test an invalid propeller exits 1."""
        result = CliRunner().invoke(
            main, ["synth", "-o", str(tmp_path / "s.csv"), "--radius", "2"]
        )

        assert result.exit_code == 1
        assert "radius" in result.output
        assert not (tmp_path / "s.csv").exists()


class TestEvalCommand:
    """Test eval command."""

    def _dirs(self, tmp_path: Path) -> tuple[Path, Path]:
        pred, gt = tmp_path / "pred", tmp_path / "gt"
        pred.mkdir()
        gt.mkdir()
        for k in range(3):
            box = {"x": 10 * k, "y": 5, "w": 20, "h": 20}
            header = {"file": f"s{k}.csv", "width": 64, "height": 48}
            header["duration_us"] = 20000
            truth = {**header, "boxes": [box]}
            prediction = {**header, "boxes": [{**box, "s_p": 4, "s_s": 900.0}]}
            (gt / f"s{k}.json").write_text(json.dumps(truth))
            (pred / f"s{k}.json").write_text(json.dumps(prediction))
        return pred, gt

    def test_perfect(self, tmp_path: Path) -> None:
        """Test ground truth scored against itself."""
        pred, gt = self._dirs(tmp_path)

        result = CliRunner().invoke(
            main, ["eval", "--predictions", str(pred), "--ground-truth", str(gt)]
        )

        assert result.exit_code == 0, result.output
        assert "TP=3 FP=0 FN=0" in result.output
        assert "P=1.000 R=1.000 F1=1.000 mAP=1.000" in result.output

    def test_json(self, tmp_path: Path) -> None:
        """Test the JSON report with per-period rows."""
        pred, gt = self._dirs(tmp_path)

        result = CliRunner().invoke(
            main,
            [
                "eval",
                "--predictions",
                str(pred),
                "--ground-truth",
                str(gt),
                "--json",
                "--per-period",
            ],
        )

        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["tp"] == 3
        assert [row["file"] for row in report["per_period"]] == ["s0", "s1", "s2"]

    def test_orphans(self, tmp_path: Path) -> None:
        """Test unpaired records exit 1 and are listed."""
        pred, gt = self._dirs(tmp_path)
        (gt / "s2.json").unlink()

        result = CliRunner().invoke(
            main, ["eval", "--predictions", str(pred), "--ground-truth", str(gt)]
        )

        assert result.exit_code == 1
        assert "Unmatched" in result.output

    def test_invalid_iou(self, tmp_path: Path) -> None:
        """Test an out-of-range IoU threshold exits 1."""
        pred, gt = self._dirs(tmp_path)

        result = CliRunner().invoke(
            main,
            ["eval", "--predictions", str(pred), "--ground-truth", str(gt)]
            + ["--iou", "1.5"],
        )

        assert result.exit_code == 1


class TestBenchCommand:
    """Test bench command."""

    @patch("mavdet.cli.run_benchmark")
    def test_bench_report(self, mock_run: Mock) -> None:
        """Test the benchmark report is printed as JSON."""
        mock_run.return_value = BenchmarkReport(
            events=2000, reps=1, median_ms=3.5, p95_ms=3.5, mean_ms=3.5
        )

        result = CliRunner().invoke(main, ["bench", "--events", "2000", "--reps", "1"])

        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["median_ms"] == pytest.approx(3.5)
        mock_run.assert_called_once_with(events=2000, reps=1, seed=0)

    def test_bench_runs(self) -> None:
        """Test a short real benchmark."""
        result = CliRunner().invoke(main, ["bench", "--events", "2000", "--reps", "1"])

        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["events"] == 2000
        assert report["median_ms"] > 0

    def test_invalid_reps(self) -> None:
        """Test reps < 1 exits 1."""
        result = CliRunner().invoke(main, ["bench", "--reps", "0"])
        assert result.exit_code == 1


class TestVersion:
    """Test top-level options."""

    def test_version(self) -> None:
        """Test --version."""
        result = CliRunner().invoke(main, ["--version"])

        assert result.exit_code == 0
        assert "0.1.0" in result.output
