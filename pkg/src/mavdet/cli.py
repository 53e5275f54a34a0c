"""CLI interface for mavdet."""

import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import NoReturn

import click
from rich.console import Console
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from mavdet import __version__
from mavdet.core.annotations import (
    load_annotations,
    write_annotation,
    write_detections,
)
from mavdet.core.bench import run_benchmark
from mavdet.core.detector import MAVDetector
from mavdet.core.discovery import PeriodDiscovery
from mavdet.core.evaluation import DEFAULT_IOU, evaluate_dataset, match_detections
from mavdet.core.event_io import load_events, write_events
from mavdet.core.exporter import TraceExporter
from mavdet.core.synth import generate_scene
from mavdet.exceptions import (
    AnnotationError,
    ConfigurationError,
    EventFormatError,
    EventValidationError,
    MAVDetError,
    OrphanFilesError,
    OutputError,
)
from mavdet.models.annotation import AspectBucket, ScaleBucket
from mavdet.models.config import (
    DEFAULT_D_MERGE,
    DEFAULT_K_TOP,
    DEFAULT_REGION_MARGIN,
    DEFAULT_SMOOTH_WINDOW,
    DEFAULT_TAU_P,
    DEFAULT_TAU_S,
    DetectorConfig,
)
from mavdet.models.events import SensorGeometry
from mavdet.models.mode import DetectionMode, ExtremaSource
from mavdet.models.regions import Detection
from mavdet.models.scene import BackgroundSpec, PropellerSpec, SynthScene
from mavdet.utils.logger import set_level

console = Console()
err_console = Console(stderr=True)

EXIT_VALIDATION = 1
EXIT_IO = 2

VALIDATION_ERRORS = (
    ConfigurationError,
    EventFormatError,
    EventValidationError,
    AnnotationError,
    OrphanFilesError,
    ValueError,
)
IO_ERRORS = (OutputError, OSError)


def _fail(message: str, code: int) -> NoReturn:
    err_console.print(f"[red]❌ Error:[/red] {message}")
    sys.exit(code)


def _exit_code(error: Exception) -> int:
    if isinstance(error, IO_ERRORS):
        return EXIT_IO
    return EXIT_VALIDATION


def _sensor(width: int | None, height: int | None) -> SensorGeometry | None:
    if width is None and height is None:
        return None
    if width is None or height is None:
        raise ConfigurationError("--width and --height must be given together")
    return SensorGeometry(width, height)


@click.group()
@click.version_option(version=__version__)
@click.option("-v", "--verbose", is_flag=True, help="Enable debug logging")
def main(verbose: bool) -> None:
    """mavdet - Training-free MAV detection in event-camera streams."""
    if verbose:
        set_level(logging.DEBUG)


def _detect_file(
    path: Path,
    config: DetectorConfig,
    sensor: SensorGeometry | None,
    duration_us: int | None,
) -> tuple[list[Detection], SensorGeometry, int]:
    period = load_events(path, sensor=sensor, duration_us=duration_us)
    detections = MAVDetector(config).detect(period)
    return detections, period.sensor, period.duration


@main.command()
@click.option(
    "-i",
    "--input",
    "inputs",
    multiple=True,
    required=True,
    type=click.Path(exists=True, path_type=Path),
    help="Event file or directory (repeatable)",
)
@click.option(
    "-o",
    "--output",
    type=click.Path(path_type=Path),
    required=True,
    help="Detections JSON (a directory when several periods are given)",
)
@click.option("--width", type=int, default=None, help="Sensor width")
@click.option("--height", type=int, default=None, help="Sensor height")
@click.option(
    "--duration-ms", type=int, default=None, help="Period length override (ms)"
)
@click.option(
    "--tau-s", type=int, default=DEFAULT_TAU_S, show_default=True, help="Gray threshold"
)
@click.option(
    "--tau-p",
    type=int,
    default=DEFAULT_TAU_P,
    show_default=True,
    help="Periodicity threshold",
)
@click.option(
    "--k", "k_top", type=int, default=DEFAULT_K_TOP, show_default=True, help="Top K"
)
@click.option(
    "--iou",
    type=float,
    default=DEFAULT_IOU,
    show_default=True,
    help="Match threshold for --ground-truth",
)
@click.option(
    "--n-slices", type=int, default=None, help="Saliency slices [default: ms]"
)
@click.option(
    "--m-slices", type=int, default=None, help="Feature slices [default: 2 x ms]"
)
@click.option(
    "--d-merge",
    type=float,
    default=DEFAULT_D_MERGE,
    show_default=True,
    help="Cluster merge distance (px)",
)
@click.option(
    "--smooth-window",
    type=int,
    default=DEFAULT_SMOOTH_WINDOW,
    show_default=True,
    help="Moving-average window",
)
@click.option(
    "--region-margin",
    type=int,
    default=DEFAULT_REGION_MARGIN,
    show_default=True,
    help="Local stream margin (px)",
)
@click.option(
    "--mode",
    type=click.Choice([m.value for m in DetectionMode]),
    default=DetectionMode.FULL.value,
    show_default=True,
    help="Pipeline stages to run",
)
@click.option(
    "--extrema-source",
    type=click.Choice([s.value for s in ExtremaSource]),
    default=ExtremaSource.SERIES.value,
    show_default=True,
    help="Series on which extrema are counted",
)
@click.option(
    "--dump-saliency",
    type=click.Path(path_type=Path),
    default=None,
    help="Write the saliency map as PGM",
)
@click.option(
    "--dump-features",
    type=click.Path(path_type=Path),
    default=None,
    help="Write candidate feature series as CSV",
)
@click.option(
    "--ground-truth",
    type=click.Path(exists=True, path_type=Path),
    default=None,
    help="Annotation to match detections against",
)
@click.option(
    "-j", "--jobs", type=int, default=1, show_default=True, help="Parallel periods"
)
def detect(
    inputs: tuple[Path, ...],
    output: Path,
    width: int | None,
    height: int | None,
    duration_ms: int | None,
    tau_s: int,
    tau_p: int,
    k_top: int,
    iou: float,
    n_slices: int | None,
    m_slices: int | None,
    d_merge: float,
    smooth_window: int,
    region_margin: int,
    mode: str,
    extrema_source: str,
    dump_saliency: Path | None,
    dump_features: Path | None,
    ground_truth: Path | None,
    jobs: int,
) -> None:
    """Detect MAVs in event periods.

    Example:
        mavdet detect --input scene.csv --width 640 --height 480 -o out.json
    """
    try:
        config = DetectorConfig(
            n_slices=n_slices,
            m_slices=m_slices,
            tau_s=tau_s,
            tau_p=tau_p,
            k_top=k_top,
            d_merge=d_merge,
            smooth_window=smooth_window,
            region_margin=region_margin,
            mode=DetectionMode(mode),
            extrema_source=ExtremaSource(extrema_source),
        )
        sensor = _sensor(width, height)
        if not 0.0 < iou <= 1.0:
            raise ConfigurationError(f"iou must be in (0, 1], got {iou}")
        if jobs < 1:
            raise ConfigurationError(f"jobs must be >= 1, got {jobs}")
        if duration_ms is not None and duration_ms <= 0:
            raise ConfigurationError(f"duration-ms must be > 0, got {duration_ms}")
    except VALIDATION_ERRORS as e:
        _fail(str(e), EXIT_VALIDATION)

    duration_us = duration_ms * 1000 if duration_ms is not None else None

    try:
        files = PeriodDiscovery().find_event_files(list(inputs))
        single = len(files) == 1 and not output.is_dir()
        if not files:
            raise EventFormatError("No event files found in the given inputs")
        if not single and (dump_saliency or dump_features or ground_truth):
            raise ConfigurationError(
                "--dump-saliency, --dump-features and --ground-truth need one input"
            )

        if single:
            _detect_single(
                files[0],
                output,
                config,
                sensor,
                duration_us,
                dump_saliency,
                dump_features,
                ground_truth,
                iou,
            )
        else:
            _detect_many(files, output, config, sensor, duration_us, jobs)
    except MAVDetError as e:
        _fail(str(e), _exit_code(e))
    except OSError as e:
        _fail(str(e), EXIT_IO)


def _detect_single(
    path: Path,
    output: Path,
    config: DetectorConfig,
    sensor: SensorGeometry | None,
    duration_us: int | None,
    dump_saliency: Path | None,
    dump_features: Path | None,
    ground_truth: Path | None,
    iou: float,
) -> None:
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=err_console,
    ) as progress:
        task = progress.add_task(f"[cyan]Loading {path.name}...", total=None)
        period = load_events(path, sensor=sensor, duration_us=duration_us)
        progress.update(
            task,
            description=f"[green]✓[/green] Loaded {len(period)} events "
            f"({period.duration_ms:.1f} ms)",
            completed=True,
        )

        task = progress.add_task("[cyan]Detecting...", total=None)
        trace = MAVDetector(config).run(period)
        progress.update(
            task,
            description=f"[green]✓[/green] {len(trace.detections)} detections",
            completed=True,
        )

    write_detections(
        trace.detections,
        output,
        source=path.name,
        sensor=period.sensor,
        duration_us=period.duration,
    )
    exporter = TraceExporter()
    if dump_saliency is not None:
        exporter.export_saliency(trace.saliency, dump_saliency)
        console.print(f"Saliency map: {dump_saliency}")
    if dump_features is not None:
        count = exporter.export_features(trace.candidates, dump_features)
        console.print(f"Feature series ({count} candidates): {dump_features}")

    for rank, det in enumerate(trace.detections):
        b = det.bbox
        console.print(
            f"  #{rank} box=({b.x}, {b.y}, {b.w}, {b.h}) "
            f"s_p={det.s_p} s_s={det.s_s:.0f}"
        )
    console.print(f"[bold green]✅ {len(trace.detections)} detections[/bold green]")
    console.print(f"Output: {output}")

    if ground_truth is not None:
        truth = load_annotations(ground_truth)
        result = match_detections(
            [d.bbox for d in trace.detections], [b.bbox for b in truth.boxes], iou
        )
        console.print(f"TP={result.tp} FP={result.fp} FN={result.fn} (IoU {iou})")


def _detect_many(
    files: list[Path],
    output: Path,
    config: DetectorConfig,
    sensor: SensorGeometry | None,
    duration_us: int | None,
    jobs: int,
) -> None:
    output.mkdir(parents=True, exist_ok=True)
    n = len(files)
    if jobs == 1:
        results = [_detect_file(f, config, sensor, duration_us) for f in files]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(
                    _detect_file,
                    files,
                    [config] * n,
                    [sensor] * n,
                    [duration_us] * n,
                )
            )

    table = Table(title=f"Detections ({n} periods)")
    table.add_column("Period")
    table.add_column("Detections", justify="right")
    table.add_column("Best s_p", justify="right")
    for path, result in zip(files, results, strict=True):
        detections, period_sensor, duration = result
        write_detections(
            detections,
            output / f"{path.stem}.json",
            source=path.name,
            sensor=period_sensor,
            duration_us=duration,
        )
        best = str(detections[0].s_p) if detections else "-"
        table.add_row(path.name, str(len(detections)), best)
    console.print(table)
    console.print(f"Output: {output}")


@main.command()
@click.option(
    "-o",
    "--output",
    type=click.Path(path_type=Path),
    required=True,
    help="Event file (.csv, .evd or .bin)",
)
@click.option(
    "--annotation",
    type=click.Path(path_type=Path),
    default=None,
    help="Ground-truth JSON [default: output with .json suffix]",
)
@click.option("--rpm", type=float, default=10000.0, show_default=True)
@click.option("--blades", type=int, default=2, show_default=True)
@click.option("--radius", type=int, default=50, show_default=True)
@click.option(
    "--center",
    type=(int, int),
    default=None,
    help="Hub position X Y [default: sensor centre]",
)
@click.option(
    "--no-propeller", is_flag=True, help="Background only (negative control)"
)
@click.option("--edges", type=int, default=3, show_default=True)
@click.option(
    "--noise-rate", type=float, default=20.0, show_default=True, help="Events per ms"
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--duration-ms", type=int, default=20, show_default=True)
@click.option("--width", type=int, default=640, show_default=True)
@click.option("--height", type=int, default=480, show_default=True)
def synth(
    output: Path,
    annotation: Path | None,
    rpm: float,
    blades: int,
    radius: int,
    center: tuple[int, int] | None,
    no_propeller: bool,
    edges: int,
    noise_rate: float,
    seed: int,
    duration_ms: int,
    width: int,
    height: int,
) -> None:
    """Generate a synthetic propeller scene with ground truth.

    Example:
        mavdet synth --rpm 10000 --radius 50 --seed 7 -o scene.csv
    """
    try:
        sensor = SensorGeometry(width, height)
        propellers: tuple[PropellerSpec, ...] = ()
        if not no_propeller:
            hub = center if center is not None else (width // 2, height // 2)
            propellers = (
                PropellerSpec(center=hub, radius=radius, blades=blades, rpm=rpm),
            )
        scene = SynthScene(
            sensor=sensor,
            duration=duration_ms * 1000,
            propellers=propellers,
            background=BackgroundSpec(edge_count=edges, noise_rate=noise_rate),
            seed=seed,
            name=output.name,
        )
    except VALIDATION_ERRORS as e:
        _fail(str(e), EXIT_VALIDATION)

    annotation = annotation or output.with_suffix(".json")
    try:
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=err_console,
        ) as progress:
            task = progress.add_task("[cyan]Generating scene...", total=None)
            period, truth = generate_scene(scene)
            progress.update(
                task,
                description=f"[green]✓[/green] {len(period)} events",
                completed=True,
            )
        write_events(period, output)
        write_annotation(truth, annotation)
    except MAVDetError as e:
        _fail(str(e), _exit_code(e))
    except OSError as e:
        _fail(str(e), EXIT_IO)

    console.print(f"Events: {output}")
    console.print(f"Ground truth: {annotation} ({len(truth.boxes)} boxes)")


@main.command(name="eval")
@click.option(
    "--predictions",
    type=click.Path(path_type=Path),
    required=True,
    help="Directory of detection records",
)
@click.option(
    "--ground-truth",
    type=click.Path(path_type=Path),
    required=True,
    help="Directory of ground-truth records",
)
@click.option("--iou", type=float, default=DEFAULT_IOU, show_default=True)
@click.option(
    "--scale",
    type=click.Choice([b.value for b in ScaleBucket]),
    default=None,
    help="Only periods whose targets fall in this size bucket",
)
@click.option(
    "--aspect",
    type=click.Choice([b.value for b in AspectBucket]),
    default=None,
    help="Only periods whose targets fall in this aspect bucket",
)
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON")
@click.option("--per-period", is_flag=True, help="Include per-period rows")
def evaluate(
    predictions: Path,
    ground_truth: Path,
    iou: float,
    scale: str | None,
    aspect: str | None,
    as_json: bool,
    per_period: bool,
) -> None:
    """Score detections against ground truth.

    Example:
        mavdet eval --predictions out/ --ground-truth gt/
    """
    if not 0.0 < iou <= 1.0:
        _fail(f"iou must be in (0, 1], got {iou}", EXIT_VALIDATION)

    try:
        report = evaluate_dataset(
            predictions,
            ground_truth,
            iou_thr=iou,
            scale=ScaleBucket(scale) if scale else None,
            aspect=AspectBucket(aspect) if aspect else None,
        )
    except OrphanFilesError as e:
        for orphan in e.orphans:
            err_console.print(f"  orphan: {orphan}")
        _fail(str(e), EXIT_VALIDATION)
    except MAVDetError as e:
        _fail(str(e), _exit_code(e))
    except OSError as e:
        _fail(str(e), EXIT_IO)

    if as_json:
        click.echo(json.dumps(report.to_dict(include_periods=per_period), indent=2))
        return

    if per_period:
        table = Table(title="Per period")
        for column in ("Period", "TP", "FP", "FN"):
            table.add_column(column)
        for row in report.per_period:
            table.add_row(row.file, str(row.tp), str(row.fp), str(row.fn))
        console.print(table)

    click.echo(f"TP={report.tp} FP={report.fp} FN={report.fn}")
    click.echo(
        f"P={report.precision:.3f} R={report.recall:.3f} "
        f"F1={report.f1:.3f} mAP={report.map:.3f}"
    )


@main.command()
@click.option("--events", type=int, default=200_000, show_default=True)
@click.option("--reps", type=int, default=50, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def bench(events: int, reps: int, seed: int) -> None:
    """Time detection on a 640x480, 20 ms synthetic period.

    Example:
        mavdet bench --events 200000 --reps 50
    """
    try:
        report = run_benchmark(events=events, reps=reps, seed=seed)
    except VALIDATION_ERRORS as e:
        _fail(str(e), EXIT_VALIDATION)
    click.echo(json.dumps(report.to_dict(), indent=2))


if __name__ == "__main__":
    main()
