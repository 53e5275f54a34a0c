"""Event file reading and writing (CSV and EVD1 binary)."""

from pathlib import Path

import numpy as np

from mavdet.exceptions import EventFormatError, EventValidationError, OutputError
from mavdet.models.events import EventPeriod, SensorGeometry, make_events
from mavdet.utils.logger import get_logger

logger = get_logger(__name__)

CSV_HEADER = "t_us,x,y,p"
BINARY_MAGIC = b"EVD1"
BINARY_SUFFIXES = frozenset({".evd", ".bin"})
# Period length assumed for an event-less file that declares none.
DEFAULT_DURATION_US = 20_000
COORD_MAX = int(np.iinfo(np.int32).max)
TIMESTAMP_MAX = int(np.iinfo(np.int64).max)

HEADER_DTYPE = np.dtype(
    [
        ("magic", "S4"),
        ("width", "<u2"),
        ("height", "<u2"),
        ("t_start", "<u8"),
        ("duration", "<u8"),
    ]
)
RECORD_DTYPE = np.dtype(
    [("t", "<u8"), ("x", "<u2"), ("y", "<u2"), ("p", "u1"), ("pad", "V3")]
)


def is_binary(path: Path) -> bool:
    """Whether ``path`` names a binary event file."""
    return path.suffix.lower() in BINARY_SUFFIXES


def load_events(
    path: Path,
    sensor: SensorGeometry | None = None,
    duration_us: int | None = None,
    t_start_us: int | None = None,
) -> EventPeriod:
    """Load one event period.

    Explicit arguments override what the file declares. Unsorted timestamps
    are repaired by a stable sort (``EventPeriod.repaired``).

    Args:
        path: CSV or binary event file
        sensor: Sensor geometry (required for CSV without metadata)
        duration_us: Period length override
        t_start_us: Period start override

    Returns:
        Validated EventPeriod

    Raises:
        EventFormatError: File does not follow the format
        EventValidationError: Events outside sensor or window
    """
    path = Path(path)
    logger.debug(f"Loading events from {path}")
    if is_binary(path):
        events, meta = _read_binary(path)
    else:
        events, meta = _read_csv(path)

    sensor = _resolve_sensor(path, sensor, meta)
    t_start = _pick(t_start_us, meta.get("t_start_us"))
    if t_start is None:
        t_start = int(events["t"].min()) if events.size else 0
    duration = _pick(duration_us, meta.get("duration_us"))
    if duration is None:
        if events.size == 0:
            logger.warning(
                f"{path}: no events and no declared duration, "
                f"assuming {DEFAULT_DURATION_US} us"
            )
            duration = DEFAULT_DURATION_US
        else:
            duration = int(events["t"].max()) - t_start + 1

    try:
        period = EventPeriod(
            events=events, t_start=t_start, duration=duration, sensor=sensor
        )
    except EventValidationError as e:
        raise EventValidationError(f"{path}: {e}") from e
    except ValueError as e:
        raise EventFormatError(str(e), path) from e

    if period.repaired:
        logger.warning(f"{path}: timestamps out of order, repaired by stable sort")
    logger.debug(f"Loaded {len(period)} events over {period.duration} us")
    return period


def write_events(period: EventPeriod, path: Path) -> None:
    """Write a period as CSV or binary, chosen by file suffix.

    Raises:
        OutputError: File could not be written
    """
    path = Path(path)
    try:
        if is_binary(path):
            _write_binary(period, path)
        else:
            _write_csv(period, path)
    except OSError as e:
        raise OutputError(f"Failed to write events to {path}: {e}") from e
    logger.debug(f"Wrote {len(period)} events to {path}")


def _pick(explicit: int | None, declared: int | None) -> int | None:
    return explicit if explicit is not None else declared


def _resolve_sensor(
    path: Path, sensor: SensorGeometry | None, meta: dict[str, int]
) -> SensorGeometry:
    declared = None
    if "width" in meta and "height" in meta:
        declared = SensorGeometry(meta["width"], meta["height"])

    if sensor is None:
        if declared is None:
            raise EventFormatError("Sensor geometry neither given nor declared", path)
        return declared
    if declared is not None and is_binary(path) and declared != sensor:
        raise EventValidationError(
            f"{path}: header geometry {declared.width}x{declared.height} "
            f"does not match {sensor.width}x{sensor.height}"
        )
    return sensor


def _read_csv(path: Path) -> tuple[np.ndarray, dict[str, int]]:
    try:
        lines = path.read_bytes().splitlines()
    except OSError as e:
        raise EventFormatError(f"Cannot read file: {e}", path) from e

    meta: dict[str, int] = {}
    data_lines: list[str] = []
    line_numbers: list[int] = []
    for lineno, raw in enumerate(lines, start=1):
        try:
            line = raw.decode("utf-8").strip()
        except UnicodeDecodeError:
            raise EventFormatError(
                "Line is not valid UTF-8 text", path, lineno
            ) from None
        if not line:
            continue
        if line.startswith("#"):
            meta.update(_parse_metadata(line, path, lineno))
            continue
        if line.replace(" ", "") == CSV_HEADER and not data_lines:
            continue
        data_lines.append(line)
        line_numbers.append(lineno)

    if not data_lines:
        return make_events([], [], [], []), meta

    rows = _parse_rows(data_lines, line_numbers, path)
    bad_polarity = np.flatnonzero((rows[:, 3] != 0) & (rows[:, 3] != 1))
    if bad_polarity.size:
        i = int(bad_polarity[0])
        raise EventFormatError(
            f"Polarity must be 0 or 1, got {rows[i, 3]}", path, line_numbers[i]
        )
    negative = np.flatnonzero(rows[:, 0] < 0)
    if negative.size:
        i = int(negative[0])
        raise EventFormatError("Negative timestamp", path, line_numbers[i])
    for column, name in ((1, "x"), (2, "y")):
        values = rows[:, column]
        outside = np.flatnonzero((values < 0) | (values > COORD_MAX))
        if outside.size:
            i = int(outside[0])
            raise EventValidationError(
                f"{path}:{line_numbers[i]}: {name}={rows[i, column]} "
                "outside any sensor"
            )

    return make_events(rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3]), meta


def _parse_rows(lines: list[str], line_numbers: list[int], path: Path) -> np.ndarray:
    try:
        rows = np.loadtxt(lines, delimiter=",", dtype=np.int64, ndmin=2)
        if rows.shape[1] == 4:
            return rows
    except (ValueError, OverflowError):
        pass

    # Slow path only to locate the offending line.
    for line, lineno in zip(lines, line_numbers, strict=True):
        parts = line.split(",")
        if len(parts) != 4:
            raise EventFormatError(
                f"Expected 4 fields (t_us,x,y,p), got {len(parts)}", path, lineno
            )
        for part in parts:
            try:
                value = int(part)
            except ValueError:
                raise EventFormatError(
                    f"Not a decimal integer: {part.strip()!r}", path, lineno
                ) from None
            if abs(value) > TIMESTAMP_MAX:
                raise EventFormatError(
                    f"Integer out of 64-bit range: {part.strip()}", path, lineno
                )
    raise EventFormatError("Unparseable event rows", path)


def _parse_metadata(line: str, path: Path, lineno: int) -> dict[str, int]:
    meta: dict[str, int] = {}
    for token in line.lstrip("#").split():
        if "=" not in token:
            continue
        key, _, value = token.partition("=")
        try:
            meta[key.strip()] = int(value)
        except ValueError:
            raise EventFormatError(
                f"Metadata value for {key!r} is not an integer", path, lineno
            ) from None
    return meta


def _read_binary(path: Path) -> tuple[np.ndarray, dict[str, int]]:
    try:
        data = path.read_bytes()
    except OSError as e:
        raise EventFormatError(f"Cannot read file: {e}", path) from e

    if len(data) < HEADER_DTYPE.itemsize:
        raise EventFormatError("File shorter than the 24-byte header", path)
    header = np.frombuffer(data[: HEADER_DTYPE.itemsize], dtype=HEADER_DTYPE)[0]
    if bytes(header["magic"]) != BINARY_MAGIC:
        raise EventFormatError(f"Bad magic {bytes(header['magic'])!r}", path)

    body = data[HEADER_DTYPE.itemsize :]
    if len(body) % RECORD_DTYPE.itemsize:
        raise EventFormatError(
            f"Truncated record: {len(body)} bytes is not a multiple of 16", path
        )
    records = np.frombuffer(body, dtype=RECORD_DTYPE)
    bad_polarity = np.flatnonzero(records["p"] > 1)
    if bad_polarity.size:
        i = int(bad_polarity[0])
        raise EventFormatError(
            f"Polarity must be 0 or 1, got {records['p'][i]}", path, i + 1
        )
    too_late = np.flatnonzero(records["t"] > np.uint64(TIMESTAMP_MAX))
    if too_late.size:
        i = int(too_late[0])
        raise EventFormatError(
            f"Timestamp {records['t'][i]} out of 64-bit signed range", path, i + 1
        )

    meta = {
        "width": int(header["width"]),
        "height": int(header["height"]),
        "t_start_us": int(header["t_start"]),
        "duration_us": int(header["duration"]),
    }
    events = make_events(
        records["t"].astype(np.int64), records["x"], records["y"], records["p"]
    )
    return events, meta


def _write_csv(period: EventPeriod, path: Path) -> None:
    with open(path, "w") as f:
        f.write(
            f"# t_start_us={period.t_start} duration_us={period.duration} "
            f"width={period.sensor.width} height={period.sensor.height}\n"
        )
        f.write(CSV_HEADER + "\n")
        if len(period):
            columns = np.column_stack([period.t, period.x, period.y, period.p])
            np.savetxt(f, columns, fmt="%d", delimiter=",")


def _write_binary(period: EventPeriod, path: Path) -> None:
    header = np.zeros(1, dtype=HEADER_DTYPE)
    header["magic"] = BINARY_MAGIC
    header["width"] = period.sensor.width
    header["height"] = period.sensor.height
    header["t_start"] = period.t_start
    header["duration"] = period.duration

    records = np.zeros(len(period), dtype=RECORD_DTYPE)
    records["t"] = period.t
    records["x"] = period.x
    records["y"] = period.y
    records["p"] = period.p

    with open(path, "wb") as f:
        f.write(header.tobytes())
        f.write(records.tobytes())
