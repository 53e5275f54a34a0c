"""Custom exceptions for mavdet."""

from pathlib import Path


class MAVDetError(Exception):
    """Base exception for mavdet."""

    pass


class ConfigurationError(MAVDetError, ValueError):
    """Invalid detector or generator configuration."""

    pass


class EventFormatError(MAVDetError):
    """Event file does not follow the CSV or binary format."""

    def __init__(self, message: str, path: Path | None = None, line: int | None = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{message}")


class EventValidationError(MAVDetError):
    """Events violate sensor bounds or the period window."""

    pass


class DegenerateInputError(MAVDetError):
    """Input carries no usable geometry (identical points, empty window)."""

    pass


class AnnotationError(MAVDetError):
    """Malformed detection or ground-truth annotation."""

    pass


class OrphanFilesError(MAVDetError):
    """Prediction and ground-truth file sets do not match."""

    def __init__(self, orphans: list[str]):
        self.orphans = orphans
        super().__init__(f"Unmatched annotation files: {', '.join(orphans)}")


class OutputError(MAVDetError):
    """Writing an output artifact failed."""

    pass
