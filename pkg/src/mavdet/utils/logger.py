"""Logging utilities for mavdet."""

import logging
import sys

PACKAGE_LOGGER = "mavdet"


def get_logger(name: str, level: int | None = None) -> logging.Logger:
    """Get logger instance.

    Args:
        name: Logger name
        level: Log level (default: inherit from the package logger)

    Returns:
        Logger instance
    """
    _ensure_package_handler()
    logger = logging.getLogger(name)
    if level is not None:
        logger.setLevel(level)
    return logger


def set_level(level: int) -> None:
    """Set the log level of every mavdet logger."""
    _ensure_package_handler().setLevel(level)


def _ensure_package_handler() -> logging.Logger:
    root = logging.getLogger(PACKAGE_LOGGER)

    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        )
        handler.setFormatter(formatter)
        root.addHandler(handler)
        root.setLevel(logging.INFO)

    return root
