"""Spatio-temporal feature types."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class PointSet:
    """2-D points P = [p_1, ..., p_w]^T extracted from one slice image."""

    points: np.ndarray

    def __post_init__(self) -> None:
        """Validate shape."""
        points = np.asarray(self.points, dtype=np.float64)
        if points.ndim != 2 or points.shape[1] != 2:
            raise ValueError(f"points must be (w, 2), got {points.shape}")
        if points.shape[0] < 1:
            raise ValueError("PointSet needs at least one point")
        object.__setattr__(self, "points", points)

    @property
    def w(self) -> int:
        return int(self.points.shape[0])

    @property
    def centroid(self) -> np.ndarray:
        """p_c = (1/w) * sum(p_i)."""
        return self.points.mean(axis=0)

    @property
    def covariance(self) -> np.ndarray:
        """C = (P - p_c)^T (P - p_c) / w."""
        centered = self.points - self.centroid
        return centered.T @ centered / self.w


@dataclass(frozen=True)
class PrincipalAxis:
    """Principal direction xi with its eigenvalue.

    ``isotropic`` marks covariances whose eigenvalues coincide; xi is then
    the fixed fallback (1, 0).
    """

    direction: tuple[float, float]
    eigenvalue: float
    isotropic: bool = False

    def as_array(self) -> np.ndarray:
        return np.asarray(self.direction, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class FeatureSeries:
    """Density, structural-similarity and direction-similarity series.

    Attributes:
        f_d: m positive-event counts
        f_s: m - 1 structural similarities in [-1, 1]
        f_p: m - 1 direction similarities in [0, 1]
    """

    f_d: np.ndarray
    f_s: np.ndarray
    f_p: np.ndarray

    def __post_init__(self) -> None:
        """Validate lengths and ranges."""
        f_d = np.asarray(self.f_d, dtype=np.float64)
        f_s = np.asarray(self.f_s, dtype=np.float64)
        f_p = np.asarray(self.f_p, dtype=np.float64)
        if f_s.shape[0] != f_d.shape[0] - 1 or f_p.shape[0] != f_d.shape[0] - 1:
            raise ValueError(
                f"Expected f_s and f_p of length {f_d.shape[0] - 1}, "
                f"got {f_s.shape[0]} and {f_p.shape[0]}"
            )
        eps = 1e-9
        if np.any(np.abs(f_s) > 1 + eps):
            raise ValueError("f_s entries must lie in [-1, 1]")
        if np.any((f_p < -eps) | (f_p > 1 + eps)):
            raise ValueError("f_p entries must lie in [0, 1]")
        object.__setattr__(self, "f_d", f_d)
        object.__setattr__(self, "f_s", f_s)
        object.__setattr__(self, "f_p", f_p)

    @property
    def m(self) -> int:
        return int(self.f_d.shape[0])
