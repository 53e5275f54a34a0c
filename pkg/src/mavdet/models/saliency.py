"""Saliency map types."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class PolaritySlicePair:
    """Binary occupancy images I_p^t and I_n^t of one slice.

    Attributes:
        pos: Cells with at least one positive event in the slice
        neg: Cells with at least one negative event in the slice
        slice_index: 1-based slice number t
    """

    pos: np.ndarray
    neg: np.ndarray
    slice_index: int

    def __post_init__(self) -> None:
        """Validate grids."""
        if self.pos.shape != self.neg.shape:
            raise ValueError(
                f"Polarity grids differ in shape: {self.pos.shape} vs {self.neg.shape}"
            )
        if self.slice_index < 1:
            raise ValueError(f"Invalid slice index: {self.slice_index}")


@dataclass(frozen=True, eq=False)
class SaliencyMap:
    """Accumulated polarity intersections I_s.

    Attributes:
        counts: Number of slices in which each cell saw both polarities
        gray: 8-bit rendering, min(255, round(255 * counts / n_slices))
        n_slices: Slice count n
    """

    counts: np.ndarray
    gray: np.ndarray
    n_slices: int

    def __post_init__(self) -> None:
        """Validate grids."""
        if self.counts.shape != self.gray.shape:
            raise ValueError("counts and gray grids differ in shape")
        if self.n_slices < 1:
            raise ValueError(f"Invalid slice count: {self.n_slices}")

    @property
    def shape(self) -> tuple[int, int]:
        return (int(self.counts.shape[0]), int(self.counts.shape[1]))
