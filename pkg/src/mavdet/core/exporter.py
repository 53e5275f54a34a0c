"""Export of intermediate results (saliency maps, feature series)."""

import csv
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from PIL import Image

from mavdet.exceptions import OutputError
from mavdet.models.saliency import SaliencyMap
from mavdet.models.trace import Candidate

FEATURES_HEADER = ("candidate", "index", "f_d", "f_s", "f_p")


class TraceExporter:
    """Write detector intermediates to disk."""

    def export_saliency(self, saliency: SaliencyMap, output_path: Path) -> None:
        """Write the gray saliency grid as a binary PGM (P5) image.

        Args:
            saliency: Saliency map
            output_path: Output .pgm path

        Raises:
            OutputError: Export failed
        """
        image = Image.fromarray(np.ascontiguousarray(saliency.gray, dtype=np.uint8))
        try:
            image.save(output_path, format="PPM")
        except (OSError, ValueError) as e:
            raise OutputError(f"Failed to export saliency map: {e}") from e

    def export_features(
        self, candidates: Sequence[Candidate], output_path: Path
    ) -> int:
        """Write the feature series of every scored candidate as CSV.

        One row per slice; f_s and f_p are empty on the last row of each
        candidate since they are defined on consecutive pairs.

        Args:
            candidates: Candidates in rank order
            output_path: Output .csv path

        Returns:
            Number of candidates written

        Raises:
            OutputError: Export failed
        """
        written = 0
        try:
            with open(output_path, "w", newline="") as f:
                writer = csv.writer(f)
                writer.writerow(FEATURES_HEADER)
                for rank, candidate in enumerate(candidates):
                    if candidate.features is None:
                        continue
                    series = candidate.features
                    for i, f_d in enumerate(series.f_d):
                        pair = i < series.f_s.shape[0]
                        writer.writerow(
                            (
                                rank,
                                i,
                                f"{f_d:g}",
                                f"{series.f_s[i]:.6f}" if pair else "",
                                f"{series.f_p[i]:.6f}" if pair else "",
                            )
                        )
                    written += 1
        except OSError as e:
            raise OutputError(f"Failed to export feature series: {e}") from e
        return written
