"""Event and annotation file discovery."""

from dataclasses import dataclass
from pathlib import Path

from mavdet.core.event_io import BINARY_SUFFIXES
from mavdet.exceptions import OrphanFilesError
from mavdet.utils.logger import get_logger

logger = get_logger(__name__)

EVENT_SUFFIXES = frozenset({".csv"}) | BINARY_SUFFIXES
ANNOTATION_SUFFIX = ".json"


@dataclass(frozen=True)
class AnnotationPair:
    """Prediction and ground-truth records of one period."""

    name: str
    prediction: Path
    ground_truth: Path


class PeriodDiscovery:
    """Locate event periods and pair prediction files with ground truth."""

    def find_event_files(self, paths: list[Path]) -> list[Path]:
        """Expand inputs into event files, ordered by file name.

        Directories contribute every CSV or binary event file they contain;
        files are taken as given.

        Args:
            paths: Files or directories

        Returns:
            Event file paths, sorted by name then full path

        Raises:
            FileNotFoundError: An input does not exist
        """
        found: list[Path] = []
        for path in paths:
            path = Path(path)
            if path.is_dir():
                matches = [
                    p
                    for p in path.iterdir()
                    if p.is_file() and p.suffix.lower() in EVENT_SUFFIXES
                ]
                logger.debug(f"Found {len(matches)} event files in {path}")
                found.extend(matches)
            elif path.is_file():
                found.append(path)
            else:
                raise FileNotFoundError(f"No such event file or directory: {path}")
        return sorted(set(found), key=lambda p: (p.name, str(p)))

    def pair_annotations(self, pred_dir: Path, gt_dir: Path) -> list[AnnotationPair]:
        """Pair ``<name>.json`` records of the two directories by name.

        Args:
            pred_dir: Directory of detection records
            gt_dir: Directory of ground-truth records

        Returns:
            Pairs sorted by name

        Raises:
            FileNotFoundError: A directory does not exist
            OrphanFilesError: A record has no counterpart
        """
        predictions = self._index(Path(pred_dir))
        truths = self._index(Path(gt_dir))

        orphans = sorted(
            [str(predictions[n]) for n in predictions.keys() - truths.keys()]
            + [str(truths[n]) for n in truths.keys() - predictions.keys()]
        )
        if orphans:
            logger.error(f"{len(orphans)} annotation files have no counterpart")
            raise OrphanFilesError(orphans)

        return [
            AnnotationPair(
                name=name, prediction=predictions[name], ground_truth=truths[name]
            )
            for name in sorted(predictions)
        ]

    def _index(self, directory: Path) -> dict[str, Path]:
        if not directory.is_dir():
            raise FileNotFoundError(f"Not a directory: {directory}")
        return {
            p.stem: p
            for p in directory.iterdir()
            if p.is_file() and p.suffix.lower() == ANNOTATION_SUFFIX
        }
