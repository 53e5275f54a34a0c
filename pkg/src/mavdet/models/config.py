"""Detector configuration."""

from dataclasses import dataclass, replace

from mavdet.exceptions import ConfigurationError
from mavdet.models.mode import DetectionMode, ExtremaSource

DEFAULT_TAU_S = 50
DEFAULT_TAU_P = 3
DEFAULT_K_TOP = 4
DEFAULT_D_MERGE = 50.0
DEFAULT_SMOOTH_WINDOW = 3
DEFAULT_REGION_MARGIN = 2


@dataclass(frozen=True)
class DetectorConfig:
    """Detector parameters.

    ``n_slices`` and ``m_slices`` left as None are derived from the period
    length by ``resolve``: one saliency slice per millisecond and two feature
    slices per millisecond.

    Attributes:
        n_slices: Saliency partition count n
        m_slices: Feature slice count m
        tau_s: Grayscale threshold on the saliency map
        tau_p: Periodicity threshold
        k_top: Coarse-stage K
        d_merge: Cluster merge distance in pixels
        smooth_window: Moving-average window (odd)
        region_margin: Dilation around a candidate when extracting its stream
        mode: Which pipeline stages run
        extrema_source: Series on which extrema are counted
        shape_ratio_min: Lower bound of the fine-stage ellipse/pixel area ratio
        shape_ratio_max: Upper bound of the fine-stage ellipse/pixel area ratio
    """

    n_slices: int | None = None
    m_slices: int | None = None
    tau_s: int = DEFAULT_TAU_S
    tau_p: int = DEFAULT_TAU_P
    k_top: int = DEFAULT_K_TOP
    d_merge: float = DEFAULT_D_MERGE
    smooth_window: int = DEFAULT_SMOOTH_WINDOW
    region_margin: int = DEFAULT_REGION_MARGIN
    mode: DetectionMode = DetectionMode.FULL
    extrema_source: ExtremaSource = ExtremaSource.SERIES
    shape_ratio_min: float = 0.5
    shape_ratio_max: float = 2.0

    def __post_init__(self) -> None:
        """Validate parameters."""
        if self.n_slices is not None and self.n_slices < 2:
            raise ConfigurationError(f"n_slices must be >= 2, got {self.n_slices}")
        if self.m_slices is not None and self.m_slices < 4:
            raise ConfigurationError(f"m_slices must be >= 4, got {self.m_slices}")
        if not 0 <= self.tau_s <= 255:
            raise ConfigurationError(f"tau_s must be in 0-255, got {self.tau_s}")
        if not 0 <= self.tau_p <= 6:
            raise ConfigurationError(f"tau_p must be in 0-6, got {self.tau_p}")
        if self.k_top < 1:
            raise ConfigurationError(f"k_top must be >= 1, got {self.k_top}")
        if self.d_merge < 0:
            raise ConfigurationError(f"d_merge must be >= 0, got {self.d_merge}")
        if self.smooth_window < 1 or self.smooth_window % 2 == 0:
            raise ConfigurationError(
                f"smooth_window must be odd and >= 1, got {self.smooth_window}"
            )
        if self.region_margin < 0:
            raise ConfigurationError(
                f"region_margin must be >= 0, got {self.region_margin}"
            )
        if not 0 < self.shape_ratio_min <= self.shape_ratio_max:
            raise ConfigurationError(
                f"Invalid shape ratio range [{self.shape_ratio_min}, "
                f"{self.shape_ratio_max}]"
            )

    def resolve(self, duration_us: int) -> "DetectorConfig":
        """Concrete copy with slice counts derived from ``duration_us``."""
        duration_ms = duration_us // 1000
        n = self.n_slices if self.n_slices is not None else max(2, duration_ms)
        m = self.m_slices if self.m_slices is not None else max(4, 2 * duration_ms)
        return replace(self, n_slices=n, m_slices=m)
