"""Axis-aligned pixel boxes."""

from dataclasses import dataclass

from mavdet.models.events import SensorGeometry


@dataclass(frozen=True)
class BBox:
    """Box P(x, y, w, h) covering columns [x, x+w) and rows [y, y+h).

    Attributes:
        x: Left pixel column
        y: Top pixel row
        w: Width in pixels
        h: Height in pixels
    """

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self) -> None:
        """Validate box size."""
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"Invalid box size: {self.w}x{self.h}")

    @property
    def x1(self) -> int:
        """Exclusive right column."""
        return self.x + self.w

    @property
    def y1(self) -> int:
        """Exclusive bottom row."""
        return self.y + self.h

    @property
    def area(self) -> int:
        return self.w * self.h

    @property
    def top_left(self) -> tuple[int, int]:
        """Row-major sort key (row, column)."""
        return (self.y, self.x)

    @classmethod
    def from_corners(cls, x0: int, y0: int, x1: int, y1: int) -> "BBox":
        """Build from inclusive top-left and exclusive bottom-right corners."""
        return cls(x=int(x0), y=int(y0), w=int(x1 - x0), h=int(y1 - y0))

    def union(self, other: "BBox") -> "BBox":
        """Minimal box covering both boxes."""
        return BBox.from_corners(
            min(self.x, other.x),
            min(self.y, other.y),
            max(self.x1, other.x1),
            max(self.y1, other.y1),
        )

    def dilate(self, margin: int) -> "BBox":
        """Grow by ``margin`` pixels on every side."""
        return BBox(
            x=self.x - margin,
            y=self.y - margin,
            w=self.w + 2 * margin,
            h=self.h + 2 * margin,
        )

    def clamp(self, sensor: SensorGeometry) -> "BBox | None":
        """Intersect with the sensor; None when nothing is left."""
        x0, y0 = max(self.x, 0), max(self.y, 0)
        x1, y1 = min(self.x1, sensor.width), min(self.y1, sensor.height)
        if x1 <= x0 or y1 <= y0:
            return None
        return BBox.from_corners(x0, y0, x1, y1)

    def shift(self, dx: int, dy: int) -> "BBox":
        """Same box translated by (dx, dy)."""
        return BBox(x=self.x + dx, y=self.y + dy, w=self.w, h=self.h)

    def contains(self, px: float, py: float) -> bool:
        """Whether a (sub-)pixel coordinate lies inside the box."""
        return self.x <= px < self.x1 and self.y <= py < self.y1

    def slices(self) -> tuple[slice, slice]:
        """Numpy (row, column) slices selecting the box from a grid."""
        return (slice(self.y, self.y1), slice(self.x, self.x1))


def union_all(boxes: "list[BBox] | tuple[BBox, ...]") -> BBox:
    """Minimal box covering every box in a non-empty sequence."""
    if not boxes:
        raise ValueError("Cannot take the union of no boxes")
    return BBox.from_corners(
        min(b.x for b in boxes),
        min(b.y for b in boxes),
        max(b.x1 for b in boxes),
        max(b.y1 for b in boxes),
    )
