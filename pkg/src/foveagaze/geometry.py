"""Viewing geometry: pixel offsets on the panel to visual angles at the eye.

The model places the eye on the normal through the panel centre at a fixed
viewing distance.  A panel point maps to the 3-D ray from the eye through
that point; the angle between two rays is the angular separation of the two
points as seen by the viewer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NegativeDistance
from .targets import TargetLayout

DEFAULT_DISTANCE_CM = 63.0


@dataclass(frozen=True)
class ViewingGeometry:
    """Eye position relative to the panel, plus the panel's physical scale."""

    cm_per_px: float
    panel_center_px: tuple[float, float]
    distance_cm: float = DEFAULT_DISTANCE_CM

    def __post_init__(self) -> None:
        if self.distance_cm <= 0.0:
            raise NegativeDistance(
                f"viewing distance must be > 0 cm, got {self.distance_cm}"
            )
        if self.cm_per_px <= 0.0:
            raise NegativeDistance(f"cm_per_px must be > 0, got {self.cm_per_px}")

    def pixels_to_cm(self, value_px: float) -> float:
        """Scalar pixel distance to centimetres.  Distances cannot be negative."""
        if value_px < 0.0:
            raise NegativeDistance(f"pixel distance must be >= 0, got {value_px}")
        return value_px * self.cm_per_px

    def point_cm(self, p_px: tuple[float, float]) -> tuple[float, float]:
        """Panel point to centimetre offsets from the panel centre."""
        return (
            (p_px[0] - self.panel_center_px[0]) * self.cm_per_px,
            (p_px[1] - self.panel_center_px[1]) * self.cm_per_px,
        )

    def _ray(self, p_px: tuple[float, float]) -> tuple[float, float, float]:
        """Unit vector from the eye through a panel point."""
        x, y = self.point_cm(p_px)
        n = math.sqrt(x * x + y * y + self.distance_cm * self.distance_cm)
        return (x / n, y / n, self.distance_cm / n)

    def angular_error(
        self, gaze_px: tuple[float, float], target_px: tuple[float, float]
    ) -> float:
        """Angle in degrees between the rays through two panel points."""
        a = self._ray(gaze_px)
        b = self._ray(target_px)
        dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
        return math.degrees(math.acos(max(-1.0, min(1.0, dot))))

    def eccentricity(self, p_px: tuple[float, float]) -> float:
        """Angle in degrees between a panel point and the panel centre."""
        return self.angular_error(p_px, self.panel_center_px)


def _mean_point(points: list[tuple[float, float]]) -> tuple[float, float]:
    n = float(len(points))
    return (sum(p[0] for p in points) / n, sum(p[1] for p in points) / n)


def fov_extent(geom: ViewingGeometry, layout: TargetLayout) -> tuple[float, float]:
    """Angular span of the target grid, in degrees.

    Width is the angle between the mean left-column point and the mean
    right-column point; height uses the top and bottom rows.  A layout with
    all targets coincident therefore spans (0, 0).
    """
    c = layout.centers
    left = _mean_point([c["top_left"], c["left"], c["bottom_left"]])
    right = _mean_point([c["top_right"], c["right"], c["bottom_right"]])
    top = _mean_point([c["top_left"], c["top"], c["top_right"]])
    bottom = _mean_point([c["bottom_left"], c["bottom"], c["bottom_right"]])
    return (geom.angular_error(left, right), geom.angular_error(top, bottom))
