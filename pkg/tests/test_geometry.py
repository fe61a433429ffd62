from __future__ import annotations

import math

import numpy as np
import pytest

from foveagaze.errors import NegativeDistance
from foveagaze.geometry import ViewingGeometry, fov_extent
from foveagaze.synth import PanelSpec
from foveagaze.targets import CircleCandidate, assign_grid


def default_geometry() -> ViewingGeometry:
    return ViewingGeometry(cm_per_px=0.05, panel_center_px=(960.0, 540.0), distance_cm=63.0)


def angle_oracle_deg(
    geom: ViewingGeometry, a_px: tuple[float, float], b_px: tuple[float, float]
) -> float:
    """Angle between two panel points via explicit 3-D vectors."""
    def vec(p):
        return np.array(
            [
                (p[0] - geom.panel_center_px[0]) * geom.cm_per_px,
                (p[1] - geom.panel_center_px[1]) * geom.cm_per_px,
                geom.distance_cm,
            ]
        )

    u, v = vec(a_px), vec(b_px)
    cos = np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v))
    return math.degrees(math.acos(max(-1.0, min(1.0, cos))))


def test_identical_points_have_zero_error():
    geom = default_geometry()
    assert geom.angular_error((700.0, 300.0), (700.0, 300.0)) == 0.0


def test_one_degree_closed_form():
    # 1.09967 cm in-plane at 63 cm is atan(1.09967/63) = 1.000 degrees.
    geom = default_geometry()
    offset_px = 1.09967 / 0.05
    angle = geom.angular_error((960.0 + offset_px, 540.0), (960.0, 540.0))
    assert angle == pytest.approx(1.0, abs=1e-5)


def test_off_center_pair_matches_vector_oracle():
    geom = default_geometry()
    gaze = (960.0 + 11.0 / 0.05, 540.0)
    target = (960.0 + 10.0 / 0.05, 540.0)
    assert geom.angular_error(gaze, target) == pytest.approx(
        angle_oracle_deg(geom, gaze, target), abs=1e-9
    )


def test_thousand_random_pairs_match_vector_oracle():
    geom = default_geometry()
    rng = np.random.default_rng(17)
    points = rng.uniform((0.0, 0.0), (1920.0, 1080.0), size=(1000, 2, 2))
    for gaze, target in points:
        expected = angle_oracle_deg(geom, tuple(gaze), tuple(target))
        assert abs(geom.angular_error(tuple(gaze), tuple(target)) - expected) <= 1e-9


def test_small_angle_approximation_holds_below_two_cm():
    geom = default_geometry()
    for s_cm in np.linspace(0.05, 2.0, 40):
        angle = geom.angular_error((960.0 + s_cm / 0.05, 540.0), (960.0, 540.0))
        approx = math.degrees(s_cm / 63.0)
        assert abs(angle - approx) <= 0.01


def test_angular_error_is_symmetric():
    geom = default_geometry()
    rng = np.random.default_rng(29)
    for _ in range(50):
        a = tuple(rng.uniform(0.0, 1920.0, size=2))
        b = tuple(rng.uniform(0.0, 1080.0, size=2))
        assert geom.angular_error(a, b) == pytest.approx(geom.angular_error(b, a), abs=1e-12)


def test_error_grows_monotonically_along_a_ray():
    geom = default_geometry()
    target = (700.0, 400.0)
    direction = (0.6, 0.8)
    previous = 0.0
    for step in (5.0, 20.0, 80.0, 200.0, 500.0):
        gaze = (target[0] + direction[0] * step, target[1] + direction[1] * step)
        angle = geom.angular_error(gaze, target)
        assert angle > previous
        previous = angle


def test_eccentricity_measures_from_panel_center():
    geom = default_geometry()
    assert geom.eccentricity((960.0, 540.0)) == 0.0
    assert geom.eccentricity((1060.0, 540.0)) == pytest.approx(
        geom.angular_error((1060.0, 540.0), (960.0, 540.0))
    )


def test_pixels_to_cm_examples():
    geom = default_geometry()
    assert geom.pixels_to_cm(0.0) == 0.0
    assert geom.pixels_to_cm(61.95) == pytest.approx(3.0975)
    wide = ViewingGeometry(cm_per_px=0.1, panel_center_px=(0.0, 0.0))
    assert wide.pixels_to_cm(50.0) == pytest.approx(5.0)


def test_negative_pixel_distance_rejected():
    with pytest.raises(NegativeDistance):
        default_geometry().pixels_to_cm(-1.0)


def test_invalid_geometry_rejected():
    with pytest.raises(NegativeDistance):
        ViewingGeometry(cm_per_px=0.05, panel_center_px=(0.0, 0.0), distance_cm=0.0)
    with pytest.raises(NegativeDistance):
        ViewingGeometry(cm_per_px=0.0, panel_center_px=(0.0, 0.0))


def test_point_cm_is_offset_from_panel_center():
    geom = default_geometry()
    assert geom.point_cm((960.0, 540.0)) == (0.0, 0.0)
    assert geom.point_cm((980.0, 530.0)) == (pytest.approx(1.0), pytest.approx(-0.5))


def layout_from_centers(centers: dict[str, tuple[float, float]]):
    circles = [
        CircleCandidate(center_px=pt, radius_px=12.0, votes=1.0) for pt in centers.values()
    ]
    return assign_grid(circles)


def test_default_layout_spans_the_expected_field_of_view():
    layout = layout_from_centers(PanelSpec().grid_centers())
    geom = default_geometry()
    width, height = fov_extent(geom, layout)
    # Half-width 19.25 cm at 63 cm: 2*atan(19.25/63) = 34.00 degrees.
    assert width == pytest.approx(2.0 * math.degrees(math.atan(19.25 / 63.0)), abs=1e-9)
    assert abs(width - 34.0) <= 1.0
    assert abs(height - 18.0) <= 1.0


def test_coincident_layout_has_zero_extent():
    from foveagaze.targets import GRID_LABELS, TargetLayout

    centers = {lab: (960.0, 540.0) for lab in GRID_LABELS}
    layout = TargetLayout(
        centers=centers,
        radii={lab: 12.0 for lab in GRID_LABELS},
        offsets_px={lab: (0.0, 0.0) for lab in GRID_LABELS},
    )
    assert fov_extent(default_geometry(), layout) == (0.0, 0.0)
