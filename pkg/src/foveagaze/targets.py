"""Fixation-target detection and panel scale calibration.

The stimulus panel shows nine red disks on a 3 x 3 grid.  Detection runs a
gradient-directed circular Hough transform over a red-dominance mask: every
mask edge pixel casts votes along its inward normal at each candidate radius,
the vote image is peak-picked with greedy non-maximum suppression, and each
accepted centre is refined to sub-pixel precision from the mask pixels it
encloses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import (
    AmbiguousTargets,
    DegenerateGrid,
    MissingTargets,
    NonPositiveLength,
    ZeroBaseline,
)
from .ingest import Frame

DEFAULT_RED_MIN = 120
DEFAULT_DOMINANCE_MIN = 50
DEFAULT_R_MIN_PX = 8
DEFAULT_R_MAX_PX = 16

# Candidate peaks must reach this share of the strongest peak, and at least
# the absolute floor, to count as potential targets.
VOTE_REL_THRESHOLD = 0.3
VOTE_FLOOR = 5.0
# A tenth candidate within this share of the ninth's votes makes the set of
# nine ambiguous.
AMBIGUITY_RATIO = 0.8

GRID_LABELS = (
    "top_left",
    "top",
    "top_right",
    "left",
    "center",
    "right",
    "bottom_left",
    "bottom",
    "bottom_right",
)

DISPLAY_NAMES = {
    "top_left": "Top-left",
    "top": "Top",
    "top_right": "Top-right",
    "left": "Left",
    "center": "Center",
    "right": "Right",
    "bottom_left": "Bottom-left",
    "bottom": "Bottom",
    "bottom_right": "Bottom-right",
}


@dataclass(frozen=True)
class CircleCandidate:
    """One circle hypothesis from the Hough stage."""

    center_px: tuple[float, float]
    radius_px: float
    votes: float


@dataclass(frozen=True)
class TargetLayout:
    """Nine detected targets with grid labels assigned."""

    centers: dict[str, tuple[float, float]]
    radii: dict[str, float]
    offsets_px: dict[str, tuple[float, float]]

    @property
    def center_target_px(self) -> tuple[float, float]:
        return self.centers["center"]


@dataclass(frozen=True)
class ScaleCalibration:
    """Physical scale recovered from a ruler segment of known length."""

    cm_per_px: float
    p1_px: tuple[float, float]
    p2_px: tuple[float, float]
    length_cm: float


def red_mask(
    pixels: np.ndarray,
    red_min: int = DEFAULT_RED_MIN,
    dominance_min: int = DEFAULT_DOMINANCE_MIN,
) -> np.ndarray:
    """Boolean mask of strongly red pixels.

    A pixel qualifies when R >= red_min and R exceeds both G and B by at
    least dominance_min.  Arithmetic runs in int16 to dodge uint8 wraparound.
    """
    rgb = np.asarray(pixels).astype(np.int16)
    r = rgb[..., 0]
    gb = np.maximum(rgb[..., 1], rgb[..., 2])
    return (r >= red_min) & ((r - gb) >= dominance_min)


def hough_circles(
    mask: np.ndarray,
    r_min_px: int = DEFAULT_R_MIN_PX,
    r_max_px: int = DEFAULT_R_MAX_PX,
    min_separation_px: float | None = None,
) -> list[CircleCandidate]:
    """Gradient-directed circular Hough transform over a boolean mask.

    Edge pixels of the mask vote along their inward normal at every integer
    radius in [r_min_px, r_max_px]; votes land in a single 2-D accumulator.
    Peaks above max(VOTE_FLOOR, VOTE_REL_THRESHOLD * strongest) survive a
    greedy non-maximum suppression with the given minimum separation
    (default 3 * r_max_px).  Candidates return sorted by votes, strongest
    first; each carries a radius read from the mode of its edge-distance
    histogram and a centre refined to the centroid of the mask pixels inside
    that radius.
    """
    if r_min_px < 1 or r_max_px < r_min_px:
        raise ValueError(f"bad radius range [{r_min_px}, {r_max_px}]")
    if min_separation_px is None:
        min_separation_px = 3.0 * r_max_px

    h, w = mask.shape
    m = mask.astype(np.float64)
    gy = ndimage.sobel(m, axis=0, mode="nearest")
    gx = ndimage.sobel(m, axis=1, mode="nearest")
    mag = np.hypot(gx, gy)
    edge = mag > 1e-9
    if not edge.any():
        return []

    ys, xs = np.nonzero(edge)
    ux = gx[edge] / mag[edge]
    uy = gy[edge] / mag[edge]

    acc = np.zeros((h, w), dtype=np.float64)
    for r in range(r_min_px, r_max_px + 1):
        cx = np.rint(xs + ux * r).astype(np.int64)
        cy = np.rint(ys + uy * r).astype(np.int64)
        ok = (cx >= 0) & (cx < w) & (cy >= 0) & (cy < h)
        np.add.at(acc, (cy[ok], cx[ok]), 1.0)

    top = float(acc.max())
    threshold = max(VOTE_FLOOR, VOTE_REL_THRESHOLD * top)
    py, px = np.nonzero(acc >= threshold)
    if py.size == 0:
        return []
    votes = acc[py, px]
    # Strongest first; ties resolved by position so output order is stable.
    order = np.lexsort((px, py, -votes))

    kept: list[tuple[float, float, float]] = []
    min_sep2 = min_separation_px * min_separation_px
    for idx in order:
        x = float(px[idx])
        y = float(py[idx])
        if any((x - kx) ** 2 + (y - ky) ** 2 < min_sep2 for kx, ky, _ in kept):
            continue
        kept.append((x, y, float(votes[idx])))

    return [_refine(mask, ys, xs, x, y, v, r_min_px, r_max_px) for x, y, v in kept]


def _refine(
    mask: np.ndarray,
    edge_ys: np.ndarray,
    edge_xs: np.ndarray,
    cx: float,
    cy: float,
    votes: float,
    r_min_px: int,
    r_max_px: int,
) -> CircleCandidate:
    """Radius from the edge-distance histogram, centre from the mask centroid."""
    d = np.hypot(edge_xs - cx, edge_ys - cy)
    near = d <= r_max_px + 2.0
    bins = np.rint(d[near]).astype(np.int64)
    counts = np.zeros(r_max_px + 1, dtype=np.int64)
    in_range = (bins >= r_min_px) & (bins <= r_max_px)
    np.add.at(counts, bins[in_range], 1)
    radius = float(np.argmax(counts)) if counts.any() else float(r_min_px)

    h, w = mask.shape
    x0 = max(0, int(math.floor(cx - radius)))
    x1 = min(w, int(math.ceil(cx + radius)) + 1)
    y0 = max(0, int(math.floor(cy - radius)))
    y1 = min(h, int(math.ceil(cy + radius)) + 1)
    patch = mask[y0:y1, x0:x1]
    yy, xx = np.nonzero(patch)
    if yy.size:
        fx = xx + x0
        fy = yy + y0
        inside = (fx - cx) ** 2 + (fy - cy) ** 2 <= radius * radius
        if inside.any():
            cx = float(fx[inside].mean())
            cy = float(fy[inside].mean())
    return CircleCandidate(center_px=(cx, cy), radius_px=radius, votes=votes)


def detect_targets(
    frame: Frame | np.ndarray,
    red_min: int = DEFAULT_RED_MIN,
    dominance_min: int = DEFAULT_DOMINANCE_MIN,
    r_min_px: int = DEFAULT_R_MIN_PX,
    r_max_px: int = DEFAULT_R_MAX_PX,
) -> list[CircleCandidate]:
    """Detect exactly nine red disk targets in a frame.

    Raises MissingTargets when fewer than nine candidates pass the vote
    threshold, AmbiguousTargets when a tenth candidate polls at least
    AMBIGUITY_RATIO of the ninth's votes.
    """
    pixels = frame.pixels if isinstance(frame, Frame) else np.asarray(frame)
    mask = red_mask(pixels, red_min=red_min, dominance_min=dominance_min)
    candidates = hough_circles(mask, r_min_px=r_min_px, r_max_px=r_max_px)
    if len(candidates) < 9:
        raise MissingTargets(len(candidates))
    if len(candidates) > 9 and candidates[9].votes >= AMBIGUITY_RATIO * candidates[8].votes:
        raise AmbiguousTargets(len(candidates))
    return candidates[:9]


def assign_grid(circles: list[CircleCandidate]) -> TargetLayout:
    """Label nine circles by their 3 x 3 grid position.

    Centres sort by y; the two largest gaps in the sorted ys split them into
    rows, which must come out 3/3/3.  Rows sort top to bottom, members left
    to right, and labels run row-major from top_left to bottom_right.
    Offsets are measured from the centre target.

    Raises DegenerateGrid when no 3/3/3 row split exists or points coincide.
    """
    if len(circles) != 9:
        raise DegenerateGrid(f"grid assignment needs 9 circles, got {len(circles)}")
    points = [c.center_px for c in circles]
    if len(set(points)) != 9:
        raise DegenerateGrid("two detected centers coincide")

    order = sorted(range(9), key=lambda i: (circles[i].center_px[1], circles[i].center_px[0]))
    ys = [circles[i].center_px[1] for i in order]
    gaps = [(ys[i + 1] - ys[i], i) for i in range(8)]
    # Two widest gaps, earliest position winning ties, define the row breaks.
    split = sorted(sorted(gaps, key=lambda g: (-g[0], g[1]))[:2], key=lambda g: g[1])
    b1, b2 = split[0][1] + 1, split[1][1] + 1
    rows = [order[:b1], order[b1:b2], order[b2:]]
    if [len(r) for r in rows] != [3, 3, 3]:
        raise DegenerateGrid(
            f"row split came out {[len(r) for r in rows]}, expected [3, 3, 3]"
        )

    centers: dict[str, tuple[float, float]] = {}
    radii: dict[str, float] = {}
    k = 0
    for row in rows:
        for i in sorted(row, key=lambda i: circles[i].center_px[0]):
            label = GRID_LABELS[k]
            centers[label] = circles[i].center_px
            radii[label] = circles[i].radius_px
            k += 1

    cx, cy = centers["center"]
    offsets = {lab: (x - cx, y - cy) for lab, (x, y) in centers.items()}
    return TargetLayout(centers=centers, radii=radii, offsets_px=offsets)


def calibrate_scale(
    p1_px: tuple[float, float],
    p2_px: tuple[float, float],
    length_cm: float,
) -> ScaleCalibration:
    """Physical scale from a segment of known on-panel length.

    Raises ZeroBaseline when the endpoints coincide and NonPositiveLength
    when length_cm <= 0.
    """
    if length_cm <= 0.0:
        raise NonPositiveLength(f"ruler length must be positive, got {length_cm}")
    dist = math.hypot(p2_px[0] - p1_px[0], p2_px[1] - p1_px[1])
    if dist == 0.0:
        raise ZeroBaseline("ruler endpoints coincide")
    return ScaleCalibration(
        cm_per_px=length_cm / dist,
        p1_px=(float(p1_px[0]), float(p1_px[1])),
        p2_px=(float(p2_px[0]), float(p2_px[1])),
        length_cm=float(length_cm),
    )
