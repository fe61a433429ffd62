"""Sharpness mapping and foveal-region detection.

Foveated rendering keeps a disk around the gaze point at full resolution and
blurs the periphery.  Blur destroys high-frequency detail, so local contrast
of the Laplacian separates the two zones: we compute the variance of the
4-neighbour Laplacian response inside a sliding window, threshold the
resulting map, and take the largest connected above-threshold region as the
fovea.  Its centroid is the gaze estimate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import FrameTooSmall, NoFoveaBoundary, NoTexture, RegionTooSmall
from .ingest import Frame

DEFAULT_WINDOW_PX = 31
DEFAULT_STRIDE_PX = 8

# Fallback threshold as a fraction of the map maximum, used directly in
# "fraction" mode and whenever Otsu's split is too weak to trust.
FRACTION_OF_MAX = 0.35
# Otsu splits with between-class variance under this share of total variance
# are considered non-informative.
MIN_SEPARABILITY = 0.10
# Above-threshold coverage beyond which the frame counts as uniformly sharp.
MAX_COVERAGE = 0.90

_LAPLACIAN_KERNEL = np.array(
    [[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]]
)


def luminance(pixels: np.ndarray) -> np.ndarray:
    """Rec. 601 luma of an H x W x 3 RGB array, as float64."""
    rgb = np.asarray(pixels, dtype=np.float64)
    return 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]


def laplacian(lum: np.ndarray) -> np.ndarray:
    """4-neighbour Laplacian with replicated borders."""
    return ndimage.convolve(np.asarray(lum, dtype=np.float64), _LAPLACIAN_KERNEL, mode="nearest")


@dataclass(frozen=True)
class SharpnessMap:
    """Windowed Laplacian-variance map of one frame.

    values[i, j] is the variance of the Laplacian over the window whose
    top-left corner sits at frame pixel (j * stride_px, i * stride_px).
    """

    values: np.ndarray
    window_px: int
    stride_px: int
    frame_index: int
    frame_size_px: tuple[int, int]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def cell_center_px(self, i: float, j: float) -> tuple[float, float]:
        """Frame-pixel (x, y) at the centre of map cell (i, j)."""
        half = self.window_px // 2
        return (j * self.stride_px + half, i * self.stride_px + half)


@dataclass(frozen=True)
class FoveaEstimate:
    """Detected foveal region for one frame."""

    center_px: tuple[float, float]
    radius_px: float
    confidence: float
    frame_index: int
    area_cells: int
    threshold: float


def _window_variance(lap: np.ndarray, window_px: int, stride_px: int) -> np.ndarray:
    """Variance of ``lap`` over every window position, via summed-area tables."""
    h, w = lap.shape
    n_rows = (h - window_px) // stride_px + 1
    n_cols = (w - window_px) // stride_px + 1

    def window_sums(a: np.ndarray) -> np.ndarray:
        sat = np.zeros((h + 1, w + 1), dtype=np.float64)
        np.cumsum(np.cumsum(a, axis=0), axis=1, out=sat[1:, 1:])
        r0 = np.arange(n_rows) * stride_px
        c0 = np.arange(n_cols) * stride_px
        r1 = r0 + window_px
        c1 = c0 + window_px
        return (
            sat[np.ix_(r1, c1)]
            - sat[np.ix_(r0, c1)]
            - sat[np.ix_(r1, c0)]
            + sat[np.ix_(r0, c0)]
        )

    n = float(window_px * window_px)
    s1 = window_sums(lap)
    s2 = window_sums(lap * lap)
    mean = s1 / n
    var = s2 / n - mean * mean
    # Cancellation can push tiny variances slightly negative.
    return np.maximum(var, 0.0)


def sharpness_map(
    frame: Frame | np.ndarray,
    window_px: int = DEFAULT_WINDOW_PX,
    stride_px: int = DEFAULT_STRIDE_PX,
) -> SharpnessMap:
    """Compute the windowed Laplacian-variance map of a frame.

    Accepts a Frame or a raw H x W x 3 uint8 array.  window_px must be odd
    and no larger than either frame dimension; stride_px must be positive.
    """
    if window_px < 3 or window_px % 2 == 0:
        raise ValueError(f"window_px must be odd and >= 3, got {window_px}")
    if stride_px < 1:
        raise ValueError(f"stride_px must be >= 1, got {stride_px}")

    if isinstance(frame, Frame):
        pixels = frame.pixels
        frame_index = frame.index
    else:
        pixels = np.asarray(frame)
        frame_index = 0

    h, w = pixels.shape[:2]
    if h < window_px or w < window_px:
        raise FrameTooSmall(
            f"frame is {w}x{h}, smaller than one {window_px}px window"
        )

    lap = laplacian(luminance(pixels))
    values = _window_variance(lap, window_px, stride_px)
    return SharpnessMap(
        values=values,
        window_px=window_px,
        stride_px=stride_px,
        frame_index=frame_index,
        frame_size_px=(w, h),
    )


def otsu_threshold(values: np.ndarray, bins: int = 256) -> tuple[float, float]:
    """Otsu split of a value distribution.

    Returns (threshold, separability) where separability is the between-class
    variance at the chosen split divided by the total variance.  A constant
    input yields separability 0.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    lo = float(v.min())
    hi = float(v.max())
    if hi <= lo:
        return lo, 0.0

    hist, edges = np.histogram(v, bins=bins, range=(lo, hi))
    p = hist.astype(np.float64) / v.size
    centers = 0.5 * (edges[:-1] + edges[1:])

    w0 = np.cumsum(p)
    w1 = 1.0 - w0
    cum_mean = np.cumsum(p * centers)
    grand_mean = cum_mean[-1]

    valid = (w0 > 0.0) & (w1 > 0.0)
    between = np.zeros(bins, dtype=np.float64)
    num = (grand_mean * w0 - cum_mean) ** 2
    between[valid] = num[valid] / (w0[valid] * w1[valid])

    k = int(np.argmax(between))
    total_var = float(np.sum(p * (centers - grand_mean) ** 2))
    separability = float(between[k] / total_var) if total_var > 0.0 else 0.0
    return float(edges[k + 1]), separability


def _largest_component(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """Largest 8-connected True region; ties go to the region whose centroid
    is closest to the top, then to the left."""
    labels, n = ndimage.label(mask, structure=np.ones((3, 3), dtype=int))
    if n == 0:
        return np.zeros_like(mask), 0
    areas = np.bincount(labels.ravel())[1:]
    best_area = int(areas.max())
    candidates = [lab for lab in range(1, n + 1) if areas[lab - 1] == best_area]
    if len(candidates) == 1:
        lab = candidates[0]
    else:
        cents = ndimage.center_of_mass(mask, labels, candidates)
        order = sorted(zip(cents, candidates))
        lab = order[0][1]
    return labels == lab, best_area


def detect_fovea(
    smap: SharpnessMap,
    threshold_mode: str = "otsu",
    min_region_frac: float = 0.01,
    transition_margin: int = 1,
) -> FoveaEstimate:
    """Segment the sharp region of a sharpness map and estimate the fovea.

    threshold_mode is "otsu" (adaptive, falls back to fraction-of-max when
    the split is weak) or "fraction" (always fraction-of-max).  A region is
    only credible if it holds at least min_region_frac of all map cells.
    transition_margin cells around the region boundary are excluded from the
    inside/outside contrast that backs the confidence score.

    Raises NoTexture, NoFoveaBoundary, or RegionTooSmall.
    """
    if threshold_mode not in ("otsu", "fraction"):
        raise ValueError(f"unknown threshold_mode {threshold_mode!r}")
    if transition_margin < 0:
        raise ValueError("transition_margin must be >= 0")

    values = smap.values
    peak = float(values.max())
    if peak <= 0.0:
        raise NoTexture("sharpness map is identically zero")

    # A frame that is sharp nearly everywhere has no blur boundary to find,
    # whatever the adaptive threshold would say: screen on fraction-of-max
    # coverage first.
    floor = FRACTION_OF_MAX * peak
    if float(np.mean(values > floor)) > MAX_COVERAGE:
        raise NoFoveaBoundary(
            f"{np.mean(values > floor):.0%} of map cells above {FRACTION_OF_MAX:.2f} x max"
        )

    if threshold_mode == "otsu":
        threshold, separability = otsu_threshold(values)
        if separability < MIN_SEPARABILITY:
            threshold = floor
    else:
        threshold = floor

    mask = values > threshold
    coverage = float(mask.mean())
    if coverage > MAX_COVERAGE:
        raise NoFoveaBoundary(f"{coverage:.0%} of map cells above threshold")

    region, area = _largest_component(mask)
    n_cells = values.size
    if area < min_region_frac * n_cells:
        raise RegionTooSmall(
            f"largest sharp region holds {area} of {n_cells} cells "
            f"({area / n_cells:.2%} < {min_region_frac:.2%})"
        )

    ii, jj = np.nonzero(region)
    ci = float(ii.mean())
    cj = float(jj.mean())
    center = smap.cell_center_px(ci, cj)
    radius = smap.stride_px * float(np.sqrt(area / np.pi))

    if transition_margin > 0:
        dilated = ndimage.binary_dilation(
            region, structure=np.ones((3, 3), dtype=bool), iterations=transition_margin
        )
        eroded = ndimage.binary_erosion(
            region, structure=np.ones((3, 3), dtype=bool), iterations=transition_margin
        )
        core = eroded if eroded.any() else region
    else:
        dilated = region
        core = region
    outside = ~dilated

    mean_in = float(values[core].mean())
    mean_out = float(values[outside].mean()) if outside.any() else mean_in
    if mean_in <= 0.0:
        confidence = 0.0
    else:
        confidence = float(np.clip(1.0 - mean_out / mean_in, 0.0, 1.0))

    return FoveaEstimate(
        center_px=center,
        radius_px=radius,
        confidence=confidence,
        frame_index=smap.frame_index,
        area_cells=area,
        threshold=float(threshold),
    )
