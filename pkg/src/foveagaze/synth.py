"""Synthetic foveated sessions with exact ground truth.

A rendered panel is a checkerboard carrying nine red disk targets on a 3 x 3
grid.  Foveation keeps a disk around the scripted gaze point sharp, blends
linearly across a transition band, and shows a Gaussian-blurred copy outside.
Sessions are written as numbered PNG frames plus a truth table of the gaze
position every frame was foveated at.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image
from scipy import ndimage

from .errors import IoFailure, SpecOverflow
from .ingest import Frame
from .targets import GRID_LABELS

DEFAULT_FRAME_WIDTH = 1920
DEFAULT_FRAME_HEIGHT = 1080
DEFAULT_CHECKER_PX = 16
DEFAULT_TARGET_RADIUS_PX = 12.0
DEFAULT_GRID_CENTER_PX = (960.0, 540.0)
DEFAULT_GRID_SPACING_PX = (385.0, 200.0)
DEFAULT_BLUR_SIGMA = 6.0
DEFAULT_FOVEA_RADIUS_PX = 200.0
DEFAULT_TRANSITION_BAND_PX = 20.0
DEFAULT_FRAMES_PER_TARGET = 10
DEFAULT_JITTER_SD_PX = 3.0
DEFAULT_SEED = 20240

_SUPERSAMPLE = 4


@dataclass(frozen=True)
class RulerMark:
    """A segment of known physical length, for scale calibration."""

    p1_px: tuple[float, float] = (460.0, 1000.0)
    p2_px: tuple[float, float] = (1460.0, 1000.0)
    length_cm: float = 50.0


@dataclass(frozen=True)
class PanelSpec:
    """Static content of the stimulus panel."""

    width_px: int = DEFAULT_FRAME_WIDTH
    height_px: int = DEFAULT_FRAME_HEIGHT
    checker_px: int = DEFAULT_CHECKER_PX
    checker_colors: tuple[tuple[int, int, int], tuple[int, int, int]] = (
        (0, 0, 0),
        (255, 255, 255),
    )
    target_radius_px: float = DEFAULT_TARGET_RADIUS_PX
    target_color: tuple[int, int, int] = (255, 0, 0)
    grid_center_px: tuple[float, float] = DEFAULT_GRID_CENTER_PX
    grid_spacing_px: tuple[float, float] = DEFAULT_GRID_SPACING_PX
    ruler: RulerMark = field(default_factory=RulerMark)

    def __post_init__(self) -> None:
        if self.width_px < 1 or self.height_px < 1:
            raise SpecOverflow(f"frame {self.width_px}x{self.height_px} is empty")
        if self.checker_px < 1:
            raise SpecOverflow(f"checker_px must be >= 1, got {self.checker_px}")
        if self.target_radius_px <= 0.0:
            raise SpecOverflow("target radius must be positive")
        sx, sy = self.grid_spacing_px
        if sx <= 0.0 or sy <= 0.0:
            raise SpecOverflow(f"grid spacing must be positive, got {self.grid_spacing_px}")
        if 2.0 * self.target_radius_px >= min(sx, sy):
            raise SpecOverflow(
                f"disks of radius {self.target_radius_px} overlap at spacing {self.grid_spacing_px}"
            )
        r = self.target_radius_px
        for label, (cx, cy) in self.grid_centers().items():
            if cx - r < 0 or cx + r > self.width_px or cy - r < 0 or cy + r > self.height_px:
                raise SpecOverflow(
                    f"target {label} at ({cx}, {cy}) extends beyond the {self.width_px}x"
                    f"{self.height_px} frame"
                )

    def grid_centers(self) -> dict[str, tuple[float, float]]:
        """Target centres keyed by grid label, row-major."""
        cx, cy = self.grid_center_px
        sx, sy = self.grid_spacing_px
        out: dict[str, tuple[float, float]] = {}
        k = 0
        for row in (-1, 0, 1):
            for col in (-1, 0, 1):
                out[GRID_LABELS[k]] = (cx + col * sx, cy + row * sy)
                k += 1
        return out


@dataclass(frozen=True)
class DwellEntry:
    """Gaze parked at one point for a run of frames."""

    label: str
    gaze_px: tuple[float, float]
    n_frames: int
    jitter_sd_px: float = DEFAULT_JITTER_SD_PX


@dataclass(frozen=True)
class SessionScript:
    """Dwell sequence plus the foveation parameters shared by all frames."""

    entries: tuple[DwellEntry, ...]
    blur_sigma: float = DEFAULT_BLUR_SIGMA
    fovea_radius_px: float = DEFAULT_FOVEA_RADIUS_PX
    transition_band_px: float = DEFAULT_TRANSITION_BAND_PX
    seed: int = DEFAULT_SEED
    frame_rate_hz: float = 30.0

    @property
    def total_frames(self) -> int:
        return sum(e.n_frames for e in self.entries)


def default_session_script(
    spec: PanelSpec,
    frames_per_target: int = DEFAULT_FRAMES_PER_TARGET,
    jitter_sd_px: float = DEFAULT_JITTER_SD_PX,
    blur_sigma: float = DEFAULT_BLUR_SIGMA,
    fovea_radius_px: float = DEFAULT_FOVEA_RADIUS_PX,
    transition_band_px: float = DEFAULT_TRANSITION_BAND_PX,
    seed: int = DEFAULT_SEED,
) -> SessionScript:
    """One dwell per target, visited in row-major grid order."""
    centers = spec.grid_centers()
    entries = tuple(
        DwellEntry(label=lab, gaze_px=centers[lab], n_frames=frames_per_target,
                   jitter_sd_px=jitter_sd_px)
        for lab in GRID_LABELS
    )
    return SessionScript(
        entries=entries,
        blur_sigma=blur_sigma,
        fovea_radius_px=fovea_radius_px,
        transition_band_px=transition_band_px,
        seed=seed,
    )


def render_panel(spec: PanelSpec) -> Frame:
    """Rasterise the panel: checkerboard plus anti-aliased red disks.

    Checker colour at pixel (x, y) follows the parity of
    (x // checker_px + y // checker_px).  Disk edges are supersampled 4 x 4,
    so a pixel's colour blends the disk and backdrop by coverage; the pixel
    at a disk centre is pure target colour.
    """
    w, h = spec.width_px, spec.height_px
    xs = np.arange(w) // spec.checker_px
    ys = np.arange(h) // spec.checker_px
    parity = (xs[None, :] + ys[:, None]) % 2
    colors = np.array(spec.checker_colors, dtype=np.float64)
    canvas = colors[parity]

    target = np.array(spec.target_color, dtype=np.float64)
    sub = (np.arange(_SUPERSAMPLE) + 0.5) / _SUPERSAMPLE - 0.5
    r = spec.target_radius_px
    for cx, cy in spec.grid_centers().values():
        x0 = max(0, int(math.floor(cx - r - 1)))
        x1 = min(w - 1, int(math.ceil(cx + r + 1)))
        y0 = max(0, int(math.floor(cy - r - 1)))
        y1 = min(h - 1, int(math.ceil(cy + r + 1)))
        px = np.arange(x0, x1 + 1, dtype=np.float64)
        py = np.arange(y0, y1 + 1, dtype=np.float64)
        sx = px[:, None] + sub[None, :] - cx  # (nx, s)
        sy = py[:, None] + sub[None, :] - cy  # (ny, s)
        inside = (
            sx[None, :, None, :] ** 2 + sy[:, None, :, None] ** 2 <= r * r
        )  # (ny, nx, s_y, s_x)
        coverage = inside.mean(axis=(2, 3))
        patch = canvas[y0 : y1 + 1, x0 : x1 + 1]
        canvas[y0 : y1 + 1, x0 : x1 + 1] = (
            coverage[..., None] * target[None, None, :] + (1.0 - coverage[..., None]) * patch
        )

    pixels = np.clip(np.rint(canvas), 0, 255).astype(np.uint8)
    return Frame(index=0, timestamp_ms=0.0, pixels=pixels)


def _gaussian_kernel(sigma: float) -> np.ndarray:
    radius = max(1, int(math.ceil(4.0 * sigma)))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def _blur_f64(pixels_f64: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur of a float64 H x W x C array, edges replicated."""
    if sigma <= 0.0:
        return pixels_f64.copy()
    k = _gaussian_kernel(sigma)
    out = ndimage.convolve1d(pixels_f64, k, axis=0, mode="nearest")
    return ndimage.convolve1d(out, k, axis=1, mode="nearest")


def gaussian_blur(pixels: np.ndarray, sigma: float) -> np.ndarray:
    """Gaussian-blur an RGB uint8 array.  sigma = 0 returns an exact copy."""
    src = np.asarray(pixels)
    if sigma <= 0.0:
        return src.copy()
    out = _blur_f64(src.astype(np.float64), sigma)
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def _foveate_f64(
    sharp_f64: np.ndarray,
    blurred_f64: np.ndarray,
    gaze_px: tuple[float, float],
    fovea_radius_px: float,
    transition_band_px: float,
) -> np.ndarray:
    h, w = sharp_f64.shape[:2]
    xs = np.arange(w, dtype=np.float64) - gaze_px[0]
    ys = np.arange(h, dtype=np.float64) - gaze_px[1]
    d = np.hypot(xs[None, :], ys[:, None])
    if transition_band_px > 0.0:
        alpha = np.clip((fovea_radius_px + transition_band_px - d) / transition_band_px, 0.0, 1.0)
    else:
        alpha = (d <= fovea_radius_px).astype(np.float64)
    blended = alpha[..., None] * sharp_f64 + (1.0 - alpha[..., None]) * blurred_f64
    return np.clip(np.rint(blended), 0, 255).astype(np.uint8)


def apply_foveation(
    frame: Frame,
    gaze_px: tuple[float, float],
    fovea_radius_px: float = DEFAULT_FOVEA_RADIUS_PX,
    blur_sigma: float = DEFAULT_BLUR_SIGMA,
    transition_band_px: float = DEFAULT_TRANSITION_BAND_PX,
) -> Frame:
    """Foveate one frame around a gaze point.

    Pixels within fovea_radius_px of the gaze stay untouched; pixels beyond
    the transition band show the blurred copy; the band in between blends
    linearly by distance.  blur_sigma = 0 leaves the frame identical.
    """
    if fovea_radius_px < 0.0 or transition_band_px < 0.0:
        raise ValueError("fovea radius and transition band must be >= 0")
    if blur_sigma <= 0.0:
        return Frame(frame.index, frame.timestamp_ms, frame.pixels.copy())
    sharp = frame.pixels.astype(np.float64)
    blurred = _blur_f64(sharp, blur_sigma)
    pixels = _foveate_f64(sharp, blurred, gaze_px, fovea_radius_px, transition_band_px)
    return Frame(frame.index, frame.timestamp_ms, pixels)


@dataclass(frozen=True)
class TruthRow:
    frame: int
    gaze_px: tuple[float, float]
    target_label: str


@dataclass(frozen=True)
class SessionManifest:
    """What a generated session wrote and the parameters behind it."""

    out_dir: str
    frame_paths: list[str]
    truth_path: str
    truth: list[TruthRow]
    spec: PanelSpec
    script: SessionScript


def generate_session(
    spec: PanelSpec,
    script: SessionScript,
    out_dir: str | Path,
) -> SessionManifest:
    """Render and write a full session to out_dir.

    Emits frame_00000.png ... plus truth.csv with columns
    frame,gaze_x,gaze_y,target_label.  Gaze jitter is drawn per frame from
    a normal with the entry's SD, using one generator seeded from the
    script, so identical inputs produce byte-identical outputs.

    Raises IoFailure when the directory or a file cannot be written.
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailure(str(out_dir), str(exc)) from exc

    rng = np.random.default_rng(script.seed)
    panel = render_panel(spec)
    sharp = panel.pixels.astype(np.float64)
    blurred = _blur_f64(sharp, script.blur_sigma) if script.blur_sigma > 0.0 else sharp

    frame_paths: list[str] = []
    truth: list[TruthRow] = []
    index = 0
    for entry in script.entries:
        for _ in range(entry.n_frames):
            jitter = rng.normal(0.0, entry.jitter_sd_px, size=2)
            gaze = (entry.gaze_px[0] + float(jitter[0]), entry.gaze_px[1] + float(jitter[1]))
            if script.blur_sigma > 0.0:
                pixels = _foveate_f64(
                    sharp, blurred, gaze, script.fovea_radius_px, script.transition_band_px
                )
            else:
                pixels = panel.pixels
            path = out_dir / f"frame_{index:05d}.png"
            try:
                Image.fromarray(pixels).save(path, format="PNG")
            except OSError as exc:
                raise IoFailure(str(path), str(exc)) from exc
            frame_paths.append(str(path))
            truth.append(TruthRow(frame=index, gaze_px=gaze, target_label=entry.label))
            index += 1

    truth_path = out_dir / "truth.csv"
    try:
        with truth_path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["frame", "gaze_x", "gaze_y", "target_label"])
            for row in truth:
                writer.writerow(
                    [row.frame, f"{row.gaze_px[0]:.6f}", f"{row.gaze_px[1]:.6f}", row.target_label]
                )
    except OSError as exc:
        raise IoFailure(str(truth_path), str(exc)) from exc

    return SessionManifest(
        out_dir=str(out_dir),
        frame_paths=frame_paths,
        truth_path=str(truth_path),
        truth=truth,
        spec=spec,
        script=script,
    )


def read_truth_csv(path: str | Path) -> list[TruthRow]:
    """Read a truth.csv written by generate_session."""
    rows: list[TruthRow] = []
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            rows.append(
                TruthRow(
                    frame=int(row["frame"]),
                    gaze_px=(float(row["gaze_x"]), float(row["gaze_y"])),
                    target_label=row["target_label"],
                )
            )
    return rows
