"""JSON configuration for the command-line pipelines.

Configs are strict: every key must be known, values are type- and
range-checked, and any violation raises ConfigError with the offending key
path, so typos fail loudly instead of silently running on defaults.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError
from .fovea import DEFAULT_STRIDE_PX, DEFAULT_WINDOW_PX
from .geometry import DEFAULT_DISTANCE_CM
from .metrics import DEFAULT_WINDOW_FRAMES
from .synth import (
    DEFAULT_BLUR_SIGMA,
    DEFAULT_FOVEA_RADIUS_PX,
    DEFAULT_FRAMES_PER_TARGET,
    DEFAULT_JITTER_SD_PX,
    DEFAULT_SEED,
    DEFAULT_TRANSITION_BAND_PX,
    PanelSpec,
    RulerMark,
    SessionScript,
    default_session_script,
)
from .targets import (
    DEFAULT_DOMINANCE_MIN,
    DEFAULT_R_MAX_PX,
    DEFAULT_R_MIN_PX,
    DEFAULT_RED_MIN,
    GRID_LABELS,
)


def _check_keys(obj: Mapping[str, Any], allowed: set[str], where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s): {', '.join(unknown)}")


def _get_number(obj: Mapping[str, Any], key: str, where: str, default: float) -> float:
    value = obj.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {value!r}")
    return float(value)


def _get_int(obj: Mapping[str, Any], key: str, where: str, default: int) -> int:
    value = obj.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}.{key}: expected an integer, got {value!r}")
    return value


def _get_point(obj: Mapping[str, Any], key: str, where: str, default: tuple[float, float]) -> tuple[float, float]:
    value = obj.get(key, list(default))
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)
    ):
        raise ConfigError(f"{where}.{key}: expected [x, y], got {value!r}")
    return (float(value[0]), float(value[1]))


def _get_color(obj: Mapping[str, Any], key: str, where: str, default: tuple[int, int, int]) -> tuple[int, int, int]:
    value = obj.get(key, list(default))
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 3
        or any(isinstance(v, bool) or not isinstance(v, int) or not 0 <= v <= 255 for v in value)
    ):
        raise ConfigError(f"{where}.{key}: expected [r, g, b] with 0..255 ints, got {value!r}")
    return (value[0], value[1], value[2])


@dataclass(frozen=True)
class DetectorParams:
    """Knobs for the sharpness, fovea, and target detectors."""

    window_px: int = DEFAULT_WINDOW_PX
    stride_px: int = DEFAULT_STRIDE_PX
    threshold_mode: str = "otsu"
    min_region_frac: float = 0.01
    transition_margin: int = 1
    red_min: int = DEFAULT_RED_MIN
    dominance_min: int = DEFAULT_DOMINANCE_MIN
    r_min_px: int = DEFAULT_R_MIN_PX
    r_max_px: int = DEFAULT_R_MAX_PX


@dataclass(frozen=True)
class RulerConfig:
    p1_px: tuple[float, float]
    p2_px: tuple[float, float]
    length_cm: float


@dataclass(frozen=True)
class AnalysisConfig:
    """Everything the analyze pipeline needs, resolved and validated."""

    frames_dir: Path
    output_dir: Path
    ruler: RulerConfig
    frame_rate_hz: float = 30.0
    viewing_distance_cm: float = DEFAULT_DISTANCE_CM
    window_frames: int = DEFAULT_WINDOW_FRAMES
    detector: DetectorParams = field(default_factory=DetectorParams)
    schedule_csv: Path | None = None


_ANALYSIS_KEYS = {
    "frames_dir",
    "output_dir",
    "ruler",
    "frame_rate_hz",
    "viewing_distance_cm",
    "window_frames",
    "detector",
    "schedule_csv",
}
_RULER_KEYS = {"p1_px", "p2_px", "length_cm"}
_DETECTOR_KEYS = {
    "window_px",
    "stride_px",
    "threshold_mode",
    "min_region_frac",
    "transition_margin",
    "red_min",
    "dominance_min",
    "r_min_px",
    "r_max_px",
}


def _load_json(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    try:
        raw = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return obj


def _parse_ruler(obj: Any, where: str) -> RulerConfig:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    _check_keys(obj, _RULER_KEYS, where)
    for key in _RULER_KEYS:
        if key not in obj:
            raise ConfigError(f"{where}: missing required key {key!r}")
    p1 = _get_point(obj, "p1_px", where, (0.0, 0.0))
    p2 = _get_point(obj, "p2_px", where, (0.0, 0.0))
    length = _get_number(obj, "length_cm", where, 0.0)
    if length <= 0.0:
        raise ConfigError(f"{where}.length_cm: must be > 0, got {length}")
    return RulerConfig(p1_px=p1, p2_px=p2, length_cm=length)


def _parse_detector(obj: Any, where: str) -> DetectorParams:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    _check_keys(obj, _DETECTOR_KEYS, where)
    params = DetectorParams(
        window_px=_get_int(obj, "window_px", where, DEFAULT_WINDOW_PX),
        stride_px=_get_int(obj, "stride_px", where, DEFAULT_STRIDE_PX),
        threshold_mode=obj.get("threshold_mode", "otsu"),
        min_region_frac=_get_number(obj, "min_region_frac", where, 0.01),
        transition_margin=_get_int(obj, "transition_margin", where, 1),
        red_min=_get_int(obj, "red_min", where, DEFAULT_RED_MIN),
        dominance_min=_get_int(obj, "dominance_min", where, DEFAULT_DOMINANCE_MIN),
        r_min_px=_get_int(obj, "r_min_px", where, DEFAULT_R_MIN_PX),
        r_max_px=_get_int(obj, "r_max_px", where, DEFAULT_R_MAX_PX),
    )
    if params.window_px < 3 or params.window_px % 2 == 0:
        raise ConfigError(f"{where}.window_px: must be odd and >= 3, got {params.window_px}")
    if params.stride_px < 1:
        raise ConfigError(f"{where}.stride_px: must be >= 1, got {params.stride_px}")
    if params.threshold_mode not in ("otsu", "fraction"):
        raise ConfigError(
            f"{where}.threshold_mode: must be 'otsu' or 'fraction', got {params.threshold_mode!r}"
        )
    if not 0.0 < params.min_region_frac < 1.0:
        raise ConfigError(f"{where}.min_region_frac: must be in (0, 1)")
    if params.transition_margin < 0:
        raise ConfigError(f"{where}.transition_margin: must be >= 0")
    if params.r_min_px < 1 or params.r_max_px < params.r_min_px:
        raise ConfigError(
            f"{where}: bad radius range [{params.r_min_px}, {params.r_max_px}]"
        )
    if not 0 <= params.red_min <= 255 or not 0 <= params.dominance_min <= 255:
        raise ConfigError(f"{where}: red_min and dominance_min must be 0..255")
    return params


def load_analysis_config(path: str | Path) -> AnalysisConfig:
    """Parse and validate an analyze config file."""
    obj = _load_json(path)
    where = str(path)
    _check_keys(obj, _ANALYSIS_KEYS, where)
    for key in ("frames_dir", "output_dir", "ruler"):
        if key not in obj:
            raise ConfigError(f"{where}: missing required key {key!r}")
    if not isinstance(obj["frames_dir"], str) or not isinstance(obj["output_dir"], str):
        raise ConfigError(f"{where}: frames_dir and output_dir must be strings")

    frame_rate = _get_number(obj, "frame_rate_hz", where, 30.0)
    if frame_rate <= 0.0:
        raise ConfigError(f"{where}.frame_rate_hz: must be > 0, got {frame_rate}")
    distance = _get_number(obj, "viewing_distance_cm", where, DEFAULT_DISTANCE_CM)
    if distance <= 0.0:
        raise ConfigError(f"{where}.viewing_distance_cm: must be > 0, got {distance}")
    window_frames = _get_int(obj, "window_frames", where, DEFAULT_WINDOW_FRAMES)
    if window_frames < 1:
        raise ConfigError(f"{where}.window_frames: must be >= 1, got {window_frames}")

    schedule = obj.get("schedule_csv")
    if schedule is not None and not isinstance(schedule, str):
        raise ConfigError(f"{where}.schedule_csv: must be a path string or null")

    detector = _parse_detector(obj.get("detector", {}), f"{where}.detector")
    ruler = _parse_ruler(obj["ruler"], f"{where}.ruler")

    return AnalysisConfig(
        frames_dir=Path(obj["frames_dir"]),
        output_dir=Path(obj["output_dir"]),
        ruler=ruler,
        frame_rate_hz=frame_rate,
        viewing_distance_cm=distance,
        window_frames=window_frames,
        detector=detector,
        schedule_csv=Path(schedule) if schedule else None,
    )


def read_schedule_csv(path: str | Path) -> dict[str, tuple[int, int]]:
    """Read per-target frame ranges: target_label,start_frame,end_frame.

    Bounds are inclusive.  Unknown labels, bad integers, or an inverted
    range raise ConfigError with the row number.
    """
    path = Path(path)
    out: dict[str, tuple[int, int]] = {}
    try:
        fh = path.open(newline="")
    except OSError as exc:
        raise ConfigError(f"cannot read schedule {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        needed = {"target_label", "start_frame", "end_frame"}
        if not needed <= set(reader.fieldnames or []):
            raise ConfigError(f"{path}: header must contain {sorted(needed)}")
        for row_no, row in enumerate(reader, start=2):
            label = (row["target_label"] or "").strip()
            if label not in GRID_LABELS:
                raise ConfigError(f"{path}: row {row_no}: unknown target label {label!r}")
            try:
                start = int(row["start_frame"])
                end = int(row["end_frame"])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{path}: row {row_no}: {exc}") from exc
            if end < start:
                raise ConfigError(f"{path}: row {row_no}: end_frame precedes start_frame")
            out[label] = (start, end)
    return out


_SYNTH_KEYS = {"out_dir", "panel", "script"}
_PANEL_KEYS = {
    "width_px",
    "height_px",
    "checker_px",
    "checker_colors",
    "target_radius_px",
    "target_color",
    "grid_center_px",
    "grid_spacing_px",
    "ruler",
}
_SCRIPT_KEYS = {
    "frames_per_target",
    "jitter_sd_px",
    "blur_sigma",
    "fovea_radius_px",
    "transition_band_px",
    "seed",
}


@dataclass(frozen=True)
class SynthConfig:
    panel: PanelSpec
    script: SessionScript
    out_dir: Path | None


def _parse_panel(obj: Any, where: str) -> PanelSpec:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    _check_keys(obj, _PANEL_KEYS, where)
    colors = obj.get("checker_colors", [[0, 0, 0], [255, 255, 255]])
    if not isinstance(colors, (list, tuple)) or len(colors) != 2:
        raise ConfigError(f"{where}.checker_colors: expected two [r, g, b] colors")
    color_pair = (
        _get_color({"c": colors[0]}, "c", f"{where}.checker_colors[0]", (0, 0, 0)),
        _get_color({"c": colors[1]}, "c", f"{where}.checker_colors[1]", (255, 255, 255)),
    )
    ruler = obj.get("ruler")
    ruler_mark = RulerMark()
    if ruler is not None:
        cfg = _parse_ruler(ruler, f"{where}.ruler")
        ruler_mark = RulerMark(p1_px=cfg.p1_px, p2_px=cfg.p2_px, length_cm=cfg.length_cm)
    return PanelSpec(
        width_px=_get_int(obj, "width_px", where, 1920),
        height_px=_get_int(obj, "height_px", where, 1080),
        checker_px=_get_int(obj, "checker_px", where, 16),
        checker_colors=color_pair,
        target_radius_px=_get_number(obj, "target_radius_px", where, 12.0),
        target_color=_get_color(obj, "target_color", where, (255, 0, 0)),
        grid_center_px=_get_point(obj, "grid_center_px", where, (960.0, 540.0)),
        grid_spacing_px=_get_point(obj, "grid_spacing_px", where, (385.0, 200.0)),
        ruler=ruler_mark,
    )


def load_synth_config(path: str | Path | None) -> SynthConfig:
    """Parse a synth config file; with path None, return all defaults."""
    if path is None:
        panel = PanelSpec()
        return SynthConfig(panel=panel, script=default_session_script(panel), out_dir=None)
    obj = _load_json(path)
    where = str(path)
    _check_keys(obj, _SYNTH_KEYS, where)

    panel = _parse_panel(obj.get("panel", {}), f"{where}.panel")

    script_obj = obj.get("script", {})
    if not isinstance(script_obj, dict):
        raise ConfigError(f"{where}.script: expected an object")
    _check_keys(script_obj, _SCRIPT_KEYS, f"{where}.script")
    swhere = f"{where}.script"
    frames_per_target = _get_int(script_obj, "frames_per_target", swhere, DEFAULT_FRAMES_PER_TARGET)
    if frames_per_target < 1:
        raise ConfigError(f"{swhere}.frames_per_target: must be >= 1")
    jitter = _get_number(script_obj, "jitter_sd_px", swhere, DEFAULT_JITTER_SD_PX)
    if jitter < 0.0:
        raise ConfigError(f"{swhere}.jitter_sd_px: must be >= 0")
    blur = _get_number(script_obj, "blur_sigma", swhere, DEFAULT_BLUR_SIGMA)
    if blur < 0.0:
        raise ConfigError(f"{swhere}.blur_sigma: must be >= 0")
    radius = _get_number(script_obj, "fovea_radius_px", swhere, DEFAULT_FOVEA_RADIUS_PX)
    if radius <= 0.0:
        raise ConfigError(f"{swhere}.fovea_radius_px: must be > 0")
    band = _get_number(script_obj, "transition_band_px", swhere, DEFAULT_TRANSITION_BAND_PX)
    if band < 0.0:
        raise ConfigError(f"{swhere}.transition_band_px: must be >= 0")
    seed = _get_int(script_obj, "seed", swhere, DEFAULT_SEED)

    script = default_session_script(
        panel,
        frames_per_target=frames_per_target,
        jitter_sd_px=jitter,
        blur_sigma=blur,
        fovea_radius_px=radius,
        transition_band_px=band,
        seed=seed,
    )

    out_dir = obj.get("out_dir")
    if out_dir is not None and not isinstance(out_dir, str):
        raise ConfigError(f"{where}.out_dir: must be a path string")
    return SynthConfig(panel=panel, script=script, out_dir=Path(out_dir) if out_dir else None)
