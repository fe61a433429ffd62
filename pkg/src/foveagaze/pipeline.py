"""End-to-end analysis of one recorded session.

Stages: load frames, map sharpness per frame, pick the sharpest frame and
detect the target grid on it, estimate the fovea on every frame, calibrate
physical scale from the ruler segment, select the steadiest fixation window
per target, and summarise errors in pixels, centimetres, and degrees.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .charts import error_bar_chart_svg
from .config import AnalysisConfig, read_schedule_csv
from .errors import FoveaGazeError
from .fovea import FoveaEstimate, detect_fovea, sharpness_map
from .geometry import ViewingGeometry, fov_extent
from .ingest import Frame, FrameSequence, load_frames
from .metrics import (
    FixationMeasurement,
    GazeTrace,
    TraceRecord,
    select_best_window,
)
from .targets import GRID_LABELS, TargetLayout, assign_grid, calibrate_scale, detect_targets


class StageFailure(FoveaGazeError):
    """A pipeline stage failed; carries the stage name and frame index."""

    def __init__(self, stage: str, frame_index: int | None, cause: FoveaGazeError) -> None:
        self.stage = stage
        self.frame_index = frame_index
        self.cause = cause
        at = f" at frame {frame_index}" if frame_index is not None else ""
        super().__init__(f"stage {stage!r} failed{at}: {type(cause).__name__}: {cause}")


@dataclass(frozen=True)
class AnalysisResult:
    """Everything the analyze pipeline derives from one session."""

    n_frames: int
    frame_rate_hz: float
    sharpest_frame: int
    layout: TargetLayout
    cm_per_px: float
    geometry: ViewingGeometry
    trace: GazeTrace
    estimates: list[FoveaEstimate]
    measurements: dict[str, FixationMeasurement]
    fov_deg: tuple[float, float]
    source_dir: str


def _analyze_frame(
    frame: Frame, config: AnalysisConfig
) -> tuple[float, FoveaEstimate | FoveaGazeError]:
    det = config.detector
    smap = sharpness_map(frame, window_px=det.window_px, stride_px=det.stride_px)
    mean_sharpness = float(smap.values.mean())
    try:
        estimate = detect_fovea(
            smap,
            threshold_mode=det.threshold_mode,
            min_region_frac=det.min_region_frac,
            transition_margin=det.transition_margin,
        )
        return mean_sharpness, estimate
    except FoveaGazeError as exc:
        return mean_sharpness, exc


def analyze_session(
    config: AnalysisConfig,
    jobs: int = 1,
    sequence: FrameSequence | None = None,
) -> AnalysisResult:
    """Run the full pipeline for one session.

    jobs > 1 maps the per-frame work over a thread pool; results are
    consumed in frame order, so outputs and error reporting do not depend
    on the worker count.  A pre-loaded sequence can be passed to skip disk
    I/O.

    Raises ingest errors as-is and wraps per-stage failures in StageFailure.
    """
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    seq = sequence if sequence is not None else load_frames(
        config.frames_dir, "*.png", config.frame_rate_hz
    )

    if jobs == 1:
        per_frame = [_try_frame(frame, config) for frame in seq]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_frame = list(pool.map(lambda fr: _try_frame(fr, config), seq))

    estimates: list[FoveaEstimate] = []
    sharpness: list[float] = []
    for i, outcome in enumerate(per_frame):
        if isinstance(outcome, StageFailure):
            raise outcome
        mean_sharpness, est = outcome
        if isinstance(est, FoveaGazeError):
            raise StageFailure("fovea", i, est)
        sharpness.append(mean_sharpness)
        estimates.append(est)

    sharpest = max(range(len(sharpness)), key=lambda i: (sharpness[i], -i))

    det = config.detector
    try:
        circles = detect_targets(
            seq[sharpest],
            red_min=det.red_min,
            dominance_min=det.dominance_min,
            r_min_px=det.r_min_px,
            r_max_px=det.r_max_px,
        )
        layout = assign_grid(circles)
    except FoveaGazeError as exc:
        raise StageFailure("targets", sharpest, exc) from exc

    scale = calibrate_scale(config.ruler.p1_px, config.ruler.p2_px, config.ruler.length_cm)
    geom = ViewingGeometry(
        cm_per_px=scale.cm_per_px,
        panel_center_px=layout.center_target_px,
        distance_cm=config.viewing_distance_cm,
    )

    records = [
        TraceRecord(
            frame=frame.index,
            timestamp_ms=frame.timestamp_ms,
            gaze_px=est.center_px,
            confidence=est.confidence,
        )
        for frame, est in zip(seq, estimates)
    ]
    trace = GazeTrace(records=records, source=str(config.frames_dir))

    schedule = read_schedule_csv(config.schedule_csv) if config.schedule_csv else {}
    measurements: dict[str, FixationMeasurement] = {}
    for label in GRID_LABELS:
        try:
            measurements[label] = select_best_window(
                trace,
                layout.centers[label],
                geom,
                k=config.window_frames,
                frame_range=schedule.get(label),
                label=label,
            )
        except FoveaGazeError as exc:
            raise StageFailure("windows", None, exc) from exc

    return AnalysisResult(
        n_frames=len(seq),
        frame_rate_hz=config.frame_rate_hz,
        sharpest_frame=sharpest,
        layout=layout,
        cm_per_px=scale.cm_per_px,
        geometry=geom,
        trace=trace,
        estimates=estimates,
        measurements=measurements,
        fov_deg=fov_extent(geom, layout),
        source_dir=seq.source_dir,
    )


def _try_frame(
    frame: Frame, config: AnalysisConfig
) -> tuple[float, FoveaEstimate | FoveaGazeError] | StageFailure:
    try:
        return _analyze_frame(frame, config)
    except FoveaGazeError as exc:
        return StageFailure("sharpness", frame.index, exc)


def write_analysis_outputs(result: AnalysisResult, out_dir: str | Path) -> list[Path]:
    """Write gaze_trace.csv, accuracy.csv, report.json, error_by_target.svg.

    All emission is deterministic: fixed float formatting, sorted JSON keys,
    LF newlines.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    trace_path = out_dir / "gaze_trace.csv"
    lines = ["frame,gaze_x,gaze_y,confidence"]
    for rec in result.trace:
        lines.append(
            f"{rec.frame},{rec.gaze_px[0]:.6f},{rec.gaze_px[1]:.6f},{rec.confidence:.6f}"
        )
    trace_path.write_text("\n".join(lines) + "\n")
    written.append(trace_path)

    acc_path = out_dir / "accuracy.csv"
    lines = ["target,error_px,error_deg,window_start"]
    for label in GRID_LABELS:
        m = result.measurements[label]
        lines.append(
            f"{label},{m.mean_error_px:.6f},{m.mean_error_deg:.6f},{m.window_start}"
        )
    acc_path.write_text("\n".join(lines) + "\n")
    written.append(acc_path)

    report = {
        "n_frames": result.n_frames,
        "frame_rate_hz": round(result.frame_rate_hz, 6),
        "source_dir": result.source_dir,
        "sharpest_frame": result.sharpest_frame,
        "cm_per_px": round(result.cm_per_px, 9),
        "viewing_distance_cm": round(result.geometry.distance_cm, 6),
        "fov_deg": {
            "width": round(result.fov_deg[0], 6),
            "height": round(result.fov_deg[1], 6),
        },
        "targets": {
            label: {
                "center_px": [round(v, 6) for v in result.layout.centers[label]],
                "radius_px": round(result.layout.radii[label], 6),
                "offset_px": [round(v, 6) for v in result.layout.offsets_px[label]],
            }
            for label in GRID_LABELS
        },
        "measurements": {
            label: {
                "window_start": result.measurements[label].window_start,
                "window_len": result.measurements[label].window_len,
                "mean_error_px": round(result.measurements[label].mean_error_px, 6),
                "mean_error_cm": round(
                    result.geometry.pixels_to_cm(result.measurements[label].mean_error_px), 6
                ),
                "mean_error_deg": round(result.measurements[label].mean_error_deg, 6),
            }
            for label in GRID_LABELS
        },
        "overall": {
            "mean_error_px": round(
                sum(m.mean_error_px for m in result.measurements.values()) / len(GRID_LABELS), 6
            ),
            "mean_error_deg": round(
                sum(m.mean_error_deg for m in result.measurements.values()) / len(GRID_LABELS), 6
            ),
        },
        "mean_confidence": round(
            sum(rec.confidence for rec in result.trace) / max(1, len(result.trace)), 6
        ),
    }
    report_path = out_dir / "report.json"
    report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    written.append(report_path)

    svg_path = out_dir / "error_by_target.svg"
    error_bar_chart_svg(
        svg_path,
        [label for label in GRID_LABELS],
        [result.measurements[label].mean_error_deg for label in GRID_LABELS],
        [result.measurements[label].mean_error_px for label in GRID_LABELS],
    )
    written.append(svg_path)
    return written
