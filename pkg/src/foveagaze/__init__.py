"""Gaze-accuracy analysis for screen recordings of foveated-rendered HMDs.

The toolkit estimates where a wearer was looking from the foveation pattern
alone: the sharp region of each frame is segmented from a Laplacian-variance
sharpness map, red fixation targets are located with a circular Hough
transform, pixel errors are converted to centimetres and degrees of visual
angle, and the usual accuracy statistics (repeated-measures ANOVA, pairwise
post-hocs, correlations with SUS questionnaire scores) are computed on top.
"""

from .errors import (
    AmbiguousTargets,
    ConfigError,
    DecodeFailure,
    DegenerateGrid,
    DegenerateVariance,
    DimensionMismatch,
    EmptyInput,
    EmptySequence,
    FoveaGazeError,
    FrameTooSmall,
    IncompleteRow,
    IoFailure,
    LengthMismatch,
    MissingTargets,
    NegativeDistance,
    NoFoveaBoundary,
    NonPositiveLength,
    NoTexture,
    OutOfRangeItem,
    RegionTooSmall,
    SpecOverflow,
    TraceTooShort,
    ZeroBaseline,
    ZeroVariance,
)
from .fovea import (
    FoveaEstimate,
    SharpnessMap,
    detect_fovea,
    laplacian,
    luminance,
    otsu_threshold,
    sharpness_map,
)
from .geometry import ViewingGeometry, fov_extent
from .ingest import Frame, FrameSequence, load_frames, timestamp_ms
from .metrics import (
    AccuracyTable,
    AnovaResult,
    FixationMeasurement,
    GazeTrace,
    PairwiseComparison,
    PearsonResult,
    TraceRecord,
    accuracy_table,
    pearson,
    posthoc_pairwise,
    rm_anova,
    select_best_window,
)
from .pipeline import AnalysisResult, StageFailure, analyze_session, write_analysis_outputs
from .reproduce import ReproductionReport, run_reproduction
from .sus import (
    SusResponse,
    SusScores,
    SusSummary,
    read_sus_csv,
    score_sus,
    sus_summary,
    write_scores_csv,
)
from .synth import (
    DwellEntry,
    PanelSpec,
    RulerMark,
    SessionManifest,
    SessionScript,
    apply_foveation,
    default_session_script,
    gaussian_blur,
    generate_session,
    render_panel,
)
from .targets import (
    CircleCandidate,
    GRID_LABELS,
    ScaleCalibration,
    TargetLayout,
    assign_grid,
    calibrate_scale,
    detect_targets,
    hough_circles,
    red_mask,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousTargets",
    "ConfigError",
    "DecodeFailure",
    "DegenerateGrid",
    "DegenerateVariance",
    "DimensionMismatch",
    "EmptyInput",
    "EmptySequence",
    "FoveaGazeError",
    "FrameTooSmall",
    "IncompleteRow",
    "IoFailure",
    "LengthMismatch",
    "MissingTargets",
    "NegativeDistance",
    "NoFoveaBoundary",
    "NonPositiveLength",
    "NoTexture",
    "OutOfRangeItem",
    "RegionTooSmall",
    "SpecOverflow",
    "TraceTooShort",
    "ZeroBaseline",
    "ZeroVariance",
    "FoveaEstimate",
    "SharpnessMap",
    "detect_fovea",
    "laplacian",
    "luminance",
    "otsu_threshold",
    "sharpness_map",
    "ViewingGeometry",
    "fov_extent",
    "Frame",
    "FrameSequence",
    "load_frames",
    "timestamp_ms",
    "AccuracyTable",
    "AnovaResult",
    "FixationMeasurement",
    "GazeTrace",
    "PairwiseComparison",
    "PearsonResult",
    "TraceRecord",
    "accuracy_table",
    "pearson",
    "posthoc_pairwise",
    "rm_anova",
    "select_best_window",
    "AnalysisResult",
    "StageFailure",
    "analyze_session",
    "write_analysis_outputs",
    "ReproductionReport",
    "run_reproduction",
    "SusResponse",
    "SusScores",
    "SusSummary",
    "read_sus_csv",
    "score_sus",
    "sus_summary",
    "write_scores_csv",
    "DwellEntry",
    "PanelSpec",
    "RulerMark",
    "SessionManifest",
    "SessionScript",
    "apply_foveation",
    "default_session_script",
    "gaussian_blur",
    "generate_session",
    "render_panel",
    "CircleCandidate",
    "GRID_LABELS",
    "ScaleCalibration",
    "TargetLayout",
    "assign_grid",
    "calibrate_scale",
    "detect_targets",
    "hough_circles",
    "red_mask",
]
