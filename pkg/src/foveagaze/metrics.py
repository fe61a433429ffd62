"""Fixation accuracy metrics and the statistics used to compare targets.

Covers: picking the steadiest fixation window out of a gaze trace, building
the per-participant x per-target accuracy table, a one-way repeated-measures
ANOVA (with the conservative lower-bound correction), Bonferroni-corrected
pairwise post-hocs, and Pearson correlation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy import special

from .errors import (
    DegenerateVariance,
    EmptyInput,
    IncompleteRow,
    LengthMismatch,
    TraceTooShort,
    ZeroVariance,
)
from .geometry import ViewingGeometry
from .targets import GRID_LABELS

DEFAULT_WINDOW_FRAMES = 3


@dataclass(frozen=True)
class TraceRecord:
    """Gaze estimate for one frame."""

    frame: int
    timestamp_ms: float
    gaze_px: tuple[float, float]
    confidence: float = 1.0


@dataclass(frozen=True)
class GazeTrace:
    """Per-frame gaze estimates for one recording, in frame order."""

    records: list[TraceRecord]
    source: str = ""

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


@dataclass(frozen=True)
class FixationMeasurement:
    """Best fixation window for one target."""

    target: str
    window_start: int
    window_len: int
    mean_error_px: float
    mean_error_deg: float
    mean_gaze_px: tuple[float, float]


def select_best_window(
    trace: GazeTrace,
    target_px: tuple[float, float],
    geom: ViewingGeometry,
    k: int = DEFAULT_WINDOW_FRAMES,
    frame_range: tuple[int, int] | None = None,
    label: str = "",
) -> FixationMeasurement:
    """Find the k consecutive frames whose mean gaze error is smallest.

    Only windows of k records with consecutive frame indices count; when
    frame_range = (first, last) is given, every frame of the window must lie
    inside it (bounds inclusive).  Ties go to the earliest window.  The
    window's mean pixel error is minimised; its mean angular error is
    reported alongside.

    Raises TraceTooShort when no window of length k exists.
    """
    if k < 1:
        raise ValueError(f"window length must be >= 1, got {k}")

    records = sorted(trace.records, key=lambda rec: rec.frame)
    if frame_range is not None:
        lo, hi = frame_range
        records = [rec for rec in records if lo <= rec.frame <= hi]

    tx, ty = target_px
    best: tuple[float, int] | None = None
    best_window: list[TraceRecord] | None = None
    for start in range(len(records) - k + 1):
        window = records[start : start + k]
        if window[-1].frame - window[0].frame != k - 1:
            continue
        err = 0.0
        for rec in window:
            err += math.hypot(rec.gaze_px[0] - tx, rec.gaze_px[1] - ty)
        err /= k
        if best is None or err < best[0]:
            best = (err, start)
            best_window = window

    if best is None or best_window is None:
        raise TraceTooShort(len(records), k)

    mean_deg = sum(geom.angular_error(rec.gaze_px, target_px) for rec in best_window) / k
    gx = sum(rec.gaze_px[0] for rec in best_window) / k
    gy = sum(rec.gaze_px[1] for rec in best_window) / k
    return FixationMeasurement(
        target=label,
        window_start=best_window[0].frame,
        window_len=k,
        mean_error_px=best[0],
        mean_error_deg=mean_deg,
        mean_gaze_px=(gx, gy),
    )


@dataclass(frozen=True)
class ColumnStats:
    mean_px: float
    sd_px: float
    mean_deg: float
    sd_deg: float


@dataclass(frozen=True)
class AccuracyTable:
    """Participants x targets error matrix with summary rows.

    Summary SDs use the population (n denominator) convention.
    """

    participants: list[str]
    labels: list[str]
    px: np.ndarray
    deg: np.ndarray
    columns: dict[str, ColumnStats] = field(default_factory=dict)
    overall_mean_px: float = 0.0
    overall_mean_deg: float = 0.0
    min_px: float = 0.0
    max_px: float = 0.0
    min_deg: float = 0.0
    max_deg: float = 0.0


def accuracy_table(
    rows: Mapping[str, Mapping[str, tuple[float, float]]],
    labels: Sequence[str] = GRID_LABELS,
    ddof: int = 0,
) -> AccuracyTable:
    """Assemble the per-participant accuracy table.

    rows maps participant -> target label -> (error_px, error_deg).  Every
    participant must cover every label, else IncompleteRow.  Column and
    overall SDs default to the population convention (ddof=0); pass ddof=1
    for sample SDs.

    Raises EmptyInput or IncompleteRow.
    """
    if not rows:
        raise EmptyInput("accuracy table needs at least one participant row")
    labels = list(labels)

    participants = list(rows.keys())
    px = np.empty((len(participants), len(labels)), dtype=np.float64)
    deg = np.empty_like(px)
    for i, participant in enumerate(participants):
        row = rows[participant]
        missing = [lab for lab in labels if lab not in row]
        if missing:
            raise IncompleteRow(participant, missing)
        for j, lab in enumerate(labels):
            px[i, j], deg[i, j] = row[lab]

    columns = {
        lab: ColumnStats(
            mean_px=float(px[:, j].mean()),
            sd_px=float(px[:, j].std(ddof=ddof)),
            mean_deg=float(deg[:, j].mean()),
            sd_deg=float(deg[:, j].std(ddof=ddof)),
        )
        for j, lab in enumerate(labels)
    }
    return AccuracyTable(
        participants=participants,
        labels=labels,
        px=px,
        deg=deg,
        columns=columns,
        overall_mean_px=float(px.mean()),
        overall_mean_deg=float(deg.mean()),
        min_px=float(px.min()),
        max_px=float(px.max()),
        min_deg=float(deg.min()),
        max_deg=float(deg.max()),
    )


@dataclass(frozen=True)
class AnovaResult:
    F: float
    df1: float
    df2: float
    p: float
    ss_target: float
    ss_subject: float
    ss_error: float
    correction: str


def rm_anova(values: np.ndarray, correction: str = "none") -> AnovaResult:
    """One-way repeated-measures ANOVA over an (n subjects x k levels) matrix.

    correction is "none" or "lower_bound".  The lower-bound correction
    multiplies both df by epsilon = 1/(k-1) - the conservative floor of the
    sphericity epsilon - leaving F itself unchanged.

    Raises DegenerateVariance when the error term is (numerically) zero.
    """
    if correction not in ("none", "lower_bound"):
        raise ValueError(f"unknown correction {correction!r}")
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2:
        raise ValueError("values must be a 2-D (subjects x levels) matrix")
    n, k = values.shape
    if n < 2 or k < 2:
        raise ValueError(f"need at least 2 subjects and 2 levels, got {n} x {k}")

    grand = values.mean()
    ss_total = float(((values - grand) ** 2).sum())
    ss_target = float(n * ((values.mean(axis=0) - grand) ** 2).sum())
    ss_subject = float(k * ((values.mean(axis=1) - grand) ** 2).sum())
    ss_error = ss_total - ss_target - ss_subject
    if ss_error < 0.0:
        ss_error = 0.0 if ss_error > -1e-9 * max(ss_total, 1.0) else ss_error
    if ss_total <= 0.0 or ss_error <= 1e-12 * ss_total:
        raise DegenerateVariance("repeated-measures error term is zero")

    df1 = float(k - 1)
    df2 = float((k - 1) * (n - 1))
    ms_target = ss_target / df1
    ms_error = ss_error / df2
    f_stat = ms_target / ms_error

    if correction == "lower_bound":
        eps = 1.0 / (k - 1)
        df1 *= eps
        df2 *= eps

    p = float(special.fdtrc(df1, df2, f_stat))
    return AnovaResult(
        F=f_stat,
        df1=df1,
        df2=df2,
        p=p,
        ss_target=ss_target,
        ss_subject=ss_subject,
        ss_error=ss_error,
        correction=correction,
    )


@dataclass(frozen=True)
class PairwiseComparison:
    pair: tuple[str, str]
    mean_diff: float
    t: float
    df: int
    p_raw: float
    p_bonferroni: float
    significant: bool


def _paired_t(a: np.ndarray, b: np.ndarray) -> tuple[float, float, int]:
    d = a - b
    n = d.size
    sd = float(d.std(ddof=1))
    scale = float(np.abs(d).max())
    if sd <= 1e-12 * max(scale, 1.0):
        raise DegenerateVariance("paired differences have zero variance")
    t = float(d.mean() / (sd / math.sqrt(n)))
    p = 2.0 * float(special.stdtr(n - 1, -abs(t)))
    return t, p, n - 1


def posthoc_pairwise(
    values: np.ndarray,
    labels: Sequence[str],
    alpha: float = 0.05,
) -> list[PairwiseComparison]:
    """Bonferroni-corrected paired t-tests between every pair of columns.

    The correction multiplies each raw p by the number of comparisons,
    k(k-1)/2, capping at 1.  Pairs are emitted in (i, j) column order with
    i < j and mean_diff = mean(column_i - column_j).

    Raises DegenerateVariance when some pair has identical columns.
    """
    values = np.asarray(values, dtype=np.float64)
    n, k = values.shape
    if len(labels) != k:
        raise LengthMismatch(len(labels), k)
    if n < 2:
        raise ValueError(f"need at least 2 subjects, got {n}")

    m = k * (k - 1) // 2
    out: list[PairwiseComparison] = []
    for i in range(k):
        for j in range(i + 1, k):
            try:
                t, p_raw, df = _paired_t(values[:, i], values[:, j])
            except DegenerateVariance as exc:
                raise DegenerateVariance(
                    f"columns {labels[i]!r} and {labels[j]!r}: {exc}"
                ) from exc
            p_bonf = min(1.0, m * p_raw)
            out.append(
                PairwiseComparison(
                    pair=(str(labels[i]), str(labels[j])),
                    mean_diff=float((values[:, i] - values[:, j]).mean()),
                    t=t,
                    df=df,
                    p_raw=p_raw,
                    p_bonferroni=p_bonf,
                    significant=p_bonf < alpha,
                )
            )
    return out


@dataclass(frozen=True)
class PearsonResult:
    r: float
    p: float
    n: int


def pearson(x: Sequence[float], y: Sequence[float]) -> PearsonResult:
    """Pearson correlation with a two-sided t-distribution p-value.

    Raises LengthMismatch for unequal inputs and ZeroVariance when either
    series is constant.  Needs at least 3 pairs.
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.size != ya.size:
        raise LengthMismatch(xa.size, ya.size)
    n = xa.size
    if n < 3:
        raise ValueError(f"correlation needs at least 3 pairs, got {n}")

    dx = xa - xa.mean()
    dy = ya - ya.mean()
    sx = float(np.sqrt((dx * dx).sum()))
    sy = float(np.sqrt((dy * dy).sum()))
    if sx == 0.0 or sy == 0.0:
        raise ZeroVariance("correlation input has a constant series")

    r = float((dx * dy).sum() / (sx * sy))
    r = max(-1.0, min(1.0, r))
    if 1.0 - r * r <= 0.0:
        return PearsonResult(r=r, p=0.0, n=n)
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    p = 2.0 * float(special.stdtr(n - 2, -abs(t)))
    return PearsonResult(r=r, p=p, n=n)
