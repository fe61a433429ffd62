"""Command-line interface.

Subcommands: analyze (full pipeline on a frame directory), reproduce
(recompute the bundled reference statistics), synth (generate a synthetic
session), sus (score questionnaire responses).

Exit codes: 0 success, 2 configuration or malformed input, 3 frame
ingestion failure, 4 detection failure (stage and frame named), 5
reproduction check out of tolerance, 6 synthesis I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import load_analysis_config, load_synth_config
from .errors import (
    ConfigError,
    DecodeFailure,
    DimensionMismatch,
    EmptyInput,
    EmptySequence,
    FoveaGazeError,
    IoFailure,
    SpecOverflow,
)
from .pipeline import StageFailure, analyze_session, write_analysis_outputs
from .reproduce import run_reproduction, write_report_json
from .sus import read_sus_csv, score_sus, sus_summary, write_scores_csv
from .synth import generate_session
from .targets import DISPLAY_NAMES, GRID_LABELS

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INGEST = 3
EXIT_DETECT = 4
EXIT_REPRODUCE = 5
EXIT_SYNTH_IO = 6


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="foveagaze",
        description="Gaze accuracy analysis for foveated-rendering screen recordings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="run the full pipeline on a frame directory")
    p_analyze.add_argument("--config", required=True, help="path to the analysis JSON config")
    p_analyze.add_argument(
        "--jobs", type=int, default=1, help="worker threads for per-frame stages (default 1)"
    )

    p_repro = sub.add_parser("reproduce", help="recompute the bundled reference statistics")
    p_repro.add_argument(
        "--data", default=None, help="directory with the reference CSVs (default: bundled copies)"
    )
    p_repro.add_argument(
        "--out",
        default=".",
        help="directory to write reproduction_report.json into (default: current directory)",
    )

    p_synth = sub.add_parser("synth", help="generate a synthetic foveated session")
    p_synth.add_argument("--config", default=None, help="path to the synthesis JSON config")
    p_synth.add_argument(
        "--out", default=None, help="output directory (overrides out_dir from the config)"
    )

    p_sus = sub.add_parser("sus", help="score SUS questionnaire responses")
    p_sus.add_argument("--input", required=True, help="CSV of questionnaire responses")
    p_sus.add_argument(
        "--out",
        default="sus_scores.csv",
        help="path to write the scores CSV (default: sus_scores.csv)",
    )

    return parser


def _cmd_analyze(args: argparse.Namespace) -> int:
    if args.jobs < 1:
        raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
    config = load_analysis_config(args.config)
    result = analyze_session(config, jobs=args.jobs)
    written = write_analysis_outputs(result, config.output_dir)

    print(f"frames analyzed: {result.n_frames} (sharpest: {result.sharpest_frame})")
    print(f"cm per pixel: {result.cm_per_px:.6f}")
    print(f"field of view: {result.fov_deg[0]:.2f} x {result.fov_deg[1]:.2f} deg")
    print(f"{'target':<14}{'window':>8}{'err px':>12}{'err deg':>10}")
    for label in GRID_LABELS:
        m = result.measurements[label]
        print(
            f"{DISPLAY_NAMES[label]:<14}{m.window_start:>8}"
            f"{m.mean_error_px:>12.2f}{m.mean_error_deg:>10.3f}"
        )
    mean_px = sum(m.mean_error_px for m in result.measurements.values()) / len(GRID_LABELS)
    mean_deg = sum(m.mean_error_deg for m in result.measurements.values()) / len(GRID_LABELS)
    print(f"{'mean':<14}{'':>8}{mean_px:>12.2f}{mean_deg:>10.3f}")
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_reproduce(args: argparse.Namespace) -> int:
    report = run_reproduction(args.data)
    for check in report.checks:
        tag = "PASS" if check.passed else "FAIL"
        print(f"[{tag}] {check.name}: expected {check.expected}; actual {check.actual}")
    print(
        f"{len(report.checks) - report.n_failed}/{len(report.checks)} checks passed"
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "reproduction_report.json"
    write_report_json(report, path)
    print(f"wrote {path}")
    return EXIT_OK if report.passed else EXIT_REPRODUCE


def _cmd_synth(args: argparse.Namespace) -> int:
    config = load_synth_config(args.config)
    out_dir = Path(args.out) if args.out else config.out_dir
    if out_dir is None:
        raise ConfigError("synth needs an output directory (--out or out_dir in the config)")
    manifest = generate_session(config.panel, config.script, out_dir)
    spec = manifest.spec
    script = manifest.script
    print(f"wrote {len(manifest.frame_paths)} frames to {manifest.out_dir}")
    print(f"truth table: {manifest.truth_path}")
    print(f"panel: {spec.width_px}x{spec.height_px}, checker {spec.checker_px} px")
    print(
        f"targets: r = {spec.target_radius_px} px, spacing {spec.grid_spacing_px[0]} x "
        f"{spec.grid_spacing_px[1]} px"
    )
    print(
        f"foveation: radius {script.fovea_radius_px} px, band {script.transition_band_px} px, "
        f"sigma {script.blur_sigma}, seed {script.seed}"
    )
    return EXIT_OK


def _cmd_sus(args: argparse.Namespace) -> int:
    responses = read_sus_csv(args.input)
    print(f"{'participant':<14}{'usable':>10}{'learnable':>12}{'overall':>10}")
    for r in responses:
        s = score_sus(r)
        print(f"{r.participant:<14}{s.usable:>10.2f}{s.learnable:>12.2f}{s.overall:>10.2f}")
    summary = sus_summary(responses)
    print(
        f"{'mean':<14}{summary.usable_mean:>10.2f}{summary.learnable_mean:>12.2f}"
        f"{summary.overall_mean:>10.2f}"
    )
    print(
        f"{'sd':<14}{summary.usable_sd:>10.2f}{summary.learnable_sd:>12.2f}"
        f"{summary.overall_sd:>10.2f}"
    )
    if summary.insufficient_n:
        print("note: single response; SDs reported as 0")
    write_scores_csv(args.out, responses)
    print(f"wrote {args.out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "reproduce":
            return _cmd_reproduce(args)
        if args.command == "synth":
            return _cmd_synth(args)
        if args.command == "sus":
            return _cmd_sus(args)
        parser.error(f"unknown command {args.command!r}")
        return EXIT_CONFIG
    except (ConfigError, EmptyInput, SpecOverflow) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (EmptySequence, DecodeFailure, DimensionMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except StageFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DETECT
    except IoFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SYNTH_IO
    except FoveaGazeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DETECT


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
