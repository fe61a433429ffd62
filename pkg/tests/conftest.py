"""Shared fixtures.

The heavyweight pieces - a full-resolution synthetic session and its jobs=1
analysis - are built once per test run and shared by the CLI and acceptance
tests.  Everything else builds its own small inputs.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from foveagaze.cli import main
from foveagaze.ingest import Frame
from foveagaze.synth import PanelSpec


def small_panel_spec(**overrides) -> PanelSpec:
    """A 480x360 panel whose grid fits the frame; cheap to render and blur."""
    params = dict(
        width_px=480,
        height_px=360,
        grid_center_px=(240.0, 180.0),
        grid_spacing_px=(150.0, 100.0),
        target_radius_px=12.0,
    )
    params.update(overrides)
    return PanelSpec(**params)


def checker_frame(width_px: int, height_px: int, checker_px: int = 16) -> Frame:
    """Black/white checkerboard frame with no targets."""
    xs = np.arange(width_px) // checker_px
    ys = np.arange(height_px) // checker_px
    parity = ((xs[None, :] + ys[:, None]) % 2).astype(np.uint8) * 255
    pixels = np.repeat(parity[:, :, None], 3, axis=2)
    return Frame(index=0, timestamp_ms=0.0, pixels=pixels)


def write_analysis_config(path: Path, frames_dir: Path, output_dir: Path, **extra) -> Path:
    config = {
        "frames_dir": str(frames_dir),
        "output_dir": str(output_dir),
        "ruler": {
            "p1_px": [460.0, 1000.0],
            "p2_px": [1460.0, 1000.0],
            "length_cm": 50.0,
        },
    }
    config.update(extra)
    path.write_text(json.dumps(config, indent=2))
    return path


@pytest.fixture(scope="session")
def default_session(tmp_path_factory) -> Path:
    """The default synthetic session (90 frames at 1920x1080), via the CLI."""
    out = tmp_path_factory.mktemp("session") / "frames"
    rc = main(["synth", "--out", str(out)])
    assert rc == 0
    return out


@pytest.fixture(scope="session")
def analyzed_session(tmp_path_factory, default_session) -> Path:
    """CLI analysis of the default session with --jobs 1; returns the output dir."""
    work = tmp_path_factory.mktemp("analysis")
    out = work / "out"
    config = write_analysis_config(work / "analyze.json", default_session, out)
    rc = main(["analyze", "--config", str(config), "--jobs", "1"])
    assert rc == 0
    return out
