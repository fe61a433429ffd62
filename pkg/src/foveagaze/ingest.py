"""Load screen-recording frame dumps into memory.

Recordings arrive as directories of numbered still images (PNG, optionally
BMP).  Filenames are ordered by the first unsigned integer they contain, so
``frame_2.png`` sorts before ``frame_10.png`` regardless of zero padding.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeFailure, DimensionMismatch, EmptySequence

_INT_RUN = re.compile(r"\d+")


def _order_key(path: Path) -> tuple[int, int, str]:
    """Sort key: first integer run in the name, then the name itself.

    Files with no digits sort after numbered ones, lexicographically.
    """
    m = _INT_RUN.search(path.name)
    if m is None:
        return (1, 0, path.name)
    return (0, int(m.group()), path.name)


@dataclass(frozen=True)
class Frame:
    """One decoded video frame.

    index is the 0-based position in the sorted sequence, not whatever
    number appeared in the filename.  pixels is an H x W x 3 uint8 RGB
    array.
    """

    index: int
    timestamp_ms: float
    pixels: np.ndarray

    @property
    def size_px(self) -> tuple[int, int]:
        """(width, height) of the frame."""
        h, w = self.pixels.shape[:2]
        return (w, h)


@dataclass(frozen=True)
class FrameSequence:
    """An ordered run of equally sized frames from one recording."""

    frames: list[Frame]
    frame_rate_hz: float
    source_dir: str = ""
    paths: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)

    def __getitem__(self, i: int) -> Frame:
        return self.frames[i]

    @property
    def frame_size_px(self) -> tuple[int, int]:
        return self.frames[0].size_px


def timestamp_ms(index: int, frame_rate_hz: float) -> float:
    """Timestamp of frame ``index`` in milliseconds, rounded to 2 decimals."""
    return round(index * 1000.0 / frame_rate_hz, 2)


def _decode(path: Path) -> np.ndarray:
    try:
        with Image.open(path) as im:
            return np.asarray(im.convert("RGB"), dtype=np.uint8)
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise DecodeFailure(str(path), str(exc)) from exc


def load_frames(
    directory: str | Path,
    pattern: str = "*.png",
    frame_rate_hz: float = 30.0,
) -> FrameSequence:
    """Load every frame matching ``pattern`` under ``directory``.

    Frames are sorted by the first unsigned integer in their filename and
    assigned synthetic timestamps at the given frame rate.  All frames must
    share the dimensions of the first one.

    Raises EmptySequence, DecodeFailure, or DimensionMismatch.
    """
    directory = Path(directory)
    paths = sorted((p for p in directory.glob(pattern) if p.is_file()), key=_order_key)
    if not paths:
        raise EmptySequence(f"no files matching {pattern!r} in {directory}")

    frames: list[Frame] = []
    expected_hw: tuple[int, int] | None = None
    for i, path in enumerate(paths):
        pixels = _decode(path)
        hw = pixels.shape[:2]
        if expected_hw is None:
            expected_hw = hw
        elif hw != expected_hw:
            raise DimensionMismatch(
                str(path),
                expected=(expected_hw[1], expected_hw[0]),
                got=(hw[1], hw[0]),
            )
        frames.append(Frame(index=i, timestamp_ms=timestamp_ms(i, frame_rate_hz), pixels=pixels))

    return FrameSequence(
        frames=frames,
        frame_rate_hz=frame_rate_hz,
        source_dir=str(directory),
        paths=[str(p) for p in paths],
    )
