from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from foveagaze.errors import DecodeFailure, DimensionMismatch, EmptySequence
from foveagaze.ingest import load_frames, timestamp_ms


def write_png(path: Path, width: int = 8, height: int = 6, value: int = 128) -> None:
    pixels = np.full((height, width, 3), value, dtype=np.uint8)
    Image.fromarray(pixels).save(path)


def test_three_frames_at_30hz_get_expected_timestamps(tmp_path):
    for i in range(3):
        write_png(tmp_path / f"f{i:03d}.png", value=i)
    seq = load_frames(tmp_path, frame_rate_hz=30.0)
    assert len(seq) == 3
    assert [f.timestamp_ms for f in seq] == [0.0, 33.33, 66.67]
    assert [f.index for f in seq] == [0, 1, 2]


def test_filenames_sort_by_numeric_value_not_lexicographically(tmp_path):
    write_png(tmp_path / "frame_10.png", value=10)
    write_png(tmp_path / "frame_2.png", value=2)
    write_png(tmp_path / "frame_9.png", value=9)
    seq = load_frames(tmp_path)
    assert [int(f.pixels[0, 0, 0]) for f in seq] == [2, 9, 10]


def test_names_without_digits_sort_after_numbered_ones(tmp_path):
    write_png(tmp_path / "cover.png", value=99)
    write_png(tmp_path / "f1.png", value=1)
    seq = load_frames(tmp_path)
    assert [int(f.pixels[0, 0, 0]) for f in seq] == [1, 99]


def test_empty_directory_raises(tmp_path):
    with pytest.raises(EmptySequence):
        load_frames(tmp_path)


def test_pattern_with_no_matches_raises(tmp_path):
    write_png(tmp_path / "f0.png")
    with pytest.raises(EmptySequence):
        load_frames(tmp_path, pattern="*.bmp")


def test_mixed_dimensions_raise_and_name_the_file(tmp_path):
    write_png(tmp_path / "f0.png", width=8, height=6)
    write_png(tmp_path / "f1.png", width=4, height=6)
    with pytest.raises(DimensionMismatch) as excinfo:
        load_frames(tmp_path)
    assert "f1.png" in str(excinfo.value)
    assert excinfo.value.expected == (8, 6)
    assert excinfo.value.got == (4, 6)


def test_undecodable_file_raises_decode_failure(tmp_path):
    (tmp_path / "f0.png").write_bytes(b"not a png at all")
    with pytest.raises(DecodeFailure) as excinfo:
        load_frames(tmp_path)
    assert "f0.png" in excinfo.value.path


def test_loading_is_deterministic(tmp_path):
    rng = np.random.default_rng(7)
    for i in range(4):
        pixels = rng.integers(0, 256, size=(6, 8, 3), dtype=np.uint8)
        Image.fromarray(pixels).save(tmp_path / f"f{i}.png")
    a = load_frames(tmp_path)
    b = load_frames(tmp_path)
    assert a.paths == b.paths
    for fa, fb in zip(a, b):
        assert np.array_equal(fa.pixels, fb.pixels)
        assert fa.timestamp_ms == fb.timestamp_ms


@pytest.mark.parametrize("rate", [24.0, 30.0, 59.94])
def test_consecutive_timestamp_deltas_match_frame_rate(tmp_path, rate):
    for i in range(6):
        write_png(tmp_path / f"f{i}.png")
    seq = load_frames(tmp_path, frame_rate_hz=rate)
    deltas = [b.timestamp_ms - a.timestamp_ms for a, b in zip(seq.frames, seq.frames[1:])]
    for d in deltas:
        assert abs(d - 1000.0 / rate) <= 0.01


def test_timestamp_helper_rounds_to_two_decimals():
    assert timestamp_ms(1, 30.0) == 33.33
    assert timestamp_ms(2, 30.0) == 66.67
    assert timestamp_ms(0, 30.0) == 0.0


def test_frame_size_and_sequence_accessors(tmp_path):
    write_png(tmp_path / "f0.png", width=8, height=6)
    seq = load_frames(tmp_path)
    assert seq.frame_size_px == (8, 6)
    assert seq[0].size_px == (8, 6)
    assert seq.source_dir == str(tmp_path)
