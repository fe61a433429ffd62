from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foveagaze.errors import ConfigError, EmptyInput, OutOfRangeItem
from foveagaze.sus import (
    SusResponse,
    read_sus_csv,
    score_sus,
    sus_summary,
    write_scores_csv,
)

contributions_st = st.lists(st.integers(0, 4), min_size=10, max_size=10).map(tuple)
likert_st = st.lists(st.integers(1, 5), min_size=10, max_size=10).map(tuple)


def test_worked_example_scores():
    s = score_sus(SusResponse("p01", (3, 3, 3, 4, 3, 1, 3, 3, 3, 4)))
    assert s.usable == pytest.approx(68.75)
    assert s.learnable == pytest.approx(100.0)
    assert s.overall == pytest.approx(75.0)


def test_second_worked_example():
    s = score_sus(SusResponse("p05", (2, 3, 3, 2, 4, 3, 2, 3, 2, 1)))
    assert s.usable == pytest.approx(68.75)
    assert s.learnable == pytest.approx(37.5)
    assert s.overall == pytest.approx(62.5)


def test_boundary_scores():
    zero = score_sus(SusResponse("lo", (0,) * 10))
    assert (zero.usable, zero.learnable, zero.overall) == (0.0, 0.0, 0.0)
    top = score_sus(SusResponse("hi", (4,) * 10))
    assert (top.usable, top.learnable, top.overall) == (100.0, 100.0, 100.0)


@given(contributions_st)
@settings(max_examples=80)
def test_overall_is_weighted_subscale_mean(contributions):
    s = score_sus(SusResponse("p", contributions))
    assert s.overall == pytest.approx(0.8 * s.usable + 0.2 * s.learnable)
    assert 0.0 <= s.usable <= 100.0
    assert 0.0 <= s.learnable <= 100.0


@given(contributions_st, st.integers(0, 9))
@settings(max_examples=80)
def test_bumping_an_item_strictly_raises_overall(contributions, item):
    if contributions[item] == 4:
        contributions = tuple(
            c - 1 if i == item else c for i, c in enumerate(contributions)
        )
    bumped = tuple(c + 1 if i == item else c for i, c in enumerate(contributions))
    lo = score_sus(SusResponse("p", contributions))
    hi = score_sus(SusResponse("p", bumped))
    assert hi.overall > lo.overall
    if (item + 1) in (4, 10):
        assert hi.learnable > lo.learnable
        assert hi.usable == lo.usable
    else:
        assert hi.usable > lo.usable
        assert hi.learnable == lo.learnable


def test_likert_flip():
    resp = SusResponse.from_likert("p", (5, 1, 5, 1, 5, 1, 5, 1, 5, 1))
    assert resp.contributions == (4,) * 10
    resp = SusResponse.from_likert("p", (1, 5, 1, 5, 1, 5, 1, 5, 1, 5))
    assert resp.contributions == (0,) * 10


@given(contributions_st)
@settings(max_examples=60)
def test_likert_round_trip(contributions):
    resp = SusResponse("p", contributions)
    again = SusResponse.from_likert("p", resp.to_likert())
    assert again.contributions == contributions


@given(likert_st)
@settings(max_examples=60)
def test_raw_round_trip(likert):
    resp = SusResponse.from_likert("p", likert)
    assert resp.to_likert() == likert


def test_out_of_range_items_rejected():
    with pytest.raises(OutOfRangeItem):
        SusResponse("p", (7, 0, 0, 0, 0, 0, 0, 0, 0, 0))
    with pytest.raises(OutOfRangeItem):
        SusResponse("p", (0, -1, 0, 0, 0, 0, 0, 0, 0, 0))
    with pytest.raises(OutOfRangeItem):
        SusResponse("p", (1, 2, 3))
    with pytest.raises(OutOfRangeItem):
        SusResponse.from_likert("p", (0, 3, 3, 3, 3, 3, 3, 3, 3, 3))
    with pytest.raises(OutOfRangeItem):
        SusResponse.from_likert("p", (6, 3, 3, 3, 3, 3, 3, 3, 3, 3))


def test_summary_of_two_known_responses():
    a = SusResponse("a", (3, 3, 3, 4, 3, 1, 3, 3, 3, 4))
    b = SusResponse("b", (2, 3, 3, 2, 4, 3, 2, 3, 2, 1))
    summary = sus_summary([a, b])
    assert summary.n == 2
    assert not summary.insufficient_n
    assert summary.overall_mean == pytest.approx((75.0 + 62.5) / 2)
    assert summary.overall_sd == pytest.approx(6.25)  # population SD of {75, 62.5}
    assert summary.item_means[0] == pytest.approx(2.5)
    assert summary.learnable_mean == pytest.approx((100.0 + 37.5) / 2)


def test_single_response_flags_insufficient_n():
    summary = sus_summary([SusResponse("solo", (2,) * 10)])
    assert summary.n == 1
    assert summary.insufficient_n
    assert summary.overall_sd == 0.0
    assert summary.usable_sd == 0.0
    assert all(sd == 0.0 for sd in summary.item_sds)


def test_sample_sd_option():
    a = SusResponse("a", (4,) * 10)
    b = SusResponse("b", (0,) * 10)
    pop = sus_summary([a, b])
    sample = sus_summary([a, b], ddof=1)
    assert sample.overall_sd == pytest.approx(math.sqrt(2.0) * pop.overall_sd)


def test_empty_summary_rejected():
    with pytest.raises(EmptyInput):
        sus_summary([])


CSV_HEADER = "participant,i1,i2,i3,i4,i5,i6,i7,i8,i9,i10,encoding\n"


def test_read_csv_with_mixed_encodings(tmp_path):
    # Same answers expressed both ways must decode identically.
    path = tmp_path / "answers.csv"
    path.write_text(
        CSV_HEADER
        + "p01,4,2,4,3,3,2,4,2,4,2,likert\n"
        + "p02,3,3,3,2,2,3,3,3,3,3,contribution\n"
    )
    likert_row, contrib_row = read_sus_csv(path)
    assert likert_row.contributions == (3, 3, 3, 2, 2, 3, 3, 3, 3, 3)
    assert likert_row.contributions == contrib_row.contributions
    assert [r.participant for r in (likert_row, contrib_row)] == ["p01", "p02"]


def test_read_csv_names_the_bad_row(tmp_path):
    path = tmp_path / "answers.csv"
    path.write_text(
        CSV_HEADER
        + "p01,3,3,3,4,3,1,3,3,3,4,contribution\n"
        + "p02,3,3,3,4,3,7,3,3,3,4,contribution\n"
    )
    with pytest.raises(ConfigError, match="row 3"):
        read_sus_csv(path)


def test_read_csv_rejects_missing_columns(tmp_path):
    path = tmp_path / "answers.csv"
    path.write_text("participant,i1,encoding\np01,3,likert\n")
    with pytest.raises(ConfigError, match="missing columns"):
        read_sus_csv(path)


def test_read_csv_rejects_unknown_encoding(tmp_path):
    path = tmp_path / "answers.csv"
    path.write_text(CSV_HEADER + "p01,3,3,3,4,3,1,3,3,3,4,percent\n")
    with pytest.raises(ConfigError, match="row 2"):
        read_sus_csv(path)


def test_read_csv_without_rows_is_empty(tmp_path):
    path = tmp_path / "answers.csv"
    path.write_text(CSV_HEADER)
    with pytest.raises(EmptyInput):
        read_sus_csv(path)


def test_write_scores_round_trip(tmp_path):
    out = tmp_path / "scores.csv"
    write_scores_csv(
        out,
        [
            SusResponse("p01", (3, 3, 3, 4, 3, 1, 3, 3, 3, 4)),
            SusResponse("p02", (2, 3, 3, 2, 4, 3, 2, 3, 2, 1)),
        ],
    )
    lines = out.read_text().splitlines()
    assert lines[0] == "participant,usable,learnable,overall"
    assert lines[1] == "p01,68.75,100.00,75.00"
    assert lines[2] == "p02,68.75,37.50,62.50"
