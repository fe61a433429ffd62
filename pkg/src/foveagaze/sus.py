"""System Usability Scale scoring.

Raw questionnaire answers are 1-5 Likert responses to ten items.  Each item
contributes 0-4 points: odd-numbered items score response - 1, even-numbered
items score 5 - response.  Items 4 and 10 form the learnability subscale;
the other eight form usability.  All three scores are scaled to 0-100.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, EmptyInput, OutOfRangeItem

N_ITEMS = 10
LEARNABILITY_ITEMS = (4, 10)  # 1-based item numbers
_USABILITY_IDX = tuple(i for i in range(N_ITEMS) if (i + 1) not in LEARNABILITY_ITEMS)
_LEARNABILITY_IDX = tuple(i - 1 for i in LEARNABILITY_ITEMS)


@dataclass(frozen=True)
class SusResponse:
    """One participant's questionnaire, stored as item contributions (0-4)."""

    participant: str
    contributions: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.contributions) != N_ITEMS:
            raise OutOfRangeItem(len(self.contributions), self.contributions, f"{N_ITEMS} items")
        for i, c in enumerate(self.contributions, start=1):
            if not isinstance(c, int) or isinstance(c, bool) or not 0 <= c <= 4:
                raise OutOfRangeItem(i, c, "contribution range 0..4")

    @classmethod
    def from_likert(cls, participant: str, responses: Sequence[int]) -> "SusResponse":
        """Build from raw 1-5 Likert responses, applying the odd/even flip."""
        if len(responses) != N_ITEMS:
            raise OutOfRangeItem(len(responses), tuple(responses), f"{N_ITEMS} items")
        contributions = []
        for i, r in enumerate(responses, start=1):
            if not isinstance(r, int) or isinstance(r, bool) or not 1 <= r <= 5:
                raise OutOfRangeItem(i, r, "Likert range 1..5")
            contributions.append(r - 1 if i % 2 == 1 else 5 - r)
        return cls(participant=participant, contributions=tuple(contributions))

    def to_likert(self) -> tuple[int, ...]:
        """Raw responses that would produce these contributions."""
        return tuple(
            c + 1 if i % 2 == 1 else 5 - c
            for i, c in enumerate(self.contributions, start=1)
        )


@dataclass(frozen=True)
class SusScores:
    """Usability, learnability, and overall scores on the 0-100 scale."""

    usable: float
    learnable: float
    overall: float


def score_sus(response: SusResponse) -> SusScores:
    """Score one response.

    usable scales the eight non-learnability contributions by 100/32,
    learnable scales items 4 and 10 by 100/8, and overall is 2.5 times the
    total contribution, so overall = 0.8 * usable + 0.2 * learnable.
    """
    c = response.contributions
    usable = 100.0 * sum(c[i] for i in _USABILITY_IDX) / 32.0
    learnable = 100.0 * sum(c[i] for i in _LEARNABILITY_IDX) / 8.0
    overall = 2.5 * sum(c)
    return SusScores(usable=usable, learnable=learnable, overall=overall)


@dataclass(frozen=True)
class SusSummary:
    n: int
    item_means: tuple[float, ...]
    item_sds: tuple[float, ...]
    usable_mean: float
    usable_sd: float
    learnable_mean: float
    learnable_sd: float
    overall_mean: float
    overall_sd: float
    insufficient_n: bool


def sus_summary(responses: Iterable[SusResponse], ddof: int = 0) -> SusSummary:
    """Aggregate item and score statistics over a set of responses.

    SDs default to the population convention (ddof=0).  A single response
    yields zero SDs and sets insufficient_n.

    Raises EmptyInput when no responses are given.
    """
    responses = list(responses)
    if not responses:
        raise EmptyInput("summary needs at least one response")

    items = np.array([r.contributions for r in responses], dtype=np.float64)
    scored = [score_sus(r) for r in responses]
    usable = np.array([s.usable for s in scored])
    learnable = np.array([s.learnable for s in scored])
    overall = np.array([s.overall for s in scored])

    n = len(responses)
    insufficient = n < 2

    def sd(a: np.ndarray) -> float:
        if insufficient:
            return 0.0
        return float(a.std(ddof=ddof))

    return SusSummary(
        n=n,
        item_means=tuple(float(v) for v in items.mean(axis=0)),
        item_sds=tuple(sd(items[:, j]) for j in range(N_ITEMS)),
        usable_mean=float(usable.mean()),
        usable_sd=sd(usable),
        learnable_mean=float(learnable.mean()),
        learnable_sd=sd(learnable),
        overall_mean=float(overall.mean()),
        overall_sd=sd(overall),
        insufficient_n=insufficient,
    )


_ENCODINGS = ("likert", "contribution")
_CSV_FIELDS = ["participant"] + [f"i{k}" for k in range(1, N_ITEMS + 1)] + ["encoding"]


def read_sus_csv(path: str | Path) -> list[SusResponse]:
    """Read responses from a CSV with columns participant,i1..i10,encoding.

    encoding is "likert" (raw 1-5 answers) or "contribution" (0-4 points)
    and may vary per row.  Any malformed row raises ConfigError naming the
    row number (header = row 1).
    """
    path = Path(path)
    responses: list[SusResponse] = []
    try:
        fh = path.open(newline="")
    except OSError as exc:
        raise ConfigError(f"cannot read responses {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in _CSV_FIELDS if c not in header]
        if missing:
            raise ConfigError(f"{path}: missing columns: {', '.join(missing)}")
        for row_no, row in enumerate(reader, start=2):
            try:
                participant = (row["participant"] or "").strip()
                if not participant:
                    raise ValueError("empty participant id")
                encoding = (row["encoding"] or "").strip().lower()
                if encoding not in _ENCODINGS:
                    raise ValueError(f"encoding must be one of {_ENCODINGS}")
                values = [int((row[f"i{k}"] or "").strip()) for k in range(1, N_ITEMS + 1)]
                if encoding == "likert":
                    responses.append(SusResponse.from_likert(participant, values))
                else:
                    responses.append(SusResponse(participant, tuple(values)))
            except (ValueError, OutOfRangeItem) as exc:
                raise ConfigError(f"{path}: row {row_no}: {exc}") from exc
    if not responses:
        raise EmptyInput(f"{path}: no response rows")
    return responses


def write_scores_csv(path: str | Path, responses: Iterable[SusResponse]) -> None:
    """Write participant,usable,learnable,overall rows, scores at 2 decimals."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["participant", "usable", "learnable", "overall"])
        for r in responses:
            s = score_sus(r)
            writer.writerow(
                [r.participant, f"{s.usable:.2f}", f"{s.learnable:.2f}", f"{s.overall:.2f}"]
            )
