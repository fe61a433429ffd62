"""Exception hierarchy shared by all foveagaze modules.

Every error raised by the library derives from :class:`FoveaGazeError` so
callers can catch one base type at pipeline boundaries.  Errors carry the
minimal context needed to report the failure (offending path, frame index,
participant id, ...) as attributes.
"""

from __future__ import annotations


class FoveaGazeError(Exception):
    """Base class for all errors raised by this package."""


# --- frame ingestion ---------------------------------------------------------

class EmptySequence(FoveaGazeError):
    """No frame files matched the requested directory/pattern."""


class DecodeFailure(FoveaGazeError):
    """A frame file exists but could not be decoded as an image."""

    def __init__(self, path: str, reason: str = "") -> None:
        self.path = str(path)
        self.reason = reason
        msg = f"cannot decode frame file {self.path}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class DimensionMismatch(FoveaGazeError):
    """A frame's pixel dimensions differ from the first frame in the sequence."""

    def __init__(self, path: str, expected: tuple[int, int], got: tuple[int, int]) -> None:
        self.path = str(path)
        self.expected = expected
        self.got = got
        super().__init__(
            f"frame {self.path} is {got[0]}x{got[1]}, expected {expected[0]}x{expected[1]}"
        )


# --- sharpness / fovea detection ---------------------------------------------

class FrameTooSmall(FoveaGazeError):
    """Frame is smaller than one analysis window."""


class NoTexture(FoveaGazeError):
    """Sharpness map is identically zero; the frame carries no usable detail."""


class NoFoveaBoundary(FoveaGazeError):
    """Frame is sharp nearly everywhere; no blur boundary to segment."""


class RegionTooSmall(FoveaGazeError):
    """Largest sharp region is below the minimum size for a credible fovea."""


# --- target detection ---------------------------------------------------------

class MissingTargets(FoveaGazeError):
    """Fewer circle candidates than required passed the vote threshold."""

    def __init__(self, n_found: int, n_required: int = 9) -> None:
        self.n_found = n_found
        self.n_required = n_required
        super().__init__(f"found {n_found} of {n_required} required targets")


class AmbiguousTargets(FoveaGazeError):
    """Extra circle candidates are too close in strength to the accepted set."""

    def __init__(self, n_candidates: int, n_required: int = 9) -> None:
        self.n_candidates = n_candidates
        self.n_required = n_required
        super().__init__(
            f"{n_candidates} candidates compete for {n_required} target slots"
        )


class DegenerateGrid(FoveaGazeError):
    """Detected centers do not split into three rows of three."""


class ZeroBaseline(FoveaGazeError):
    """Scale calibration endpoints coincide."""


class NonPositiveLength(FoveaGazeError):
    """Scale calibration physical length must be positive."""


# --- viewing geometry ----------------------------------------------------------

class NegativeDistance(FoveaGazeError):
    """Viewing distance must be strictly positive."""


# --- statistics -----------------------------------------------------------------

class TraceTooShort(FoveaGazeError):
    """Gaze trace has fewer frames than the requested window length."""

    def __init__(self, n_frames: int, k: int) -> None:
        self.n_frames = n_frames
        self.k = k
        super().__init__(f"trace has {n_frames} usable frames, window needs {k}")


class IncompleteRow(FoveaGazeError):
    """A participant row is missing one or more target measurements."""

    def __init__(self, participant: str, missing: list[str]) -> None:
        self.participant = participant
        self.missing = list(missing)
        super().__init__(
            f"participant {participant} lacks measurements for: {', '.join(self.missing)}"
        )


class DegenerateVariance(FoveaGazeError):
    """Error variance is zero; the test statistic is undefined."""


class ZeroVariance(FoveaGazeError):
    """Correlation input has a zero-variance series."""


class LengthMismatch(FoveaGazeError):
    """Paired series must have equal lengths."""

    def __init__(self, n_x: int, n_y: int) -> None:
        self.n_x = n_x
        self.n_y = n_y
        super().__init__(f"paired series lengths differ: {n_x} vs {n_y}")


# --- questionnaire scoring -------------------------------------------------------

class OutOfRangeItem(FoveaGazeError):
    """A questionnaire item value is outside its legal range."""

    def __init__(self, index: int, value: object, legal: str) -> None:
        self.index = index
        self.value = value
        super().__init__(f"item {index} value {value!r} outside {legal}")


class EmptyInput(FoveaGazeError):
    """An operation that aggregates rows received none."""


# --- synthesis --------------------------------------------------------------------

class SpecOverflow(FoveaGazeError):
    """Panel geometry does not fit inside the frame, or targets overlap."""


class IoFailure(FoveaGazeError):
    """Filesystem write failed while emitting session artifacts."""

    def __init__(self, path: str, reason: str) -> None:
        self.path = str(path)
        self.reason = reason
        super().__init__(f"cannot write {self.path}: {reason}")


# --- configuration -----------------------------------------------------------------

class ConfigError(FoveaGazeError):
    """Analysis or synthesis configuration is malformed."""
