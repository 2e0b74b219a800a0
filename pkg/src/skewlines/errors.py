"""Exception hierarchy shared by all skewlines modules.

Two branches matter for callers: :class:`ValidationError` means the input
data violates a precondition (bad geometry, malformed file), while
:class:`ComputationError` means a well-formed request could not be carried
out.  The CLI maps them to distinct exit codes.
"""

from __future__ import annotations


class SkewLinesError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(SkewLinesError):
    """Input data fails a structural precondition."""


class ComputationError(SkewLinesError):
    """A valid request that cannot be completed."""


# -- geometry ----------------------------------------------------------------

class ZeroDirection(ValidationError):
    """A line was given the zero vector as its direction."""


class NotSkew(ValidationError):
    """Two lines are parallel or intersecting where skewness is required."""

    def __init__(self, i: int, j: int, reason: str):
        super().__init__(f"lines {i} and {j} are not skew ({reason})")
        self.labels = (i, j)
        self.reason = reason


class Perpendicular(ComputationError):
    """Perpendicular pair: the canonical semi-orientation is undefined."""


class ParallelPlanes(ComputationError):
    """Three lines lie in three parallel planes (direction det is zero)."""


class DegenerateSystem(ComputationError):
    """The quadric interpolation system does not have a 1-dim solution space."""


class Duplicate(ValidationError):
    def __init__(self, i: int, j: int):
        super().__init__(f"points {i} and {j} coincide")
        self.labels = (i, j)


class Collinear(ValidationError):
    def __init__(self, i: int, j: int, k: int):
        super().__init__(f"points {i}, {j}, {k} are collinear")
        self.labels = (i, j, k)


class Coplanar(ValidationError):
    def __init__(self, i: int, j: int, k: int, l: int):
        super().__init__(f"points {i}, {j}, {k}, {l} are coplanar")
        self.labels = (i, j, k, l)


# -- invariants --------------------------------------------------------------

class TooFewLines(ComputationError):
    pass


class TooFewPoints(ComputationError):
    pass


class LemmaViolation(ValidationError):
    """A triple table whose four-subset sign products are not all +1.

    Such a table cannot come from a configuration of skew lines, so it is
    rejected when supplied externally.
    """

    def __init__(self, subset: tuple[int, int, int, int]):
        super().__init__(f"four-subset {subset} has sign product -1")
        self.subset = subset


class ClassTooSmall(ComputationError):
    pass


class NoExternalLine(ComputationError):
    pass


class InconsistentClassSign(ComputationError):
    """The candidate class is not a genuine epsilon-class."""


class MissingSign(ComputationError):
    """A decomposition symbol node needs a sign that was not supplied."""


class SymbolSyntaxError(ValidationError):
    """Malformed decomposition-symbol text."""


class TooLarge(ComputationError):
    pass


class SizeMismatch(ComputationError):
    pass


# -- constructions -----------------------------------------------------------

class NotInjective(ValidationError):
    """The permutation data is not a bijection of 1..k."""


class ValidationFailed(ComputationError):
    """A construction produced invalid geometry (internal guard)."""


class RealizationFailed(ComputationError):
    """build_symbol exhausted its contraction retries."""


class CannotPerturb(ComputationError):
    pass


# -- diagrams / bracket ------------------------------------------------------

class NonGenericDirection(ComputationError):
    def __init__(self, reason: str):
        super().__init__(f"direction is not generic: {reason}")
        self.reason = reason


class DirectionSearchExhausted(ComputationError):
    pass


class CalibrationNoMatch(ComputationError):
    pass


class CalibrationAmbiguous(ComputationError):
    pass


class NotCalibrated(ComputationError):
    """A bracket value was requested before any convention was fixed."""


# -- serialization -----------------------------------------------------------

class ConfigFileError(ValidationError):
    """A configuration/point-set document does not match the schema."""
