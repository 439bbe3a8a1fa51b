"""Exception types shared across the package.

Every domain error raised by the library derives from FlatFoliateError so
callers (notably the CLI) can map failures to exit codes in one place.
MalformedInput covers bad files and schema violations; everything else
signals a genuine geometric or combinatorial degeneracy.
"""


class FlatFoliateError(Exception):
    """Base class for all library errors."""


class MalformedInput(FlatFoliateError):
    """Unparseable or schema-violating input."""


class ZeroVector(FlatFoliateError):
    """A ray was constructed from the zero vector."""


class DimensionMismatch(FlatFoliateError):
    """Vectors of incompatible or unsupported dimension."""


class DegenerateConfiguration(FlatFoliateError):
    """A spherical configuration fails the genericity required by the operation.

    The optional ``detail`` mapping names the offending subset and the
    vanishing determinant so callers can report it.
    """

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = dict(detail) if detail else {}


class AntipodalPair(DegenerateConfiguration):
    """Two consecutive loop points are antipodal; the geodesic arc is ambiguous."""


class NonGenericProbe(FlatFoliateError):
    """The probe ray grazes a lower-dimensional face; retry with the next probe."""


class NonIntegralWinding(FlatFoliateError):
    """The floating-point turning sum is not within tolerance of an integer."""


class TypeMismatch(FlatFoliateError):
    """An operation restricted to full crossings received a partial one."""


class InvalidCounts(FlatFoliateError):
    """Crossing statistics violate 0 <= X, 1 <= k_min <= k_max."""


class TooFewQuasisections(FlatFoliateError):
    """Parallel averaging needs at least n+1 quasisections."""


class NotAntipodal(FlatFoliateError):
    """The marked cube pair is not an antipodal pair."""


class NotAFace(FlatFoliateError):
    """The requested vertex set is not a face of the underlying cell."""


class MTooSmall(FlatFoliateError):
    """The numbering modulus does not dominate the cell indices."""


class AmbiguousNu(FlatFoliateError):
    """The vertex numbering does not determine the triangulation of a cell."""


class FaceMismatch(FlatFoliateError):
    """Two cells induce different triangulations on a shared face."""

    def __init__(self, message, face=None):
        super().__init__(message)
        self.face = tuple(face) if face is not None else None


class NonCommuting(FlatFoliateError):
    """The two holonomy matrices do not commute."""


class GenericityExhausted(FlatFoliateError):
    """Deterministic retry schedules ran out before genericity was reached."""

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


class EmptySet(FlatFoliateError):
    """An averaging set that must be nonempty is empty."""
