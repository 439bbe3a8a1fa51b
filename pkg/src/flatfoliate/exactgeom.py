"""Exact spherical geometry over the rationals.

A point of the sphere S^(n-1) is modelled as a *ray*: a nonzero rational
vector up to positive scaling. Every ray has a unique canonical
representative with coprime integer coordinates, so equality, hashing and
all sign predicates are exact; no square root or floating-point value ever
enters the core computations.

The central predicate is ``configuration_index``: for an ordered tuple of
n+1 rays in dimension n it returns the degree (+1, -1 or 0) of the map
that fills the geodesic boundary simplex spanned by the tuple and projects
it radially back to the sphere. The degree is nonzero exactly when the
origin lies in the open convex hull of the points, and it is then the
common sign of the kernel cofactors

    lambda_i = (-1)^i * det(tuple with entry i removed),   i = 0..n,

which satisfy sum_i lambda_i p_i = 0. Interior/exterior/degenerate
classification (``spans_origin``) reads off the sign pattern of the
lambda_i.

Two independent oracles cross-check the index:

* ``winding_degree_2d`` (n = 2 only): sums floating-point turning angles
  of the closed spherical polygon and divides by 2*pi.
* ``radial_filling_degree`` (any n): counts signed crossings of the ray
  R_+ * probe with the boundary faces of the linear simplex, entirely in
  rational arithmetic.

Degeneracies (a vanishing cofactor, an antipodal pair, a grazing probe)
are detected exactly and raised as errors; nothing is perturbed silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    AntipodalPair,
    DegenerateConfiguration,
    DimensionMismatch,
    NonGenericProbe,
    NonIntegralWinding,
    ZeroVector,
)

RationalLike = "int | str | Fraction"

#: Tolerance for the floating-point winding oracle.
WINDING_TOLERANCE = 1e-6


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("ray coordinates must be exact rationals, not floats")
    return Fraction(value)


@dataclass(frozen=True)
class RayVector:
    """A nonzero rational vector modulo positive scaling.

    The constructor accepts any mix of ints, Fractions and "p/q" strings
    and stores the canonical representative: integer coordinates with
    gcd 1, pointing in the same direction as the input.
    """

    coords: tuple[int, ...]

    def __init__(self, coords: Iterable):
        fracs = tuple(_as_fraction(c) for c in coords)
        if len(fracs) < 2:
            raise DimensionMismatch("rays live in dimension >= 2")
        if all(c == 0 for c in fracs):
            raise ZeroVector("a ray needs a nonzero direction vector")
        scale = math.lcm(*(c.denominator for c in fracs))
        ints = [int(c * scale) for c in fracs]
        g = math.gcd(*ints)
        object.__setattr__(self, "coords", tuple(c // g for c in ints))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c) for c in self.coords)

    def __neg__(self) -> "RayVector":
        return RayVector(tuple(-c for c in self.coords))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"RayVector({self.coords})"


def canonicalize(v) -> RayVector:
    """Return the canonical representative of ``v``.

    ``v`` may be a RayVector or any coordinate sequence; the result always
    has coprime integer coordinates with the direction preserved.
    """
    if isinstance(v, RayVector):
        return v
    return RayVector(v)


# ====== exact determinants ======


def det_int(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss, fraction-free)."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for j in range(n - 1):
        if m[j][j] == 0:
            for i in range(j + 1, n):
                if m[i][j] != 0:
                    m[j], m[i] = m[i], m[j]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(j + 1, n):
            for c in range(j + 1, n):
                m[i][c] = (m[i][c] * m[j][j] - m[i][j] * m[j][c]) // prev
            m[i][j] = 0
        prev = m[j][j]
    return sign * m[n - 1][n - 1]


def det_fraction(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant of a square matrix of Fractions, computed exactly."""
    scaled = []
    factor = Fraction(1)
    for row in rows:
        row = [Fraction(x) for x in row]
        scale = math.lcm(*(x.denominator for x in row)) if row else 1
        scaled.append([int(x * scale) for x in row])
        factor /= scale
    return factor * det_int(scaled)


def _columns_matrix(vectors: Sequence[RayVector]) -> list[list[int]]:
    dim = vectors[0].dim
    return [[v.coords[r] for v in vectors] for r in range(dim)]


def _check_dims(vectors: Sequence[RayVector], expected: int, what: str) -> None:
    for v in vectors:
        if v.dim != expected:
            raise DimensionMismatch(
                f"{what}: expected dimension {expected}, got {v.dim}"
            )


def orientation_sign(vectors: Sequence[RayVector]) -> int:
    """Sign of det of the matrix whose columns are the given n rays (dim n)."""
    vectors = tuple(canonicalize(v) for v in vectors)
    if not vectors:
        raise DimensionMismatch("orientation_sign needs at least one vector")
    n = vectors[0].dim
    if len(vectors) != n:
        raise DimensionMismatch(
            f"orientation_sign needs exactly {n} vectors of dimension {n}"
        )
    _check_dims(vectors, n, "orientation_sign")
    d = det_int(_columns_matrix(vectors))
    return (d > 0) - (d < 0)


class SpanVerdict(Enum):
    INTERIOR = "interior"
    EXTERIOR = "exterior"
    DEGENERATE = "degenerate"


def _kernel_cofactors(vectors: Sequence[RayVector]) -> list[int]:
    """Signed cofactors lambda_i = (-1)^i det(tuple minus entry i).

    The vector (lambda_0, ..., lambda_n) spans the kernel of the n x (n+1)
    matrix with the rays as columns, so sum_i lambda_i p_i = 0.
    """
    n = vectors[0].dim
    cof = []
    for i in range(n + 1):
        rest = vectors[:i] + vectors[i + 1:]
        d = det_int(_columns_matrix(rest))
        cof.append(d if i % 2 == 0 else -d)
    return cof


def _validate_tuple(vectors: Sequence[RayVector], what: str) -> tuple[RayVector, ...]:
    vectors = tuple(canonicalize(v) for v in vectors)
    if len(vectors) < 3:
        raise DimensionMismatch(f"{what} needs n+1 >= 3 rays")
    n = vectors[0].dim
    if len(vectors) != n + 1:
        raise DimensionMismatch(
            f"{what}: {len(vectors)} rays given, dimension {n} needs {n + 1}"
        )
    _check_dims(vectors, n, what)
    return vectors


def spans_origin(vectors: Sequence[RayVector]) -> SpanVerdict:
    """Classify the position of the origin relative to conv of n+1 sphere points.

    INTERIOR: the origin is in the open convex hull of the normalized
    points (all kernel cofactors share a strict sign). EXTERIOR: no
    nonnegative combination exists (mixed strict signs). DEGENERATE: some
    cofactor vanishes — the origin lies on a face span or the points are
    affinely degenerate.
    """
    vectors = _validate_tuple(vectors, "spans_origin")
    cof = _kernel_cofactors(vectors)
    if any(c == 0 for c in cof):
        return SpanVerdict.DEGENERATE
    if all(c > 0 for c in cof) or all(c < 0 for c in cof):
        return SpanVerdict.INTERIOR
    return SpanVerdict.EXTERIOR


def configuration_index(vectors: Sequence[RayVector]) -> int:
    """Degree of the radially projected geodesic filling of the tuple.

    Returns 0 for exterior tuples and for tuples with a repeated point,
    +1/-1 for spanning tuples according to the orientation of the simplex
    of normalized points. Degenerate spanning data raises
    DegenerateConfiguration naming the vanishing cofactor.
    """
    vectors = _validate_tuple(vectors, "configuration_index")
    if len(set(vectors)) < len(vectors):
        # A repeated point confines the filling to a closed hemisphere.
        return 0
    cof = _kernel_cofactors(vectors)
    zero_at = [i for i, c in enumerate(cof) if c == 0]
    if zero_at:
        i = zero_at[0]
        raise DegenerateConfiguration(
            f"vanishing cofactor at entry {i}: the {len(vectors) - 1} rays "
            f"obtained by removing entry {i} are linearly dependent",
            detail={
                "entry": i,
                "points": tuple(v.coords for v in vectors),
                "determinant": "0/1",
            },
        )
    if all(c > 0 for c in cof):
        return 1
    if all(c < 0 for c in cof):
        return -1
    return 0


def is_antipodally_generic(points: Sequence[RayVector]) -> bool:
    """True iff every n-subset of the points is linearly independent.

    This strengthens "no coinciding or antipodal pair": coinciding rays,
    antipodal rays and any other dependent n-subset all force a vanishing
    determinant and hence a False verdict.
    """
    points = tuple(canonicalize(p) for p in points)
    if not points:
        raise DimensionMismatch("genericity check needs a nonempty family")
    n = points[0].dim
    _check_dims(points, n, "is_antipodally_generic")
    if len(points) < n:
        # Fewer points than the dimension: the only n-or-smaller subset
        # that can degenerate is the whole family, and sign flips never
        # change linear independence, so a Gram determinant decides.
        gram = [
            [sum(a * b for a, b in zip(p.coords, q.coords)) for q in points]
            for p in points
        ]
        return det_int(gram) != 0
    if n == 2:
        for a, b in combinations(points, 2):
            if a.coords[0] * b.coords[1] - a.coords[1] * b.coords[0] == 0:
                return False
        return True
    for subset in combinations(points, n):
        if det_int(_columns_matrix(subset)) == 0:
            return False
    return True


# ====== oracle 1: floating-point winding number (n = 2) ======


def _atan2_exact_ratio(y: int, x: int) -> float:
    # Scale huge integers into float range; only the ratio matters.
    shift = max(abs(x), abs(y)).bit_length() - 500
    if shift > 0:
        x >>= shift
        y >>= shift
    return math.atan2(float(y), float(x))


def winding_degree_2d(loop: Sequence[RayVector]) -> int:
    """Winding number around the origin of a closed geodesic loop on S^1.

    Consecutive points are joined by shortest arcs; the signed turning
    angles are summed in floating point and divided by 2*pi. The total
    must land within 1e-6 of an integer, otherwise NonIntegralWinding is
    raised. Antipodal consecutive pairs make the shortest arc ambiguous
    and raise AntipodalPair (detected exactly, before any float work).
    """
    loop = tuple(canonicalize(p) for p in loop)
    if len(loop) < 3:
        raise DimensionMismatch("a loop needs at least 3 points")
    _check_dims(loop, 2, "winding_degree_2d")
    total = 0.0
    for a, b in zip(loop, loop[1:] + loop[:1]):
        cross = a.coords[0] * b.coords[1] - a.coords[1] * b.coords[0]
        dot = a.coords[0] * b.coords[0] + a.coords[1] * b.coords[1]
        if cross == 0 and dot < 0:
            raise AntipodalPair(
                "consecutive loop points are antipodal",
                detail={"points": (a.coords, b.coords)},
            )
        total += _atan2_exact_ratio(cross, dot)
    turns = total / (2.0 * math.pi)
    nearest = round(turns)
    if abs(turns - nearest) > WINDING_TOLERANCE:
        raise NonIntegralWinding(
            f"turning sum {turns!r} is not within {WINDING_TOLERANCE} of an integer"
        )
    return int(nearest)


# ====== oracle 2: exact radial crossing count (any n) ======


def radial_filling_degree(vectors: Sequence[RayVector], probe: RayVector) -> int:
    """Degree of the filling via signed ray crossings, in exact arithmetic.

    The boundary of the linear simplex on the tuple consists of the n+1
    faces obtained by dropping one entry. The ray R_+ * probe crosses the
    open cone of face i exactly when probe = sum_j c_j q_j with all
    c_j > 0; the crossing contributes (-1)^i * sign det(face). A solution
    with some c_j = 0 and the rest nonnegative means the probe grazes an
    (n-2)-face: NonGenericProbe is raised and the caller should move to
    the next probe in the schedule.
    """
    vectors = _validate_tuple(vectors, "radial_filling_degree")
    probe = canonicalize(probe)
    n = vectors[0].dim
    if probe.dim != n:
        raise DimensionMismatch("probe dimension does not match the tuple")
    total = 0
    for i in range(n + 1):
        face = vectors[:i] + vectors[i + 1:]
        mat = _columns_matrix(face)
        d = det_int(mat)
        if d == 0:
            raise DegenerateConfiguration(
                f"face {i} of the tuple is linearly dependent",
                detail={"entry": i, "points": tuple(v.coords for v in face)},
            )
        # Cramer: c_j * d = det(face with column j replaced by probe).
        numerators = []
        for j in range(n):
            replaced = list(face)
            replaced[j] = probe
            numerators.append(det_int(_columns_matrix(replaced)))
        cs = [num * (1 if d > 0 else -1) for num in numerators]  # sign of c_j * |d|
        if all(c >= 0 for c in cs) and any(c == 0 for c in cs):
            raise NonGenericProbe(
                f"probe {probe.coords} grazes the boundary of face {i}"
            )
        if all(c > 0 for c in cs):
            total += (1 if d > 0 else -1) * (1 if i % 2 == 0 else -1)
    return total


def probe_schedule(dim: int):
    """Deterministic probe rays (1, b, b^2, ...) for b = 1, 2, 3, ..."""
    b = 1
    while True:
        yield RayVector(tuple(b**j for j in range(dim)))
        b += 1


def radial_filling_degree_auto(
    vectors: Sequence[RayVector], budget: int = 32
) -> int:
    """Run the radial oracle over the probe schedule until a generic probe."""
    last = None
    for probe, _ in zip(probe_schedule(canonicalize(vectors[0]).dim), range(budget)):
        try:
            return radial_filling_degree(vectors, probe)
        except NonGenericProbe as exc:
            last = exc
    raise NonGenericProbe(
        f"no generic probe within budget {budget}: {last}"
    )


# ====== open-hemisphere feasibility ======


def fits_open_hemisphere(points: Sequence[RayVector]) -> bool:
    """Exact test for a linear functional strictly positive on all points.

    Feasibility of y . p_i > 0 for all i is equivalent (by scaling) to
    feasibility of y . p_i >= 1, which is decided by Fourier-Motzkin
    elimination over the rationals. By Gordan's alternative this holds
    exactly when the origin is not a nonzero nonnegative combination of
    the points, i.e. when the filling misses an open hemisphere's pole.
    """
    points = tuple(canonicalize(p) for p in points)
    if not points:
        raise DimensionMismatch("hemisphere test needs at least one point")
    n = points[0].dim
    _check_dims(points, n, "fits_open_hemisphere")
    # Constraints: sum_j a_j y_j >= rhs, stored as (coeffs, rhs).
    rows = [(tuple(Fraction(c) for c in p.coords), Fraction(1)) for p in points]
    for var in range(n):
        pos, neg, rest = [], [], []
        for coeffs, rhs in rows:
            lead = coeffs[0]
            tail = coeffs[1:]
            if lead > 0:
                pos.append((tuple(t / lead for t in tail), rhs / lead))
            elif lead < 0:
                neg.append((tuple(t / -lead for t in tail), rhs / -lead))
            else:
                rest.append((tail, rhs))
        # y_var >= rhs_p - tail_p . y  and  -y_var >= rhs_n + ... combine:
        for (tp, rp) in pos:
            for (tn, rn) in neg:
                rest.append(
                    (tuple(a + b for a, b in zip(tp, tn)), rp + rn)
                )
        rows = rest
        if not rows:
            return True
    return all(rhs <= 0 for _, rhs in rows)


# ====== rational circle points ======


def circle_point(t) -> RayVector:
    """Rational point of S^1 via the Pythagorean parametrization.

    t -> ((1 - t^2)/(1 + t^2), 2t/(1 + t^2)); as a ray this is simply
    (1 - t^2, 2t). Every rational t gives an exact circle point, and every
    circle point except (-1, 0) arises this way.
    """
    t = Fraction(t)
    return RayVector((1 - t * t, 2 * t))
