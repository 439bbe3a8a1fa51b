"""Deterministic fixture generators for tests and verification suites.

All randomness flows through random.Random seeded by the caller, so
every fixture list is reproducible. Generators resample until the
required genericity holds; the rejection loops are bounded and raise if
a seed turns out to be pathological instead of looping forever.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random
from typing import Sequence

from .errors import DegenerateConfiguration
from .exactgeom import RayVector, circle_point, is_antipodally_generic
from .localformula import CrossingConfiguration

_MAX_RESAMPLE = 1000


def random_ray(rng: Random, dim: int, span: int = 9) -> RayVector:
    for _ in range(_MAX_RESAMPLE):
        coords = tuple(rng.randint(-span, span) for _ in range(dim))
        if any(coords):
            return RayVector(coords)
    raise DegenerateConfiguration("could not sample a nonzero vector")


def _pairwise_independent(points: Sequence[RayVector]) -> bool:
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            a, b = points[i].coords, points[j].coords
            if all(a[r] * b[s] == a[s] * b[r] for r in range(len(a)) for s in range(r + 1, len(a))):
                return False
    return True


def _generic_points(rng: Random, dim: int, count: int, span: int = 9) -> tuple[RayVector, ...]:
    """count rays in general position: every dim-subset independent."""
    points: list[RayVector] = []
    while len(points) < count:
        for _ in range(_MAX_RESAMPLE):
            candidate = random_ray(rng, dim, span)
            trial = tuple(points) + (candidate,)
            # The subset check needs dim points; until then parallel pairs
            # are the only dependencies a future subset could inherit.
            if len(trial) < dim:
                ok = _pairwise_independent(trial)
            else:
                ok = is_antipodally_generic(trial)
            if ok:
                points.append(candidate)
                break
        else:
            raise DegenerateConfiguration("could not extend points generically")
    return tuple(points)


def random_full_configuration(rng: Random, n: int, k: int) -> CrossingConfiguration:
    """A generic full crossing: n bordered sheets and k regular sheets."""
    points = _generic_points(rng, n, n + k)
    return CrossingConfiguration(dim=n, bordered=points[:n], regular=points[n:])


def random_partial_configuration(
    rng: Random, n: int, m: int, k: int
) -> CrossingConfiguration:
    """A generic partial crossing with m < n bordered sheets."""
    if not 1 <= m < n:
        raise ValueError("partial crossings need 1 <= m < n")
    points = _generic_points(rng, n, m + k)
    return CrossingConfiguration(dim=n, bordered=points[:m], regular=points[m:])


def random_circle_triple(rng: Random) -> tuple[RayVector, RayVector, RayVector]:
    """Three generic rational points on the unit circle."""
    for _ in range(_MAX_RESAMPLE):
        params = [
            Fraction(rng.randint(-60, 60), rng.randint(1, 13)) for _ in range(3)
        ]
        if len(set(params)) != 3:
            continue
        # circle_point(s) and circle_point(t) are antipodal exactly when
        # s t = -1; equal exactly when s = t.
        if any(
            params[i] * params[j] == -1
            for i in range(3)
            for j in range(i + 1, 3)
        ):
            continue
        triple = tuple(circle_point(t) for t in params)
        if is_antipodally_generic(triple):
            return triple
    raise DegenerateConfiguration("could not sample a generic circle triple")


def circle_triples(count: int, seed: int = 0) -> list[tuple[RayVector, ...]]:
    rng = Random(seed)
    return [random_circle_triple(rng) for _ in range(count)]


def radial_tuples(count: int, dims: Sequence[int] = (2, 3, 4), seed: int = 0) -> list[tuple[RayVector, ...]]:
    """Generic (d+1)-tuples in dimension d, cycling through ``dims``."""
    rng = Random(seed)
    out = []
    for i in range(count):
        d = dims[i % len(dims)]
        out.append(_generic_points(rng, d, d + 1))
    return out


def parallel_family(
    rng: Random, n: int, k: int, quasisections: int
) -> list[CrossingConfiguration]:
    """Crossing seen by several parallel quasisections: same branch
    structure and sheet count, every quasisection with its own jointly
    generic sheet points."""
    step = n + k
    points = _generic_points(rng, n, quasisections * step)
    configs = []
    for q in range(quasisections):
        chunk = points[q * step : (q + 1) * step]
        configs.append(
            CrossingConfiguration(dim=n, bordered=chunk[:n], regular=chunk[n:])
        )
    return configs


# ====== frozen worked examples ======


def interior_triple() -> tuple[RayVector, ...]:
    """Circle triple whose kernel coefficients are all positive: index +1."""
    return (RayVector((1, 0)), RayVector((-3, 4)), RayVector((-3, -4)))


def skew_interior_triple() -> tuple[RayVector, ...]:
    """Another spanning triple, kernel coefficients 1/4 : 1/3 : 5/12."""
    return (RayVector((1, 0)), RayVector((0, 1)), RayVector((-3, -4)))


def hemisphere_triple() -> tuple[RayVector, ...]:
    """Triple inside an open half circle: index 0."""
    return (RayVector((1, 0)), RayVector((0, 1)), RayVector((1, 1)))


def single_crossing_config() -> CrossingConfiguration:
    """Full planar crossing, one regular sheet; vertex weight 1/6."""
    return CrossingConfiguration(
        dim=2,
        bordered=(RayVector((1, 0)), RayVector((0, 1))),
        regular=(RayVector((-3, -4)),),
    )


def two_regular_config() -> CrossingConfiguration:
    """Full planar crossing, two regular sheets; vertex weight 1/24."""
    return CrossingConfiguration(
        dim=2,
        bordered=(RayVector((1, 0)), RayVector((0, 1))),
        regular=(RayVector((-3, -4)), RayVector((1, 1))),
    )


def partial_crossing_config() -> CrossingConfiguration:
    """Partial crossing (one bordered sheet in the plane): chain
    expectations cancel to zero."""
    return CrossingConfiguration(
        dim=2,
        bordered=(RayVector((1, 0)),),
        regular=(RayVector((-3, -4)), RayVector((1, 1))),
    )
