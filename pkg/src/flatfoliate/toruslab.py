"""Flat circle bundles over the torus probed with box quasisections.

The bundle is specified by two commuting special linear rational 2x2
matrices, the holonomies of the two standard loops. A quasisection over
a sheared parallelogram region (a thin sloped frame around the square
box [0, L]^2) assigns to each unit cell g of the plane the ray obtained
by parallel transporting a base ray v0 back along g. Projecting the
region boundary to the torus produces an immersed curve; its transverse
self-crossings, together with the sheet rays of the region lifts
covering each crossing, are exactly the local data consumed by the
Euler-number formula (two bordered branch sheets per crossing, the
interior covering sheets as regular entries).

Everything is exact rational arithmetic. Non-generic geometry (corner
hits, tangencies, triple points, crossings on the cell grid) is
detected exactly and retried on a deterministic schedule of region
shears; non-generic sheet configurations are retried on a schedule of
base rays. The retry budget is FLATFOLIATE_RETRY_BUDGET (default 32).

The decay experiment computes, for increasing box sizes L, the exact
formula value (an integer, zero for these flat bundles) next to the
a-priori bound, which shrinks like 1/L^2; the mutated variant that
ignores the branch ordering rule destroys integrality and is used as a
sign-convention sanity check.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    DegenerateConfiguration,
    EmptySet,
    GenericityExhausted,
    MalformedInput,
    NonCommuting,
)
from .exactgeom import RayVector
from .localformula import (
    ChamberChain,
    CrossingConfiguration,
    EulerReport,
    _chain_expectation_unsigned,
    all_chains,
    euler_number,
    sign_stripped_chain_total,
    sullivan_bound,
)
from .triangulations import ProductCell, SimplicialComplex, assemble_triangulation, nu_numbering

RETRY_BUDGET_ENV = "FLATFOLIATE_RETRY_BUDGET"
DEFAULT_RETRY_BUDGET = 32

Vec = tuple[Fraction, Fraction]


def _v(x, y) -> Vec:
    return (Fraction(x), Fraction(y))


def _vadd(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1])


def _vsub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def _vneg(a: Vec) -> Vec:
    return (-a[0], -a[1])


def _cross(a: Vec, b: Vec) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _dot(a: Vec, b: Vec) -> Fraction:
    return a[0] * b[0] + a[1] * b[1]


def _rot90(a: Vec) -> Vec:
    """Quarter turn counterclockwise; maps an oriented tangent to the inner normal."""
    return (-a[1], a[0])


# ====== exact 2x2 matrices and holonomy ======


@dataclass(frozen=True)
class Mat2:
    """Exact rational 2x2 matrix [[a, b], [c, d]]."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @staticmethod
    def of(a, b, c, d) -> "Mat2":
        return Mat2(Fraction(a), Fraction(b), Fraction(c), Fraction(d))

    @staticmethod
    def identity() -> "Mat2":
        return Mat2.of(1, 0, 0, 1)

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mat2":
        det = self.det()
        if det == 0:
            raise MalformedInput("matrix is singular")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __pow__(self, k: int) -> "Mat2":
        base = self if k >= 0 else self.inverse()
        out = Mat2.identity()
        for _ in range(abs(k)):
            out = out @ base
        return out

    def apply(self, vec: Sequence) -> Vec:
        x, y = (Fraction(c) for c in vec)
        return (self.a * x + self.b * y, self.c * x + self.d * y)


@dataclass(frozen=True)
class HolonomyPair:
    """Commuting determinant-one holonomies of the two torus loops."""

    gen_x: Mat2
    gen_y: Mat2

    def __post_init__(self):
        for m in (self.gen_x, self.gen_y):
            if m.det() != 1:
                raise MalformedInput(f"holonomy {m} must have determinant one")
        if self.gen_x @ self.gen_y != self.gen_y @ self.gen_x:
            raise NonCommuting("the two holonomies must commute")

    def holonomy(self, g: Sequence[int]) -> Mat2:
        i, j = (int(c) for c in g)
        return (self.gen_x ** i) @ (self.gen_y ** j)

    def sheet_ray(self, g: Sequence[int], v0) -> RayVector:
        """Sheet of the quasisection over cell g: v0 transported back along g."""
        base = v0.fractions() if isinstance(v0, RayVector) else tuple(v0)
        return RayVector(self.holonomy(g).inverse().apply(base))


def standard_rotation_pair() -> HolonomyPair:
    """Two rational rotations (the 3-4-5 and 5-12-13 ones); the main example."""
    a = Mat2.of(Fraction(3, 5), Fraction(-4, 5), Fraction(4, 5), Fraction(3, 5))
    b = Mat2.of(Fraction(5, 13), Fraction(-12, 13), Fraction(12, 13), Fraction(5, 13))
    return HolonomyPair(a, b)


def diagonal_pair() -> HolonomyPair:
    """Diagonal hyperbolic holonomies; all sheets stay in one quadrant."""
    return HolonomyPair(
        Mat2.of(2, 0, 0, Fraction(1, 2)), Mat2.of(3, 0, 0, Fraction(1, 3))
    )


def unipotent_pair() -> HolonomyPair:
    """Shear holonomies; sheets stay in a half plane, so no tuple spans.

    The second shear amount 97/101 keeps i + j*97/101 injective over the
    cell range, so distinct cells still carry distinct rays.
    """
    return HolonomyPair(
        Mat2.of(1, 1, 0, 1), Mat2.of(1, Fraction(97, 101), 0, 1)
    )


def identity_pair() -> HolonomyPair:
    """Trivial holonomy: every cell carries the same ray, hopelessly degenerate."""
    return HolonomyPair(Mat2.identity(), Mat2.identity())


# ====== the quasisection region ======


@dataclass(frozen=True)
class Segment:
    start: Vec
    end: Vec
    name: str
    tangent: Vec  # oriented with the counterclockwise boundary

    @property
    def direction(self) -> Vec:
        return _vsub(self.end, self.start)


def _intersect_lines(p: Vec, d: Vec, q: Vec, e: Vec) -> Optional[tuple[Fraction, Fraction]]:
    """Parameters (s, u) with p + s d = q + u e, or None for parallel lines."""
    den = _cross(d, e)
    if den == 0:
        return None
    r = _vsub(q, p)
    return (_cross(r, e) / den, _cross(r, d) / den)


@dataclass(frozen=True)
class QuasisectionRegion:
    """Sheared parallelogram hugging the box [0, L]^2, corners counterclockwise.

    Edge directions are (1, shear_x) and (shear_y, 1): almost axis
    parallel, so the boundary stays inside the one-cell collar of the
    box while still meeting every grid direction transversally.
    """

    L: int
    attempt: int
    shear_x: Fraction
    shear_y: Fraction
    margin: Fraction
    corners: tuple[Vec, Vec, Vec, Vec]

    @property
    def d1(self) -> Vec:
        return (Fraction(1), self.shear_x)

    @property
    def d2(self) -> Vec:
        return (self.shear_y, Fraction(1))

    def edges(self) -> tuple[Segment, Segment, Segment, Segment]:
        c0, c1, c2, c3 = self.corners
        return (
            Segment(c0, c1, "bottom", self.d1),
            Segment(c1, c2, "right", self.d2),
            Segment(c2, c3, "top", _vneg(self.d1)),
            Segment(c3, c0, "left", _vneg(self.d2)),
        )

    def contains(self, p: Vec) -> bool:
        return all(
            _cross(e.tangent, _vsub(p, e.start)) >= 0 for e in self.edges()
        )

    def strictly_contains(self, p: Vec) -> bool:
        return all(
            _cross(e.tangent, _vsub(p, e.start)) > 0 for e in self.edges()
        )

    def bbox(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [c[0] for c in self.corners]
        ys = [c[1] for c in self.corners]
        return (min(xs), max(xs), min(ys), max(ys))


def build_region(L: int, attempt: int = 0) -> QuasisectionRegion:
    """Minimal parallelogram with the scheduled shears containing [-m, L+m]^2."""
    if L < 2:
        raise MalformedInput(f"box size {L} must be at least 2")
    if attempt < 0:
        raise MalformedInput("attempt index must be nonnegative")
    shear_x = Fraction(1, 97 + 2 * attempt)
    shear_y = Fraction(1, 103 + 2 * attempt)
    margin = Fraction(1, 101)
    lo = -margin
    hi = L + margin
    d1 = (Fraction(1), shear_x)
    d2 = (shear_y, Fraction(1))
    # The support lines touch the box at its bottom-right and top-left
    # corners, which therefore are two of the parallelogram corners.
    c1 = _v(hi, lo)
    c3 = _v(lo, hi)
    s_u = _intersect_lines(c1, d1, c3, d2)
    c0 = _vadd(c1, (s_u[0] * d1[0], s_u[0] * d1[1]))
    s_u = _intersect_lines(c3, d1, c1, d2)
    c2 = _vadd(c3, (s_u[0] * d1[0], s_u[0] * d1[1]))
    region = QuasisectionRegion(
        L=L,
        attempt=attempt,
        shear_x=shear_x,
        shear_y=shear_y,
        margin=margin,
        corners=(c0, c1, c2, c3),
    )
    for bx in (lo, hi):
        for by in (lo, hi):
            if not region.contains(_v(bx, by)):
                raise MalformedInput("region construction failed to cover the box")
    return region


def cell_status(region: QuasisectionRegion, cell: tuple[int, int]) -> str:
    """Exact classification of a unit cell: "inner", "boundary" or "outside"."""
    i, j = cell
    corners = [_v(i, j), _v(i + 1, j), _v(i + 1, j + 1), _v(i, j + 1)]
    if all(region.strictly_contains(c) for c in corners):
        return "inner"
    # Separating axis test between two convex polygons, exact.
    for e in region.edges():
        if all(_cross(e.tangent, _vsub(c, e.start)) < 0 for c in corners):
            return "outside"
    xmin, xmax, ymin, ymax = region.bbox()
    if xmax < i or i + 1 < xmin or ymax < j or j + 1 < ymin:
        return "outside"
    return "boundary"


def region_cells(region: QuasisectionRegion) -> tuple[list, list]:
    """All inner cells and all boundary cells of the region, sorted."""
    xmin, xmax, ymin, ymax = region.bbox()
    inner, boundary = [], []
    for i in range(floor(xmin) - 1, ceil(xmax) + 1):
        for j in range(floor(ymin) - 1, ceil(ymax) + 1):
            status = cell_status(region, (i, j))
            if status == "inner":
                inner.append((i, j))
            elif status == "boundary":
                boundary.append((i, j))
    return inner, boundary


# ====== crossing extraction ======


@dataclass(frozen=True)
class BranchGerm:
    """One strand of the boundary through a crossing: edge, deck lift, tangent."""

    edge: str
    lift: tuple[int, int]
    tangent: Vec


@dataclass(frozen=True)
class TorusCrossing:
    """Transverse self-crossing of the projected region boundary.

    ``position`` lies in [0, 1)^2 off the cell grid; the two branch
    germs carry the deck lifts whose boundary strands cross there;
    ``regular_lifts`` are the deck elements whose region lift covers the
    crossing in its interior. ``swapped`` records whether the branch
    order had to be exchanged to satisfy the positive-frame rule
    det[t1, t2] > 0.
    """

    position: Vec
    branch_h: BranchGerm
    branch_v: BranchGerm
    swapped: bool
    regular_lifts: tuple[tuple[int, int], ...]

    @property
    def k(self) -> int:
        return len(self.regular_lifts)

    def ordered_branches(self) -> tuple[BranchGerm, BranchGerm]:
        if self.swapped:
            return (self.branch_v, self.branch_h)
        return (self.branch_h, self.branch_v)


def _segment_param_point(seg: Segment, s: Fraction) -> Vec:
    d = seg.direction
    return _vadd(seg.start, (s * d[0], s * d[1]))


def _point_on_segment(p: Vec, seg: Segment) -> bool:
    d = seg.direction
    r = _vsub(p, seg.start)
    if _cross(d, r) != 0:
        return False
    t = _dot(r, d) / _dot(d, d)
    return 0 <= t <= 1


def _translate_window(E: Segment, F: Segment) -> Iterator[tuple[int, int]]:
    exs = sorted((E.start[0], E.end[0]))
    eys = sorted((E.start[1], E.end[1]))
    fxs = sorted((F.start[0], F.end[0]))
    fys = sorted((F.start[1], F.end[1]))
    for wx in range(ceil(exs[0] - fxs[1]) - 1, floor(exs[1] - fxs[0]) + 2):
        for wy in range(ceil(eys[0] - fys[1]) - 1, floor(eys[1] - fys[0]) + 2):
            yield (wx, wy)


def _shift(seg: Segment, w: tuple[int, int]) -> Segment:
    off = _v(w[0], w[1])
    return Segment(_vadd(seg.start, off), _vadd(seg.end, off), seg.name, seg.tangent)


def _audit_parallel_overlaps(region: QuasisectionRegion) -> None:
    """No two strands of the same family may run along a common line."""
    edges = region.edges()
    families = ((edges[0], edges[2]), (edges[1], edges[3]))
    for family in families:
        for E in family:
            for F in family:
                for w in _translate_window(E, F):
                    if E.name == F.name and w == (0, 0):
                        continue
                    G = _shift(F, w)
                    if _cross(E.direction, _vsub(G.start, E.start)) != 0:
                        continue
                    # Same line; reject if the closed 1d shadows overlap.
                    d = E.direction
                    t0 = _dot(_vsub(G.start, E.start), d) / _dot(d, d)
                    t1 = _dot(_vsub(G.end, E.start), d) / _dot(d, d)
                    lo, hi = min(t0, t1), max(t0, t1)
                    if hi >= 0 and lo <= 1:
                        raise DegenerateConfiguration(
                            f"strands {E.name} and {F.name}+{w} overlap on one line",
                            detail={"stage": "overlap", "translate": w},
                        )


def _mod1(f: Fraction) -> Fraction:
    return f - floor(f)


def extract_crossings(region: QuasisectionRegion) -> tuple[TorusCrossing, ...]:
    """All transverse boundary self-crossings on the torus, audited exactly.

    Raises DegenerateConfiguration whenever the projected boundary fails
    to be a generic immersed curve: strand overlaps, corner hits, triple
    points, repeated crossing positions, or crossings on the unit grid.
    """
    _audit_parallel_overlaps(region)
    edges = region.edges()
    horizontals = (edges[0], edges[2])
    verticals = (edges[1], edges[3])
    corner_set = set(region.corners)
    raw = []
    for E in horizontals:
        for F in verticals:
            for w in _translate_window(E, F):
                G = _shift(F, w)
                params = _intersect_lines(E.start, E.direction, G.start, G.direction)
                if params is None:
                    continue
                s, u = params
                if s < 0 or s > 1 or u < 0 or u > 1:
                    continue
                p = _segment_param_point(E, s)
                if 0 < s < 1 and 0 < u < 1:
                    raw.append((E, F, w, p))
                    continue
                if w == (0, 0) and p in corner_set:
                    # The boundary bending through its own corner.
                    continue
                raise DegenerateConfiguration(
                    f"strand {F.name}+{w} meets {E.name} at a segment endpoint",
                    detail={"stage": "corner", "point": p},
                )
    xmin, xmax, ymin, ymax = region.bbox()
    crossings = []
    seen_positions: dict[Vec, tuple] = {}
    for E, F, w, p in raw:
        x = (_mod1(p[0]), _mod1(p[1]))
        if x[0] == 0 or x[1] == 0:
            raise DegenerateConfiguration(
                "crossing lies on the unit cell grid",
                detail={"stage": "grid", "point": p},
            )
        g_h = (int(p[0] - x[0]), int(p[1] - x[1]))
        g_v = (g_h[0] - w[0], g_h[1] - w[1])
        key = (x, g_h, g_v)
        if x in seen_positions:
            raise DegenerateConfiguration(
                "two distinct crossings share a torus position",
                detail={"stage": "duplicate", "position": x},
            )
        seen_positions[x] = key
        # Scan every deck lift of the position: exactly two may sit on the
        # boundary (the two branches); the strict-interior ones are the
        # regular sheets.
        boundary_hits = []
        regular = []
        for ux in range(floor(xmin - x[0]), ceil(xmax - x[0]) + 1):
            for uy in range(floor(ymin - x[1]), ceil(ymax - x[1]) + 1):
                q = (x[0] + ux, x[1] + uy)
                on_edges = [e.name for e in edges if _point_on_segment(q, e)]
                if on_edges:
                    boundary_hits.extend((name, (ux, uy)) for name in on_edges)
                elif region.strictly_contains(q):
                    regular.append((ux, uy))
        expected = {(E.name, g_h), (F.name, g_v)}
        if len(boundary_hits) != 2 or set(boundary_hits) != expected:
            raise DegenerateConfiguration(
                "crossing position meets the boundary in extra lifts",
                detail={"stage": "third-lift", "position": x, "hits": boundary_hits},
            )
        if not regular:
            raise DegenerateConfiguration(
                "crossing position is covered by no interior sheet",
                detail={"stage": "empty", "position": x},
            )
        swapped = _cross(E.tangent, F.tangent) < 0
        crossings.append(
            TorusCrossing(
                position=x,
                branch_h=BranchGerm(edge=E.name, lift=g_h, tangent=E.tangent),
                branch_v=BranchGerm(edge=F.name, lift=g_v, tangent=F.tangent),
                swapped=swapped,
                regular_lifts=tuple(sorted(regular)),
            )
        )
    crossings.sort(key=lambda c: c.position)
    return tuple(crossings)


# ====== sheet configurations and retry schedules ======


def retry_budget() -> int:
    raw = os.environ.get(RETRY_BUDGET_ENV)
    if raw is None:
        return DEFAULT_RETRY_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise MalformedInput(f"{RETRY_BUDGET_ENV} must be an integer") from exc
    if value < 1:
        raise MalformedInput(f"{RETRY_BUDGET_ENV} must be positive")
    return value


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def base_ray_schedule() -> Iterator[RayVector]:
    """Deterministic base rays: (1, 0) then (1, 1/p) over primes p >= 7."""
    yield RayVector((1, 0))
    p = 7
    while True:
        if _is_prime(p):
            yield RayVector((1, Fraction(1, p)))
        p += 1


def crossing_configuration(
    crossing: TorusCrossing, hol: HolonomyPair, v0
) -> CrossingConfiguration:
    """Local formula input at one crossing: branch sheets ordered by the
    positive-frame rule, interior covering sheets as regular entries."""
    first, second = crossing.ordered_branches()
    bordered = (hol.sheet_ray(first.lift, v0), hol.sheet_ray(second.lift, v0))
    regular = tuple(hol.sheet_ray(u, v0) for u in crossing.regular_lifts)
    return CrossingConfiguration(dim=2, bordered=bordered, regular=regular)


@dataclass(frozen=True)
class TorusData:
    """One fully audited pipeline run at a fixed box size."""

    L: int
    region: QuasisectionRegion
    crossings: tuple[TorusCrossing, ...]
    configurations: tuple[CrossingConfiguration, ...]
    v0: RayVector
    inner_cells: tuple[tuple[int, int], ...]
    boundary_cells: tuple[tuple[int, int], ...]
    region_attempts: int
    ray_attempts: int


def boundary_crossings(
    hol: HolonomyPair,
    L: int,
    v0=None,
    budget: Optional[int] = None,
    schedule_start: int = 0,
) -> TorusData:
    """Run the geometric stage and the sheet stage with their retry loops.

    ``schedule_start`` skips that many entries of the deterministic base
    ray schedule before the retry loop begins; it has no effect when an
    explicit ``v0`` is given.
    """
    limit = retry_budget() if budget is None else budget
    if schedule_start < 0:
        raise MalformedInput("schedule start index must not be negative")
    region = None
    crossings = None
    region_attempts = 0
    last: Optional[DegenerateConfiguration] = None
    for attempt in range(limit):
        region_attempts = attempt + 1
        candidate = build_region(L, attempt)
        try:
            crossings = extract_crossings(candidate)
        except DegenerateConfiguration as exc:
            last = exc
            continue
        region = candidate
        break
    if region is None or crossings is None:
        raise GenericityExhausted(
            f"no generic region found for L={L} within {limit} attempts: {last}",
            stage="region",
        )
    if v0 is not None:
        candidates: Iterable = [RayVector(v0) if not isinstance(v0, RayVector) else v0]
    else:
        schedule = base_ray_schedule()
        for _ in range(schedule_start):
            next(schedule)
        candidates = (next(schedule) for _ in range(limit))
    ray_attempts = 0
    configurations = None
    chosen = None
    for ray in candidates:
        ray_attempts += 1
        try:
            configurations = tuple(
                crossing_configuration(c, hol, ray) for c in crossings
            )
            for cfg in configurations:
                if not cfg.is_generic:
                    raise DegenerateConfiguration(
                        "sheet configuration is not antipodally generic"
                    )
        except DegenerateConfiguration as exc:
            last = exc
            configurations = None
            continue
        chosen = ray
        break
    if configurations is None or chosen is None:
        raise GenericityExhausted(
            f"no generic base ray found for L={L} within {limit} attempts: {last}",
            stage="ray",
        )
    inner, boundary = region_cells(region)
    return TorusData(
        L=L,
        region=region,
        crossings=crossings,
        configurations=configurations,
        v0=chosen,
        inner_cells=tuple(inner),
        boundary_cells=tuple(boundary),
        region_attempts=region_attempts,
        ray_attempts=ray_attempts,
    )


def euler_estimate(data: TorusData, drop_orientation_sign: bool = False) -> EulerReport:
    """Exact formula total and bound for one run.

    With ``drop_orientation_sign`` the per-crossing totals are computed by
    the sign-stripped chain sums (no permutation-sign factors anywhere), a
    deliberate convention mutation whose total stops being an integer; the
    correct build always returns an integer here.
    """
    if drop_orientation_sign:
        total = Fraction(0)
        for cfg in data.configurations:
            total += sign_stripped_chain_total(cfg)
    else:
        total = euler_number(data.configurations, 2)
    ks = [cfg.regular_count for cfg in data.configurations]
    k_min, k_max = min(ks), max(ks)
    bound = sullivan_bound(len(data.crossings), k_min, k_max, 2)
    return EulerReport(
        formula_value=total,
        bound=bound,
        crossings=len(data.crossings),
        k_min=k_min,
        k_max=k_max,
        n_inner=len(data.inner_cells),
        n_boundary=len(data.boundary_cells),
    )


def decay_experiment(
    hol: HolonomyPair,
    sizes: Sequence[int] = (2, 3, 4, 6, 8),
    v0=None,
    budget: Optional[int] = None,
    schedule_start: int = 0,
    drop_orientation_sign: bool = False,
) -> list[tuple[TorusData, EulerReport]]:
    out = []
    for L in sizes:
        data = boundary_crossings(
            hol, L, v0=v0, budget=budget, schedule_start=schedule_start
        )
        out.append((data, euler_estimate(data, drop_orientation_sign)))
    return out


# ====== geometric arbitration of the chain signs (n = 2) ======


def n2_geometric_vertex_expectations(
    crossing: TorusCrossing, cfg: CrossingConfiguration
) -> list[tuple[ChamberChain, Fraction]]:
    """Chain expectations signed by the actual chamber geometry.

    Around a transverse crossing the four chambers are reached by the
    inner-normal combinations -n1-n2 (outside both strands), n_first -
    n_other (after crossing the first strand of the chain) and n1+n2
    (inside both). The orientation of that chamber triangle replaces the
    combinatorial permutation sign; both signings must agree crossing by
    crossing.
    """
    first, second = crossing.ordered_branches()
    n1 = _rot90(first.tangent)
    n2 = _rot90(second.tangent)
    w_out = _vneg(_vadd(n1, n2))
    w_full = _vadd(n1, n2)
    results = []
    for chain in all_chains(cfg):
        lead = chain.sigma[0]
        w_mid = _vsub(n1, n2) if lead == 1 else _vsub(n2, n1)
        det = _cross(_vsub(w_mid, w_out), _vsub(w_full, w_out))
        sign = 1 if det > 0 else -1
        results.append((chain, sign * _chain_expectation_unsigned(chain, cfg)))
    return results


# ====== chamber complex of the crossing diagram ======

_WHEEL_ORDER = ("east", "north", "west", "south")


@dataclass(frozen=True)
class ChamberComplex:
    """Crossing diagram chambers with covering degrees and the assembled
    numbering-driven triangulation (one square cell per crossing)."""

    chamber_count: int
    degrees: tuple[int, ...]
    sector_chambers: tuple[tuple[int, int, int, int], ...]
    cells: tuple[ProductCell, ...]
    complex: SimplicialComplex
    chi: int


def _wheel_vectors(region: QuasisectionRegion) -> tuple[Vec, Vec, Vec, Vec]:
    d1, d2 = region.d1, region.d2
    return (d1, d2, _vneg(d1), _vneg(d2))


def _wheel_index(region: QuasisectionRegion, direction: Vec) -> int:
    for idx, w in enumerate(_wheel_vectors(region)):
        if w == direction:
            return idx
    raise MalformedInput(f"direction {direction} is not a strand direction")


def torus_dual_complex(data: TorusData, modulus: int = 7) -> ChamberComplex:
    """Chambers of the crossing diagram via rotation-system face tracing.

    Crossings are the only nodes; arcs bend silently through the region
    corners. Each chamber's covering degree is computed exactly at every
    incident crossing sector as (interior sheets) plus one for each
    strand whose inner side contains the sector, and the values must
    agree. Each crossing then becomes a square cell whose corners are
    its four chambers in counterclockwise order, numbered by
    modulus * degree, and the cells are assembled into one complex;
    for a torus diagram the Euler characteristic is zero.
    """
    region = data.region
    edges = region.edges()
    edge_index = {e.name: i for i, e in enumerate(edges)}
    wheel = _wheel_vectors(region)

    # Cyclic order of all branch points along the boundary polygon.
    branch_points = []
    for ci, crossing in enumerate(data.crossings):
        for family, germ in (("h", crossing.branch_h), ("v", crossing.branch_v)):
            q = (
                crossing.position[0] + germ.lift[0],
                crossing.position[1] + germ.lift[1],
            )
            seg = edges[edge_index[germ.edge]]
            d = seg.direction
            s = _dot(_vsub(q, seg.start), d) / _dot(d, d)
            if not 0 < s < 1 or not _point_on_segment(q, seg):
                raise DegenerateConfiguration(
                    "branch point drifted off its boundary edge",
                    detail={"crossing": ci, "edge": germ.edge},
                )
            branch_points.append(((edge_index[germ.edge], s), ci, family))
    branch_points.sort(key=lambda item: item[0])
    if len({item[0] for item in branch_points}) != len(branch_points):
        raise DegenerateConfiguration("two branch points share a boundary position")
    slot = {
        (ci, family): idx for idx, (_, ci, family) in enumerate(branch_points)
    }
    count = len(branch_points)

    def germ_of(ci: int, widx: int) -> BranchGerm:
        crossing = data.crossings[ci]
        return crossing.branch_h if widx % 2 == 0 else crossing.branch_v

    def next_dart(ci: int, widx: int) -> tuple[int, int]:
        germ = germ_of(ci, widx)
        forward = wheel[widx] == germ.tangent
        family = "h" if widx % 2 == 0 else "v"
        idx = slot[(ci, family)]
        step = 1 if forward else -1
        _, cj, fam_j = branch_points[(idx + step) % count]
        arrive_tangent = data.crossings[cj].branch_h.tangent if fam_j == "h" else data.crossings[cj].branch_v.tangent
        arrival_dir = arrive_tangent if forward else _vneg(arrive_tangent)
        reverse_idx = _wheel_index(region, _vneg(arrival_dir))
        return (cj, (reverse_idx - 1) % 4)

    # Orbits of the left-face successor are the chambers; the sector
    # between wheel direction s and its counterclockwise neighbour at a
    # crossing belongs to the orbit of the dart leaving along s.
    chamber_of: dict[tuple[int, int], int] = {}
    orbits = 0
    for ci in range(len(data.crossings)):
        for widx in range(4):
            if (ci, widx) in chamber_of:
                continue
            label = orbits
            orbits += 1
            cur = (ci, widx)
            while cur not in chamber_of:
                chamber_of[cur] = label
                cur = next_dart(*cur)
            if chamber_of[cur] != label:
                raise DegenerateConfiguration("face tracing produced a broken orbit")

    degrees: dict[int, int] = {}
    sector_chambers = []
    for ci, crossing in enumerate(data.crossings):
        t1 = crossing.branch_h.tangent
        t2 = crossing.branch_v.tangent
        sectors = []
        for s in range(4):
            w = _vadd(wheel[s], wheel[(s + 1) % 4])
            deg = crossing.k
            if _cross(t1, w) > 0:
                deg += 1
            if _cross(t2, w) > 0:
                deg += 1
            chamber = chamber_of[(ci, s)]
            if degrees.setdefault(chamber, deg) != deg:
                raise DegenerateConfiguration(
                    "covering degree disagrees across chamber corners",
                    detail={"chamber": chamber, "crossing": ci},
                )
            sectors.append(chamber)
        if len(set(sectors)) != 4:
            raise DegenerateConfiguration(
                "a chamber meets one crossing in two sectors",
                detail={"crossing": ci},
            )
        sector_chambers.append(tuple(sectors))

    chamber_labels = sorted(degrees)
    nu_values = nu_numbering([(0, degrees[c]) for c in chamber_labels], modulus)
    nu = dict(zip(chamber_labels, nu_values))

    corner_cycle = ((0, 0), (1, 0), (1, 1), (0, 1))
    cells = []
    for sectors in sector_chambers:
        labels = {
            (corner_cycle[s], 0): sectors[s] for s in range(4)
        }
        cells.append(
            ProductCell(
                cube_dim=2,
                simplex_dim=0,
                labels=labels,
                nu={sectors[s]: nu[sectors[s]] for s in range(4)},
            )
        )
    complex_ = assemble_triangulation(cells)
    return ChamberComplex(
        chamber_count=orbits,
        degrees=tuple(degrees[c] for c in chamber_labels),
        sector_chambers=tuple(sector_chambers),
        cells=tuple(cells),
        complex=complex_,
        chi=complex_.euler_characteristic(),
    )


# ====== box combinatorics ======


@dataclass(frozen=True)
class FolnerBox:
    """Axis box of unit cells {0..width-1} x {0..height-1}."""

    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise MalformedInput("box sides must be positive")

    def cells(self) -> set[tuple[int, int]]:
        return {(i, j) for i in range(self.width) for j in range(self.height)}

    def boundary_edge_count(self) -> int:
        return 2 * (self.width + self.height)


def folner_ratio(cells: set, shift: tuple[int, int] = (1, 0)) -> Fraction:
    """Symmetric difference of a cell set with its translate, over its size.

    For the L x L box and a unit shift this is 2/L: the difference is the
    leading and trailing column (or row).
    """
    cells = set(cells)
    if not cells:
        raise EmptySet("the averaging cell set is empty")
    moved = {(c[0] + shift[0], c[1] + shift[1]) for c in cells}
    return Fraction(len(moved ^ cells), len(cells))


def cayley_ball(radius: int, generators: Sequence[tuple[int, int]] = ((1, 0), (-1, 0), (0, 1), (0, -1))) -> set:
    """Word-metric ball around the origin for the given generating set."""
    if radius < 0:
        raise MalformedInput("radius must be nonnegative")
    ball = {(0, 0)}
    frontier = {(0, 0)}
    for _ in range(radius):
        frontier = {
            (p[0] + g[0], p[1] + g[1]) for p in frontier for g in generators
        } - ball
        ball |= frontier
    return ball


def moore_ball(radius: int) -> set:
    """Chebyshev ball: all cells within radius in both coordinates."""
    if radius < 0:
        raise MalformedInput("radius must be nonnegative")
    return {
        (i, j)
        for i in range(-radius, radius + 1)
        for j in range(-radius, radius + 1)
    }


def check_neighborhood(box: FolnerBox, covered: set, thickness: int = 1) -> bool:
    """Whether every cell of the box has its full Chebyshev neighbourhood
    of the given thickness inside the covered cell set."""
    ball = moore_ball(thickness)
    return all(
        (c[0] + b[0], c[1] + b[1]) in covered
        for c in box.cells()
        for b in ball
    )


def folner_report(L: int, thickness: int = 1) -> dict:
    """Box statistics plus the region-coverage neighbourhood check."""
    region = build_region(L)
    inner, boundary = region_cells(region)
    box = FolnerBox(L, L)
    covered = set(inner) | set(boundary)
    return {
        "L": L,
        "ratio": folner_ratio(box.cells()),
        "ball_sizes": tuple(len(cayley_ball(r)) for r in (0, 1, 2)),
        "neighborhood_ok": check_neighborhood(box, covered, thickness),
        "n_inner": len(inner),
        "n_boundary": len(boundary),
    }
