"""Local combinatorial formula for the Euler number of a flat sphere bundle.

At an n-fold transverse self-intersection of the projected quasisection
boundary, the fiber sees two kinds of sheets: n *bordered* sheets (one per
boundary branch, available only on the inner side of that branch) and
k >= 1 *regular* sheets (available on the whole neighbourhood). The n+1
chambers cut out around the intersection carry nested availability sets,
one nested chain per order in which the branches are crossed.

The machinery in this module evaluates, entirely in exact rational
arithmetic:

* ``essential_tuples`` / ``vertex_weight``: the tuples (r_j, a_1, ..., a_n)
  with exactly one regular entry that span the origin, their indices, and
  the resulting weight (NC_plus - NC_minus) / (k (k+1) ... (k+n));
* ``direct_vertex_expectation``: the signed average of configuration
  indices over one chamber chain, which equals the vertex weight tuple by
  tuple cancellation makes every non-essential contribution vanish;
* ``cancellation_audit``: the explicit three-class partition behind that
  cancellation (repetition tuples, matched pairs, essential tuples);
* ``euler_number``: n! times the sum of the weights over a crossing list;
* ``sullivan_bound``: the a-priori bound n! * X * K / (k (k+1) ... (k+n));
* ``parallel_vertex_expectation``: the same average when the sheet at each
  chamber is drawn from one of N >= n+1 parallel quasisections chosen by a
  uniformly random injective colouring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations, product
from math import factorial
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegenerateConfiguration,
    DimensionMismatch,
    EmptySet,
    InvalidCounts,
    TooFewQuasisections,
    TypeMismatch,
)
from .exactgeom import RayVector, canonicalize, configuration_index, det_int, is_antipodally_generic

#: A sheet label: ("a", i) for the i-th bordered sheet, ("r", j) for the
#: j-th regular sheet, both 1-based.
Label = tuple[str, int]


def permutation_sign(sigma: Sequence[int]) -> int:
    """Parity sign of a permutation given as a tuple of its values."""
    inversions = 0
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if sigma[i] > sigma[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class CrossingConfiguration:
    """Fiber data over one self-intersection point.

    ``bordered`` lists the sheets of the m crossing branches in the
    orientation-compatible order, ``regular`` the k interior sheets. The
    crossing is *full* (type I) when m equals the base dimension n; only
    full crossings contribute to the Euler number.
    """

    dim: int
    bordered: tuple[RayVector, ...]
    regular: tuple[RayVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "bordered", tuple(canonicalize(v) for v in self.bordered))
        object.__setattr__(self, "regular", tuple(canonicalize(v) for v in self.regular))
        if self.dim < 2:
            raise DimensionMismatch("crossings live over a base of dimension >= 2")
        for v in self.bordered + self.regular:
            if v.dim != self.dim:
                raise DimensionMismatch(
                    f"sheet ray dimension {v.dim} does not match base dimension {self.dim}"
                )
        if len(self.bordered) > self.dim:
            raise TypeMismatch(
                f"{len(self.bordered)} bordered sheets exceed the base dimension {self.dim}"
            )
        if not self.bordered:
            raise TypeMismatch("a crossing has at least one bordered sheet")
        if not self.regular:
            raise EmptySet("a crossing needs at least one regular sheet")

    @property
    def branch_count(self) -> int:
        return len(self.bordered)

    @property
    def regular_count(self) -> int:
        return len(self.regular)

    @property
    def is_full(self) -> bool:
        return len(self.bordered) == self.dim

    @cached_property
    def is_generic(self) -> bool:
        return is_antipodally_generic(self.bordered + self.regular)

    def labels(self) -> tuple[Label, ...]:
        return tuple(("a", i + 1) for i in range(len(self.bordered))) + tuple(
            ("r", j + 1) for j in range(len(self.regular))
        )

    def point(self, label: Label) -> RayVector:
        kind, idx = label
        if kind == "a":
            return self.bordered[idx - 1]
        if kind == "r":
            return self.regular[idx - 1]
        raise KeyError(label)

    def _require_generic(self) -> None:
        if not self.is_generic:
            raise DegenerateConfiguration(
                "configuration fails antipodal genericity: some n-subset of "
                "sheet rays is linearly dependent",
                detail={"points": tuple(v.coords for v in self.bordered + self.regular)},
            )


@dataclass(frozen=True)
class ChamberChain:
    """A nested chain of sheet availability sets S_0 c= S_1 c= ... c= S_n.

    S_0 holds the regular sheets; step i adds the bordered sheet
    a_sigma(i) when it exists (for a partial crossing the chain stalls
    once the bordered sheets are exhausted).
    """

    sigma: tuple[int, ...]
    sheets: tuple[frozenset, ...]

    @classmethod
    def from_configuration(cls, cc: CrossingConfiguration, sigma: Sequence[int]) -> "ChamberChain":
        sigma = tuple(sigma)
        if sorted(sigma) != list(range(1, cc.dim + 1)):
            raise TypeMismatch(
                f"sigma must be a permutation of 1..{cc.dim}, got {sigma}"
            )
        current = frozenset(("r", j + 1) for j in range(cc.regular_count))
        sheets = [current]
        for i in sigma:
            if i <= cc.branch_count:
                current = current | {("a", i)}
            sheets.append(current)
        return cls(sigma=sigma, sheets=tuple(sheets))

    @property
    def sign(self) -> int:
        return permutation_sign(self.sigma)


def all_chains(cc: CrossingConfiguration) -> tuple[ChamberChain, ...]:
    """The n! chamber chains of a crossing, in lexicographic sigma order."""
    return tuple(
        ChamberChain.from_configuration(cc, sigma)
        for sigma in permutations(range(1, cc.dim + 1))
    )


@dataclass(frozen=True)
class EssentialTuple:
    """A spanning tuple (r_j, a_1, ..., a_n) together with its index."""

    regular_index: int
    sign: int


class _IndexEvaluator:
    """Configuration indices over a fixed point pool, with determinant cache.

    Keys are sortable labels; the cofactor determinant of an n-subset is
    cached in sorted key order and corrected by permutation parity, so the
    inner loops of the averaging operations stay cheap.
    """

    def __init__(self, points: Mapping, dim: int):
        self._coords = {key: canonicalize(p).coords for key, p in points.items()}
        self._dim = dim
        self._dets: dict = {}

    def _sorted_det(self, keys: tuple) -> int:
        d = self._dets.get(keys)
        if d is None:
            cols = [self._coords[k] for k in keys]
            d = det_int([[c[r] for c in cols] for r in range(self._dim)])
            self._dets[keys] = d
        return d

    def index(self, keys: Sequence) -> int:
        """Index of the tuple of pooled points named by distinct keys."""
        n = self._dim
        pos = neg = False
        for i in range(n + 1):
            sub = keys[:i] + keys[i + 1:]
            ordered = tuple(sorted(sub))
            d = self._sorted_det(ordered)
            if d == 0:
                raise DegenerateConfiguration(
                    f"dependent sheet subset {sub}",
                    detail={"entry": i, "points": tuple(self._coords[k] for k in sub)},
                )
            s = 1 if d > 0 else -1
            if permutation_sign(tuple(ordered.index(k) for k in sub)) < 0:
                s = -s
            if i % 2 == 1:
                s = -s
            if s > 0:
                pos = True
            else:
                neg = True
            if pos and neg:
                return 0
        return 1 if pos else -1


def essential_tuples(cc: CrossingConfiguration) -> tuple[EssentialTuple, ...]:
    """All spanning single-regular tuples (r_j, a_1, ..., a_n) with signs."""
    if not cc.is_full:
        raise TypeMismatch(
            f"essential tuples need a full crossing: {cc.branch_count} branches "
            f"over base dimension {cc.dim}"
        )
    cc._require_generic()
    out = []
    for j, r in enumerate(cc.regular, start=1):
        sign = configuration_index((r,) + cc.bordered)
        if sign != 0:
            out.append(EssentialTuple(regular_index=j, sign=sign))
    return tuple(out)


def _weight_denominator(k: int, n: int) -> int:
    den = 1
    for i in range(n + 1):
        den *= k + i
    return den


def vertex_weight(cc: CrossingConfiguration) -> Fraction:
    """(NC_plus - NC_minus) / (k (k+1) ... (k+n)) for a full crossing."""
    ess = essential_tuples(cc)
    num = sum(t.sign for t in ess)
    return Fraction(num, _weight_denominator(cc.regular_count, cc.dim))


def _chain_expectation_unsigned(chain: ChamberChain, cc: CrossingConfiguration) -> Fraction:
    """Average of configuration indices over one chain, without sign(sigma)."""
    cc._require_generic()
    evaluator = _IndexEvaluator({lab: cc.point(lab) for lab in cc.labels()}, cc.dim)
    cells = [tuple(sorted(s)) for s in chain.sheets]
    denominator = 1
    for cell in cells:
        denominator *= len(cell)
    total = 0
    for combo in product(*cells):
        if len(set(combo)) < len(combo):
            continue  # repeated sheet: the filling sits in a hemisphere
        total += evaluator.index(combo)
    return Fraction(total, denominator)


def direct_vertex_expectation(chain: ChamberChain, cc: CrossingConfiguration) -> Fraction:
    """sign(sigma) times the average index over the chain's sheet tuples.

    For a full crossing this equals ``vertex_weight(cc)`` for every chain;
    for a partial crossing it vanishes.
    """
    return chain.sign * _chain_expectation_unsigned(chain, cc)


def sign_stripped_chain_total(cc: CrossingConfiguration) -> Fraction:
    """Chain totals of a deliberately broken build: no permutation signs.

    Sums, over every chamber chain, the tuple average computed without
    either permutation-sign factor: the chain's sign(sigma) is omitted and
    each tuple's index is read off in label-sorted order, discarding the
    antisymmetry that makes reordered tuples cancel. The correct build
    returns n! * vertex_weight here; this one does not, and totals built
    from it stop being integers, which is exactly how the integrality
    invariant exposes a sign-convention bug. Note that omitting only
    sign(sigma) would be invisible: the unsigned chain averages are
    sign(sigma) * vertex_weight, and the signs over all n! chains cancel
    to an exact zero.
    """
    cc._require_generic()
    evaluator = _IndexEvaluator({lab: cc.point(lab) for lab in cc.labels()}, cc.dim)
    total = Fraction(0)
    for chain in all_chains(cc):
        cells = [tuple(sorted(s)) for s in chain.sheets]
        denominator = 1
        for cell in cells:
            denominator *= len(cell)
        acc = 0
        for combo in product(*cells):
            if len(set(combo)) < len(combo):
                continue
            acc += evaluator.index(tuple(sorted(combo)))
        total += Fraction(acc, denominator)
    return total


def _matched_partner(combo: tuple) -> tuple:
    """Swap the entries at the first two regular positions of the tuple."""
    regs = [i for i, lab in enumerate(combo) if lab[0] == "r"]
    i, j = regs[0], regs[1]
    out = list(combo)
    out[i], out[j] = out[j], out[i]
    return tuple(out)


@dataclass(frozen=True)
class CancellationAudit:
    """Tuple-class census for one chamber chain.

    ``cancelling_index_sum`` totals the indices over repetition tuples and
    matched pairs; it must be zero. Essential tuples are left over, and
    their signed sum over the chain reproduces the weight numerator.
    """

    repetition_count: int
    matched_pair_count: int
    essential_count: int
    cancelling_index_sum: int
    essential_index_sum: int
    denominator: int


def cancellation_audit(chain: ChamberChain, cc: CrossingConfiguration) -> CancellationAudit:
    """Partition one chain's tuples into the three cancellation classes."""
    cc._require_generic()
    evaluator = _IndexEvaluator({lab: cc.point(lab) for lab in cc.labels()}, cc.dim)
    cells = [tuple(sorted(s)) for s in chain.sheets]
    denominator = 1
    for cell in cells:
        denominator *= len(cell)
    repetition = 0
    matched = 0
    essential = 0
    cancelling_sum = 0
    essential_sum = 0
    for combo in product(*cells):
        if len(set(combo)) < len(combo):
            repetition += 1
            continue  # index 0 by the repeated-point rule
        regulars = sum(1 for lab in combo if lab[0] == "r")
        idx = evaluator.index(combo)
        if regulars >= 2:
            matched += 1
            cancelling_sum += idx
        else:
            essential += 1
            essential_sum += idx
    if matched % 2:
        raise DegenerateConfiguration(
            "matched tuples do not pair up; the chain is inconsistent"
        )
    return CancellationAudit(
        repetition_count=repetition,
        matched_pair_count=matched // 2,
        essential_count=essential,
        cancelling_index_sum=cancelling_sum,
        essential_index_sum=essential_sum,
        denominator=denominator,
    )


def euler_number(crossings: Iterable[CrossingConfiguration], n: int) -> Fraction:
    """n! times the sum of vertex weights over the crossing list."""
    total = Fraction(0)
    for i, cc in enumerate(crossings):
        if cc.dim != n:
            raise DimensionMismatch(
                f"crossing {i} has base dimension {cc.dim}, expected {n}"
            )
        if not cc.is_full:
            raise TypeMismatch(
                f"crossing {i} is partial ({cc.branch_count} of {n} branches); "
                "only full crossings enter the formula"
            )
        total += vertex_weight(cc)
    return factorial(n) * total


def sullivan_bound(crossing_count: int, k_min: int, k_max: int, n: int) -> Fraction:
    """A-priori bound n! * X * K / (k (k+1) ... (k+n)) on |euler_number|."""
    if crossing_count < 0:
        raise InvalidCounts(f"negative crossing count {crossing_count}")
    if crossing_count == 0:
        return Fraction(0)
    if k_min < 1:
        raise InvalidCounts(f"minimal sheet count {k_min} must be >= 1")
    if k_max < k_min:
        raise InvalidCounts(f"k_max {k_max} below k_min {k_min}")
    return Fraction(
        factorial(n) * crossing_count * k_max, _weight_denominator(k_min, n)
    )


@dataclass(frozen=True)
class EulerReport:
    """Pipeline summary: the exact formula value and its a-priori bound.

    ``n_inner`` and ``n_boundary`` count the fundamental domains fully
    inside, respectively meeting but not inside, the quasisection region.
    Bound soundness (|formula_value| <= bound) holds for every healthy
    run and is checked by the verification suite rather than here, so
    that deliberately mutated runs can still be reported and flagged.
    """

    formula_value: Fraction
    bound: Fraction
    crossings: int
    k_min: int
    k_max: int
    n_inner: int
    n_boundary: int

    def is_bound_sound(self) -> bool:
        return abs(self.formula_value) <= self.bound


def parallel_vertex_expectation(
    configs: Sequence[CrossingConfiguration], chain: ChamberChain
) -> Fraction:
    """Signed average index under random injective quasisection colouring.

    The N configurations describe parallel quasisections sharing the
    bordered branch structure. A colouring assigns distinct quasisections
    to the n+1 chambers uniformly at random; each chamber then draws a
    uniform sheet from its availability set, realized by the points of its
    assigned quasisection. The exact expectation of sign(sigma) times the
    index is returned; its absolute value never exceeds
    k / (k (k+1) ... (k+n)).
    """
    configs = tuple(configs)
    if not configs:
        raise TooFewQuasisections("no quasisections given")
    base = configs[0]
    n = base.dim
    if len(configs) < n + 1:
        raise TooFewQuasisections(
            f"{len(configs)} quasisections cannot colour {n + 1} chambers injectively"
        )
    for cc in configs:
        if cc.dim != n or not cc.is_full or cc.regular_count != base.regular_count:
            raise TypeMismatch(
                "parallel quasisections must share the bordered branch "
                "structure and sheet counts"
            )
    pool = {
        (lab, q): cc.point(lab)
        for q, cc in enumerate(configs)
        for lab in cc.labels()
    }
    if not is_antipodally_generic(tuple(pool.values())):
        raise DegenerateConfiguration(
            "the union of the parallel sheet rays fails antipodal genericity"
        )
    evaluator = _IndexEvaluator(pool, n)
    cells = [tuple(sorted(s)) for s in chain.sheets]
    denominator = 1
    for cell in cells:
        denominator *= len(cell)
    total = 0
    colourings = list(permutations(range(len(configs)), n + 1))
    for colouring in colourings:
        for combo in product(*cells):
            keys = tuple((lab, q) for lab, q in zip(combo, colouring))
            total += evaluator.index(keys)
    return chain.sign * Fraction(total, denominator * len(colourings))
