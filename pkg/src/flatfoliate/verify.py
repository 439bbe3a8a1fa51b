"""Runnable invariant suites over deterministic fixtures.

Each suite returns CheckResult records; the command line front end
prints one line per check and fails the process when any check fails.
The optional sign mutation reruns the torus pipeline with every
permutation-sign factor stripped from the chain sums, which must break
integrality of the total; it exists so that a silent sign-convention
regression cannot pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from random import Random

from .exactgeom import (
    configuration_index,
    fits_open_hemisphere,
    radial_filling_degree,
    radial_filling_degree_auto,
    winding_degree_2d,
)
from . import fixtures
from .localformula import (
    all_chains,
    cancellation_audit,
    direct_vertex_expectation,
    euler_number,
    parallel_vertex_expectation,
    sullivan_bound,
    vertex_weight,
)
from .toruslab import (
    FolnerBox,
    boundary_crossings,
    cayley_ball,
    check_neighborhood,
    euler_estimate,
    folner_ratio,
    n2_geometric_vertex_expectations,
    standard_rotation_pair,
    torus_dual_complex,
)
from .triangulations import (
    ProductCell,
    assemble_triangulation,
    induced_cube_marks,
    kuhn_triangulation,
    nu_numbering,
    restrict_to_face,
    staircase_triangulation,
)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def _check(out: list, suite: str, name: str, passed: bool, detail: str = "") -> None:
    out.append(CheckResult(suite=suite, name=name, passed=bool(passed), detail=detail))


def verify_indices(seed: int = 20260823) -> list[CheckResult]:
    out: list[CheckResult] = []
    suite = "indices"
    interior = fixtures.interior_triple()
    hemi = fixtures.hemisphere_triple()
    _check(out, suite, "interior triple has index +1", configuration_index(interior) == 1)
    _check(out, suite, "skew triple has index +1", configuration_index(fixtures.skew_interior_triple()) == 1)
    _check(out, suite, "half-circle triple has index 0", configuration_index(hemi) == 0)
    _check(out, suite, "winding oracle agrees on the interior triple", winding_degree_2d(interior) == 1)
    _check(
        out,
        suite,
        "radial oracle, two probes on the interior triple",
        radial_filling_degree(interior, (1, 1)) == 1
        and radial_filling_degree(interior, (-1, -1)) == 1,
    )
    _check(out, suite, "radial oracle on the half-circle triple", radial_filling_degree(hemi, (0, -1)) == 0)
    _check(out, suite, "half-circle triple fits an open half circle", fits_open_hemisphere(hemi))
    _check(out, suite, "interior triple fits no open half circle", not fits_open_hemisphere(interior))
    triples = fixtures.circle_triples(60, seed=seed)
    bad = sum(
        1
        for t in triples
        if not (
            configuration_index(t)
            == winding_degree_2d(t)
            == radial_filling_degree_auto(t)
        )
    )
    _check(out, suite, "60 circle triples: index == winding == radial", bad == 0, f"{bad} disagreements")
    law = sum(
        1
        for t in triples
        if (configuration_index(t) != 0) != (not fits_open_hemisphere(t))
    )
    _check(out, suite, "60 circle triples: spanning == no half circle", law == 0, f"{law} violations")
    tuples = fixtures.radial_tuples(30, seed=seed + 1)
    bad = sum(
        1 for t in tuples if configuration_index(t) != radial_filling_degree_auto(t)
    )
    _check(out, suite, "30 radial tuples in dims 2..4 agree", bad == 0, f"{bad} disagreements")
    return out


def verify_aggregation(seed: int = 20260823) -> list[CheckResult]:
    out: list[CheckResult] = []
    suite = "aggregation"
    single = fixtures.single_crossing_config()
    _check(out, suite, "one-sheet crossing has weight 1/6", vertex_weight(single) == Fraction(1, 6))
    dves = [direct_vertex_expectation(c, single) for c in all_chains(single)]
    _check(
        out,
        suite,
        "both chains give the 1/6 expectation directly",
        dves == [Fraction(1, 6), Fraction(1, 6)],
    )
    _check(out, suite, "one-crossing Euler number is 1/3", euler_number([single], 2) == Fraction(1, 3))
    audit = cancellation_audit(all_chains(single)[0], single)
    _check(
        out,
        suite,
        "cancellation census is 5 repetitions, 0 pairs, 1 essential",
        (audit.repetition_count, audit.matched_pair_count, audit.essential_count) == (5, 0, 1),
    )
    _check(out, suite, "two-sheet crossing has weight 1/24", vertex_weight(fixtures.two_regular_config()) == Fraction(1, 24))
    partial = fixtures.partial_crossing_config()
    total = sum(direct_vertex_expectation(c, partial) for c in all_chains(partial))
    _check(out, suite, "partial crossing chain expectations cancel", total == 0)
    _check(out, suite, "bound example 2*10*5/(3*4*5) = 5/3", sullivan_bound(10, 3, 5, 2) == Fraction(5, 3))
    rng = Random(seed)
    failures = 0
    for _ in range(24):
        n = rng.choice((2, 3))
        k = rng.randint(1, 3)
        cfg = fixtures.random_full_configuration(rng, n, k)
        chains = all_chains(cfg)
        if sum(direct_vertex_expectation(c, cfg) for c in chains) != factorial(n) * vertex_weight(cfg):
            failures += 1
    _check(out, suite, "24 random crossings: chains aggregate to n! * weight", failures == 0, f"{failures} failures")
    failures = 0
    for _ in range(12):
        n = 2
        k = rng.randint(1, 3)
        qs = rng.choice((n + 1, n + 2))
        family = fixtures.parallel_family(rng, n, k, qs)
        cap = Fraction(k, 1)
        for i in range(n + 1):
            cap /= k + i
        for chain in all_chains(family[0]):
            if abs(parallel_vertex_expectation(family, chain)) > cap:
                failures += 1
    _check(out, suite, "12 parallel families respect the k/(k..k+n) cap", failures == 0, f"{failures} failures")
    return out


def verify_triangulations(seed: int = 20260823) -> list[CheckResult]:
    out: list[CheckResult] = []
    suite = "triangulations"
    st = staircase_triangulation(2, 2)
    vols = st.maximal_volumes()
    _check(
        out,
        suite,
        "staircase(2,2): 6 simplices of volume 1/24",
        len(st.maximal_simplices) == 6 and set(vols) == {Fraction(1, 24)},
    )
    ku = kuhn_triangulation(3)
    vols = ku.maximal_volumes()
    _check(
        out,
        suite,
        "cube(3): 6 simplices of volume 1/6 filling the cube",
        len(ku.maximal_simplices) == 6 and set(vols) == {Fraction(1, 6)} and sum(vols) == 1,
    )
    _check(out, suite, "numbering example: cell 2 at degree 3, modulus 10, is 32", nu_numbering([(2, 3)], 10) == (32,))
    sub = restrict_to_face(st, {(r, c) for r in (0, 1) for c in (0, 2)})
    fresh = staircase_triangulation(1, 1).relabeled(
        {(i, j): ((0, 1)[i], (0, 2)[j]) for i in (0, 1) for j in (0, 1)}
    )
    _check(out, suite, "staircase face restriction is the face staircase", sub.same_triangulation(fresh))
    face = {v for v in ku.vertices if v[0] == 1}
    sub = restrict_to_face(ku, face)
    marks = induced_cube_marks(((0, 0, 0), (1, 1, 1)), {0: 1})
    fresh = kuhn_triangulation(2, marked=((0, 0), (1, 1))).relabeled(
        {(b0, b1): (1, b0, b1) for b0 in (0, 1) for b1 in (0, 1)}
    )
    _check(
        out,
        suite,
        "cube face restriction is the face triangulation with pushed marks",
        sub.same_triangulation(fresh) and sub.cell.marked == marks,
    )
    cells = []
    for off in (0, 1):
        labels = {
            ((b,), s): (off + b, s) for b in (0, 1) for s in (0, 1)
        }
        nu = {(i, j): i + 3 * j for i in (off, off + 1) for j in (0, 1)}
        coords = {(i, j): (Fraction(i), Fraction(j)) for i in (off, off + 1) for j in (0, 1)}
        cells.append(
            ProductCell(cube_dim=1, simplex_dim=1, labels=labels, nu=nu, coords=coords)
        )
    assembled = assemble_triangulation(cells)
    vols = assembled.maximal_volumes()
    _check(
        out,
        suite,
        "two glued squares: 4 triangles on 6 vertices, total area 2",
        len(assembled.maximal_simplices) == 4
        and len(assembled.vertices) == 6
        and set(vols) == {Fraction(1, 2)}
        and sum(vols) == 2,
    )
    return out


def verify_torus(size: int = 2, mutate_sign: bool = False) -> list[CheckResult]:
    out: list[CheckResult] = []
    suite = "torus"
    hol = standard_rotation_pair()
    data = boundary_crossings(hol, size)
    report = euler_estimate(data, drop_orientation_sign=mutate_sign)
    box = {(i, j) for i in range(size) for j in range(size)}
    _check(
        out,
        suite,
        f"L={size}: inner cells are exactly the box cells",
        set(data.inner_cells) == box,
        f"{len(data.inner_cells)} inner cells",
    )
    _check(
        out,
        suite,
        f"L={size}: boundary cells form the one-cell collar",
        len(data.boundary_cells) == (size + 2) ** 2 - size**2,
        f"{len(data.boundary_cells)} boundary cells",
    )
    _check(out, suite, f"L={size}: some crossings were found", report.crossings > 0, f"{report.crossings}")
    _check(
        out,
        suite,
        f"L={size}: formula total is an integer",
        report.formula_value.denominator == 1,
        f"total {report.formula_value}",
    )
    _check(
        out,
        suite,
        f"L={size}: formula total vanishes",
        report.formula_value == 0,
        f"total {report.formula_value}",
    )
    _check(
        out,
        suite,
        f"L={size}: bound is positive and dominates",
        report.bound > 0 and abs(report.formula_value) <= report.bound,
    )
    bad = 0
    for crossing, cfg in zip(data.crossings, data.configurations):
        geo = n2_geometric_vertex_expectations(crossing, cfg)
        for chain, value in geo:
            if value != direct_vertex_expectation(chain, cfg):
                bad += 1
        if sum(v for _, v in geo) != 2 * vertex_weight(cfg):
            bad += 1
    _check(
        out,
        suite,
        f"L={size}: chamber geometry arbitrates every chain sign",
        bad == 0,
        f"{bad} disagreements",
    )
    chambers = torus_dual_complex(data)
    _check(
        out,
        suite,
        f"L={size}: chamber complex closes up with Euler characteristic 0",
        chambers.chi == 0,
        f"chi {chambers.chi}, {chambers.chamber_count} chambers",
    )
    box_obj = FolnerBox(size, size)
    covered = set(data.inner_cells) | set(data.boundary_cells)
    _check(
        out,
        suite,
        f"L={size}: box ratio is 2/L and the thickened box is covered",
        folner_ratio(box_obj.cells()) == Fraction(2, size)
        and check_neighborhood(box_obj, covered, 1),
    )
    _check(
        out,
        suite,
        "word balls of radius 0,1,2 have 1,5,13 cells",
        [len(cayley_ball(r)) for r in (0, 1, 2)] == [1, 5, 13],
    )
    return out


def run_all(seed: int = 20260823, mutate_sign: bool = False, torus_size: int = 2) -> list[CheckResult]:
    results: list[CheckResult] = []
    results.extend(verify_indices(seed))
    results.extend(verify_aggregation(seed))
    results.extend(verify_triangulations(seed))
    results.extend(verify_torus(torus_size, mutate_sign=mutate_sign))
    return results
