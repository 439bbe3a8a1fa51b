"""Flat circle bundles over the torus: holonomy, crossings, decay, boxes."""

from fractions import Fraction
from random import Random

import pytest

from flatfoliate.errors import (
    EmptySet,
    GenericityExhausted,
    MalformedInput,
    NonCommuting,
)
from flatfoliate.exactgeom import RayVector, orientation_sign
from flatfoliate.localformula import all_chains, direct_vertex_expectation, vertex_weight
from flatfoliate.toruslab import (
    FolnerBox,
    HolonomyPair,
    Mat2,
    boundary_crossings,
    build_region,
    cayley_ball,
    cell_status,
    check_neighborhood,
    decay_experiment,
    diagonal_pair,
    euler_estimate,
    folner_ratio,
    folner_report,
    identity_pair,
    moore_ball,
    n2_geometric_vertex_expectations,
    region_cells,
    standard_rotation_pair,
    torus_dual_complex,
    unipotent_pair,
)


# ---- holonomy ----


def test_mat2_arithmetic():
    a = Mat2.of(1, 2, 3, 4)
    assert a.det() == -2
    assert a @ Mat2.identity() == a
    assert a @ a.inverse() == Mat2.identity()
    assert a**0 == Mat2.identity()
    assert a**-1 == a.inverse()
    assert (a**3) == a @ a @ a
    with pytest.raises(MalformedInput):
        Mat2.of(1, 1, 1, 1).inverse()


def test_holonomy_pair_validation():
    with pytest.raises(MalformedInput):
        HolonomyPair(Mat2.of(2, 0, 0, 1), Mat2.identity())
    with pytest.raises(NonCommuting):
        HolonomyPair(Mat2.of(1, 1, 0, 1), Mat2.of(1, 0, 1, 1))


def test_holonomy_is_a_homomorphism():
    hol = standard_rotation_pair()
    rng = Random(17)
    for _ in range(60):
        g = (rng.randint(-6, 6), rng.randint(-6, 6))
        h = (rng.randint(-6, 6), rng.randint(-6, 6))
        gh = (g[0] + h[0], g[1] + h[1])
        assert hol.holonomy(gh) == hol.holonomy(g) @ hol.holonomy(h)


def test_sheet_ray_values():
    hol = standard_rotation_pair()
    assert hol.sheet_ray((0, 0), RayVector((1, 0))) == RayVector((1, 0))
    assert hol.sheet_ray((1, 0), RayVector((1, 0))) == RayVector((3, -4))
    assert hol.sheet_ray((0, 1), RayVector((1, 0))) == RayVector((5, -12))


# ---- region geometry ----


def test_build_region_is_deterministic():
    assert build_region(3) == build_region(3)
    assert build_region(3, attempt=1) != build_region(3)


def test_region_cell_census():
    for L in (2, 3, 5):
        region = build_region(L)
        inner, boundary = region_cells(region)
        assert len(inner) == L * L
        assert len(boundary) == (L + 2) ** 2 - L * L
        assert cell_status(region, (0, 0)) == "inner"
        assert cell_status(region, (-1, -1)) == "boundary"
        assert cell_status(region, (-3, 0)) == "outside"


def test_extract_crossings_snapshot(torus_run):
    data, _, _ = torus_run(2)
    assert len(data.crossings) == 24
    positions = {c.position for c in data.crossings}
    assert len(positions) == 24
    for crossing in data.crossings:
        assert 4 <= crossing.k <= 7
        first, second = crossing.ordered_branches()
        # the ordered branch frame is positively oriented
        assert (
            orientation_sign(
                (RayVector(first.tangent), RayVector(second.tangent))
            )
            == 1
        )


def test_pipeline_snapshot_L2(torus_run):
    data, report, _ = torus_run(2)
    assert data.v0 == RayVector((1, 0))
    assert data.ray_attempts == 1
    assert report.crossings == 24
    assert (report.k_min, report.k_max) == (4, 7)
    assert report.formula_value == 0
    assert report.bound == Fraction(14, 5)
    assert (report.n_inner, report.n_boundary) == (4, 12)
    assert report.is_bound_sound()


def test_formula_vanishes_at_L3(torus_run):
    _, report, _ = torus_run(3)
    assert report.formula_value == 0
    assert report.k_min == 9
    assert report.n_inner == 9 and report.n_boundary == 16


def test_sign_mutation_breaks_integrality(torus_run):
    data, _, _ = torus_run(2)
    mutated = euler_estimate(data, drop_orientation_sign=True)
    assert mutated.formula_value == Fraction(-82, 21)
    assert mutated.formula_value.denominator != 1
    assert not mutated.is_bound_sound()


def test_decay_experiment_bounds_shrink():
    results = decay_experiment(standard_rotation_pair(), sizes=(2, 3))
    bounds = [report.bound for _, report in results]
    assert all(report.formula_value == 0 for _, report in results)
    assert bounds[1] < bounds[0]


def test_schedule_start_changes_ray_but_not_result():
    data = boundary_crossings(standard_rotation_pair(), 2, schedule_start=1)
    assert data.v0 == RayVector((1, Fraction(1, 7)))
    assert euler_estimate(data).formula_value == 0
    with pytest.raises(MalformedInput):
        boundary_crossings(standard_rotation_pair(), 2, schedule_start=-1)


def test_vacuous_holonomies_vanish():
    for hol in (diagonal_pair(), unipotent_pair()):
        data = boundary_crossings(hol, 2)
        assert euler_estimate(data).formula_value == 0
    # the first scheduled ray is fixed by the diagonal pair, so a retry happens
    assert boundary_crossings(diagonal_pair(), 2).ray_attempts > 1


def test_identity_holonomy_exhausts_the_schedule():
    with pytest.raises(GenericityExhausted) as err:
        boundary_crossings(identity_pair(), 2, budget=3)
    assert err.value.stage == "ray"


def test_retry_budget_env(monkeypatch):
    monkeypatch.setenv("FLATFOLIATE_RETRY_BUDGET", "2")
    with pytest.raises(GenericityExhausted):
        boundary_crossings(identity_pair(), 2)
    monkeypatch.setenv("FLATFOLIATE_RETRY_BUDGET", "zero")
    with pytest.raises(MalformedInput):
        boundary_crossings(identity_pair(), 2)
    monkeypatch.setenv("FLATFOLIATE_RETRY_BUDGET", "0")
    with pytest.raises(MalformedInput):
        boundary_crossings(identity_pair(), 2)


# ---- geometric sign arbitration ----


def test_geometric_signs_agree_with_chains(torus_run):
    data, _, _ = torus_run(2)
    for crossing, cfg in zip(data.crossings, data.configurations):
        w = vertex_weight(cfg)
        geo = n2_geometric_vertex_expectations(crossing, cfg)
        assert sum(value for _, value in geo) == 2 * w
        for chain, value in geo:
            assert value == direct_vertex_expectation(chain, cfg)


# ---- chamber complex ----


def test_dual_complex_L2(torus_run):
    data, report, _ = torus_run(2)
    complex_ = torus_dual_complex(data)
    assert complex_.chamber_count == 24
    assert complex_.chi == 0
    assert len(complex_.cells) == 24
    assert len(complex_.complex.maximal_simplices) == 48
    for deg in complex_.degrees:
        assert report.k_min <= deg <= report.k_max + 2
    for sectors in complex_.sector_chambers:
        assert len(set(sectors)) == 4


# ---- box combinatorics ----


def test_folner_box_basics():
    box = FolnerBox(3, 2)
    assert len(box.cells()) == 6
    assert box.boundary_edge_count() == 10
    with pytest.raises(MalformedInput):
        FolnerBox(0, 2)


def test_folner_ratio_values():
    for L in (2, 3, 4, 10):
        assert folner_ratio(FolnerBox(L, L).cells()) == Fraction(2, L)
    assert folner_ratio({(0, 0)}) == 2
    assert folner_ratio(FolnerBox(4, 4).cells(), shift=(0, 0)) == 0
    with pytest.raises(EmptySet):
        folner_ratio(set())


def test_folner_ratio_shift_symmetry():
    cells = FolnerBox(3, 5).cells()
    for shift in ((1, 0), (0, 1), (2, 3)):
        mirrored = (-shift[0], -shift[1])
        assert folner_ratio(cells, shift) == folner_ratio(cells, mirrored)


def test_ball_sizes():
    assert [len(cayley_ball(r)) for r in (0, 1, 2, 3)] == [1, 5, 13, 25]
    assert [len(moore_ball(r)) for r in (0, 1, 2)] == [1, 9, 25]
    with pytest.raises(MalformedInput):
        cayley_ball(-1)


def test_neighborhood_coverage():
    region = build_region(2)
    inner, boundary = region_cells(region)
    covered = set(inner) | set(boundary)
    box = FolnerBox(2, 2)
    assert check_neighborhood(box, covered, thickness=1)
    # the collar is one cell thick, so radius 2 must fail
    assert not check_neighborhood(box, covered, thickness=2)


def test_folner_report_contents():
    rep = folner_report(3)
    assert rep["L"] == 3
    assert rep["ratio"] == Fraction(2, 3)
    assert rep["ball_sizes"] == (1, 5, 13)
    assert rep["neighborhood_ok"]
    assert rep["n_inner"] == 9 and rep["n_boundary"] == 16
