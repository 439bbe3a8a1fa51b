"""Staircase and marked-cube triangulations, numbering-driven cells, assembly."""

from fractions import Fraction
from itertools import product
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flatfoliate.errors import (
    AmbiguousNu,
    DimensionMismatch,
    FaceMismatch,
    MTooSmall,
    NotAFace,
    NotAntipodal,
)
from flatfoliate.triangulations import (
    ProductCell,
    SimplicialComplex,
    assemble_triangulation,
    induced_cube_marks,
    kuhn_triangulation,
    nu_numbering,
    restrict_to_face,
    staircase_triangulation,
    triangulate_product_cell,
)


def square_cell(nu_by_corner: dict) -> ProductCell:
    """Cube^1 x Simplex^1 cell with identity labels."""
    labels = {((c,), s): (c, s) for c in (0, 1) for s in (0, 1)}
    return ProductCell(
        cube_dim=1,
        simplex_dim=1,
        labels=labels,
        nu={lab: nu_by_corner[lab] for lab in labels.values()},
    )


# ---- staircase ----


@pytest.mark.parametrize("k,m", [(0, 0), (1, 1), (2, 1), (2, 2), (3, 2)])
def test_staircase_counts_and_volumes(k, m):
    tri = staircase_triangulation(k, m)
    assert len(tri.maximal_simplices) == comb(k + m, k)
    assert len(tri.vertices) == (k + 1) * (m + 1)
    vols = tri.maximal_volumes()
    if k + m > 0:
        assert set(vols) == {Fraction(1, factorial(k + m))}
    assert sum(vols) == Fraction(1, factorial(k) * factorial(m))
    assert tri.euler_characteristic() == 1
    tri.check_valid()


def test_staircase_single_factor_is_one_simplex():
    tri = staircase_triangulation(3, 0)
    assert len(tri.maximal_simplices) == 1


def test_staircase_rejects_negative_dims():
    with pytest.raises(DimensionMismatch):
        staircase_triangulation(-1, 2)


def test_staircase_face_restriction_is_staircase():
    """Restricting to a sub-grid gives the staircase of the sub-axes."""
    tri = staircase_triangulation(2, 2)
    rows, cols = (0, 2), (0, 1, 2)
    face = [(r, c) for r in rows for c in cols]
    restricted = restrict_to_face(tri, face)
    model = staircase_triangulation(1, 2).relabeled(
        {
            (i, j): (rows[i], cols[j])
            for i in range(len(rows))
            for j in range(len(cols))
        }
    )
    assert restricted.same_triangulation(model)


def test_staircase_rejects_non_grid_face():
    tri = staircase_triangulation(1, 1)
    with pytest.raises(NotAFace):
        restrict_to_face(tri, [(0, 0), (1, 1)])
    with pytest.raises(NotAFace):
        restrict_to_face(tri, [(0, 0), (7, 7)])


# ---- marked cube ----


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cube_counts_and_volumes(n):
    tri = kuhn_triangulation(n)
    assert len(tri.maximal_simplices) == factorial(n)
    vols = tri.maximal_volumes()
    assert set(vols) == {Fraction(1, factorial(n))}
    assert sum(vols) == 1
    tri.check_valid()


def test_cube_alternate_marked_pair():
    tri = kuhn_triangulation(3, marked=((0, 1, 0), (1, 0, 1)))
    assert len(tri.maximal_simplices) == 6
    assert all((0, 1, 0) in s and (1, 0, 1) in s for s in tri.maximal_simplices)


def test_cube_rejects_bad_marks():
    with pytest.raises(NotAntipodal):
        kuhn_triangulation(2, marked=((0, 0), (0, 1)))
    with pytest.raises(NotAntipodal):
        kuhn_triangulation(2, marked=((0, 0, 0), (1, 1, 1)))
    with pytest.raises(DimensionMismatch):
        kuhn_triangulation(0)


def test_cube_face_restriction_uses_induced_marks():
    tri = kuhn_triangulation(3)
    face = [v for v in product((0, 1), repeat=3) if v[1] == 1]
    restricted = restrict_to_face(tri, face)
    marks = induced_cube_marks(((0, 0, 0), (1, 1, 1)), {1: 1})
    assert marks == ((0, 1, 0), (1, 1, 1))
    model = kuhn_triangulation(2, marked=((0, 0), (1, 1))).relabeled(
        {(a, b): (a, 1, b) for a in (0, 1) for b in (0, 1)}
    )
    assert restricted.same_triangulation(model)


def test_cube_rejects_non_subcube_face():
    tri = kuhn_triangulation(2)
    with pytest.raises(NotAFace):
        restrict_to_face(tri, [(0, 0), (1, 1)])


# ---- numbering ----


def test_nu_numbering_values():
    assert nu_numbering([(2, 3)], 10) == (32,)
    assert nu_numbering([(0, 0)], 7) == (0,)
    assert nu_numbering([(0, 4), (3, 5)], 7) == (28, 38)


def test_nu_numbering_rejects_small_modulus():
    with pytest.raises(MTooSmall):
        nu_numbering([(7, 1)], 7)
    with pytest.raises(MTooSmall):
        nu_numbering([(1, 1)], 0)
    with pytest.raises(MTooSmall):
        nu_numbering([(-1, 0)], 7)


@given(
    idx=st.integers(min_value=0, max_value=6),
    deg=st.integers(min_value=0, max_value=50),
)
def test_nu_numbering_recoverable(idx, deg):
    (value,) = nu_numbering([(idx, deg)], 7)
    assert value % 7 == idx
    assert value // 7 == deg


# ---- numbering-driven product cells ----


def test_product_cell_validation():
    labels = {((c,), s): (c, s) for c in (0, 1) for s in (0, 1)}
    with pytest.raises(DimensionMismatch):
        ProductCell(cube_dim=2, simplex_dim=1, labels=labels, nu={})
    with pytest.raises(AmbiguousNu):
        ProductCell(cube_dim=1, simplex_dim=1, labels=labels, nu={(0, 0): 0})
    bad = dict(labels)
    bad[((1,), 1)] = (0, 0)
    with pytest.raises(DimensionMismatch):
        ProductCell(cube_dim=1, simplex_dim=1, labels=bad, nu={(c, s): 0 for c in (0, 1) for s in (0, 1)})


def test_pure_simplex_cell_orders_by_nu():
    cell = ProductCell.from_nu_grid(
        0, 2, {((), 0): 14, ((), 1): 0, ((), 2): 7}
    )
    tri = triangulate_product_cell(cell)
    assert tri.maximal_simplices == ((((), 0), ((), 1), ((), 2)),)


def test_square_cell_diagonal_through_nu_extremes():
    tri = triangulate_product_cell(
        square_cell({(0, 0): 0, (1, 0): 7, (0, 1): 14, (1, 1): 21})
    )
    expected = {frozenset(s) for s in (((0, 0), (1, 0), (1, 1)), ((0, 0), (0, 1), (1, 1)))}
    assert {frozenset(s) for s in tri.maximal_simplices} == expected


def test_pure_cube_cell_matches_marked_cube():
    nu = {(c1, c2): 7 * (c1 + c2) + c1 for c1 in (0, 1) for c2 in (0, 1)}
    cell = ProductCell.from_nu_grid(
        2, 0, {((c1, c2), 0): nu[(c1, c2)] for c1 in (0, 1) for c2 in (0, 1)}
    )
    tri = triangulate_product_cell(cell)
    model = kuhn_triangulation(2).relabeled(
        {(c1, c2): ((c1, c2), 0) for c1 in (0, 1) for c2 in (0, 1)}
    )
    assert tri.same_triangulation(model)


@pytest.mark.parametrize("k,m", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_product_cell_simplex_count(k, m):
    nu_by_grid = {}
    counter = 0
    for c in product((0, 1), repeat=k):
        for s in range(m + 1):
            nu_by_grid[(c, s)] = 7 * (sum(c) + s) + counter % 7
            counter += 1
    # strictly graded numbering: cube marks are the all-zeros/all-ones pair
    cell = ProductCell.from_nu_grid(k, m, nu_by_grid)
    tri = triangulate_product_cell(cell)
    assert len(tri.maximal_simplices) == factorial(k) * comb(k + m, k)
    tri.check_valid()


def test_constant_numbering_is_ambiguous():
    with pytest.raises(AmbiguousNu):
        triangulate_product_cell(
            square_cell({(0, 0): 0, (1, 0): 0, (0, 1): 7, (1, 1): 7})
        )


def test_tied_simplex_order_is_ambiguous():
    with pytest.raises(AmbiguousNu):
        triangulate_product_cell(
            square_cell({(0, 0): 0, (1, 0): 7, (0, 1): 0, (1, 1): 7})
        )


# ---- assembly ----


def test_assemble_two_squares():
    left = square_cell({(0, 0): 0, (1, 0): 7, (0, 1): 14, (1, 1): 21})
    right_labels = {((c,), s): (c + 1, s) for c in (0, 1) for s in (0, 1)}
    right = ProductCell(
        cube_dim=1,
        simplex_dim=1,
        labels=right_labels,
        nu={(1, 0): 7, (2, 0): 28, (1, 1): 21, (2, 1): 35},
    )
    out = assemble_triangulation([left, right])
    assert len(out.vertices) == 6
    assert len(out.maximal_simplices) == 4
    assert out.euler_characteristic() == 1
    out.check_valid()


def test_assemble_rejects_numbering_conflict():
    left = square_cell({(0, 0): 0, (1, 0): 7, (0, 1): 14, (1, 1): 21})
    right_labels = {((c,), s): (c + 1, s) for c in (0, 1) for s in (0, 1)}
    right = ProductCell(
        cube_dim=1,
        simplex_dim=1,
        labels=right_labels,
        nu={(1, 0): 8, (2, 0): 28, (1, 1): 21, (2, 1): 35},
    )
    with pytest.raises(FaceMismatch):
        assemble_triangulation([left, right])


def test_assemble_single_cell_round_trip():
    cell = square_cell({(0, 0): 0, (1, 0): 7, (0, 1): 14, (1, 1): 21})
    assert assemble_triangulation([cell]).same_triangulation(
        triangulate_product_cell(cell)
    )


# ---- complex helpers ----


def test_euler_characteristic_examples():
    disk = SimplicialComplex.build([("a", "b", "c")])
    assert disk.euler_characteristic() == 1
    circle = SimplicialComplex.build([("a", "b"), ("b", "c"), ("c", "a")])
    assert circle.euler_characteristic() == 0


def test_induced_subcomplex():
    tri = SimplicialComplex.build([("a", "b", "c"), ("b", "c", "d")])
    sub = tri.induced({"b", "c", "d"})
    assert sub.maximal_simplices == (("b", "c", "d"),)


def test_check_valid_rejects_nested_simplices():
    broken = SimplicialComplex(
        vertices=("a", "b", "c"),
        maximal_simplices=(("a", "b"), ("a", "b", "c")),
    )
    with pytest.raises(FaceMismatch):
        broken.check_valid()


def test_check_valid_rejects_repeated_vertex():
    broken = SimplicialComplex(
        vertices=("a", "b"),
        maximal_simplices=(("a", "a", "b"),),
    )
    with pytest.raises(FaceMismatch):
        broken.check_valid()
