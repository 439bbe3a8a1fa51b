"""Exact ray arithmetic, the index predicate and its two oracles."""

from fractions import Fraction
from itertools import permutations
from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatfoliate import fixtures
from flatfoliate.errors import (
    AntipodalPair,
    DegenerateConfiguration,
    DimensionMismatch,
    NonGenericProbe,
    ZeroVector,
)
from flatfoliate.exactgeom import (
    RayVector,
    SpanVerdict,
    canonicalize,
    circle_point,
    configuration_index,
    det_fraction,
    det_int,
    fits_open_hemisphere,
    is_antipodally_generic,
    orientation_sign,
    probe_schedule,
    radial_filling_degree,
    radial_filling_degree_auto,
    spans_origin,
    winding_degree_2d,
)
from flatfoliate.localformula import permutation_sign

nonzero_int = st.integers(min_value=-40, max_value=40).filter(lambda x: x != 0)
small_int = st.integers(min_value=-9, max_value=9)


def vec(*coords):
    return RayVector(coords)


# ---- canonical representatives ----


def test_canonical_representatives():
    assert vec(2, 4).coords == (1, 2)
    assert vec(-2, -4).coords == (-1, -2)
    assert RayVector(("-3/5", "4/5")).coords == (-3, 4)
    assert RayVector((Fraction(6, 4), 1)).coords == (3, 2)
    assert canonicalize((10, 0, 5)).coords == (2, 0, 1)


def test_ray_rejects_bad_input():
    with pytest.raises(ZeroVector):
        vec(0, 0)
    with pytest.raises(DimensionMismatch):
        RayVector((3,))
    with pytest.raises(TypeError):
        RayVector((0.5, 1))


def test_ray_negation_and_equality():
    assert -vec(3, -4) == vec(-3, 4)
    assert vec(1, 2) == vec(2, 4)
    assert vec(1, 2) != vec(2, 1)


@given(
    coords=st.tuples(small_int, small_int, small_int).filter(lambda c: any(c)),
    num=st.integers(min_value=1, max_value=60),
    den=st.integers(min_value=1, max_value=60),
)
def test_positive_scaling_is_invisible(coords, num, den):
    scale = Fraction(num, den)
    scaled = tuple(c * scale for c in coords)
    assert RayVector(scaled) == RayVector(coords)


# ---- determinants ----


@given(
    rows=st.lists(
        st.lists(small_int, min_size=4, max_size=4), min_size=4, max_size=4
    )
)
def test_det_int_matches_fraction_det(rows):
    assert det_int(rows) == det_fraction([[Fraction(x) for x in r] for r in rows])


@given(
    rows=st.lists(
        st.lists(small_int, min_size=3, max_size=3), min_size=3, max_size=3
    ),
    i=st.integers(min_value=0, max_value=2),
    j=st.integers(min_value=0, max_value=2),
)
def test_det_int_row_swap_antisymmetry(rows, i, j):
    if i == j:
        return
    swapped = list(rows)
    swapped[i], swapped[j] = swapped[j], swapped[i]
    assert det_int(swapped) == -det_int(rows)


def test_orientation_sign():
    assert orientation_sign((vec(1, 0), vec(0, 1))) == 1
    assert orientation_sign((vec(0, 1), vec(1, 0))) == -1
    assert orientation_sign((vec(1, 1), vec(2, 2))) == 0
    with pytest.raises(DimensionMismatch):
        orientation_sign((vec(1, 0),))


# ---- the index predicate ----


def test_spans_origin_verdicts():
    assert spans_origin(fixtures.interior_triple()) is SpanVerdict.INTERIOR
    assert spans_origin(fixtures.hemisphere_triple()) is SpanVerdict.EXTERIOR
    assert spans_origin((vec(1, 0), vec(0, 1), vec(-1, 0))) is SpanVerdict.DEGENERATE


def test_configuration_index_frozen_examples():
    assert configuration_index(fixtures.interior_triple()) == 1
    assert configuration_index(fixtures.skew_interior_triple()) == 1
    assert configuration_index(fixtures.hemisphere_triple()) == 0


def test_index_repeated_point_is_zero():
    assert configuration_index((vec(1, 0), vec(1, 0), vec(0, 1))) == 0


def test_index_degenerate_raises():
    # distinct points, but one face contains an antipodal pair
    with pytest.raises(DegenerateConfiguration):
        configuration_index((vec(1, 0), vec(-1, 0), vec(0, 1)))


def test_index_tuple_shape_checks():
    with pytest.raises(DimensionMismatch):
        configuration_index((vec(1, 0), vec(0, 1)))
    with pytest.raises(DimensionMismatch):
        configuration_index((vec(1, 0), vec(0, 1), vec(1, 1), vec(2, 1)))


def test_index_antisymmetry_under_permutations():
    for triple in fixtures.circle_triples(25, seed=5):
        base = configuration_index(triple)
        for sigma in permutations(range(3)):
            permuted = tuple(triple[i] for i in sigma)
            assert configuration_index(permuted) == permutation_sign(sigma) * base


def test_index_positive_scaling_invariance():
    triple = fixtures.interior_triple()
    scaled = (triple[0], RayVector(tuple(Fraction(3, 7) * c for c in triple[1].coords)), triple[2])
    assert configuration_index(scaled) == configuration_index(triple)


def test_index_in_higher_dimension():
    # e_1, e_2, e_3 and a point in the open negative octant span the origin
    assert configuration_index(
        (vec(1, 0, 0), vec(0, 1, 0), vec(0, 0, 1), vec(-1, -2, -3))
    ) in (1, -1)
    assert configuration_index(
        (vec(1, 0, 0), vec(0, 1, 0), vec(0, 0, 1), vec(1, 2, 3))
    ) == 0


# ---- genericity ----


def test_antipodal_genericity():
    assert is_antipodally_generic(fixtures.interior_triple())
    assert not is_antipodally_generic((vec(1, 0), vec(-2, 0), vec(0, 1)))
    assert not is_antipodally_generic((vec(1, 0), vec(2, 0)))
    # fewer points than the dimension: plain linear independence decides
    assert is_antipodally_generic((vec(1, 0, 0), vec(0, 1, 0)))
    assert not is_antipodally_generic((vec(1, 0, 0), vec(-3, 0, 0)))
    assert is_antipodally_generic((vec(1, 2, 3),))
    with pytest.raises(DimensionMismatch):
        is_antipodally_generic(())


# ---- winding oracle ----


def test_winding_frozen_examples():
    assert winding_degree_2d(fixtures.interior_triple()) == 1
    assert winding_degree_2d(fixtures.hemisphere_triple()) == 0


def test_winding_reversal_negates():
    triple = fixtures.interior_triple()
    assert winding_degree_2d(tuple(reversed(triple))) == -1


def test_winding_antipodal_pair_raises():
    with pytest.raises(AntipodalPair):
        winding_degree_2d((vec(1, 0), vec(-1, 0), vec(0, 1)))


def test_winding_agrees_with_index():
    for triple in fixtures.circle_triples(60, seed=11):
        assert winding_degree_2d(triple) == configuration_index(triple)


# ---- radial oracle ----


def test_radial_frozen_examples():
    it = fixtures.interior_triple()
    assert radial_filling_degree(it, vec(1, 1)) == 1
    assert radial_filling_degree(it, vec(-1, -1)) == 1
    assert radial_filling_degree(fixtures.hemisphere_triple(), vec(0, -1)) == 0


def test_radial_grazing_probe_raises():
    # the probe through a tuple point lies on two face cones at once
    with pytest.raises(NonGenericProbe):
        radial_filling_degree(fixtures.interior_triple(), vec(1, 0))


def test_probe_schedule_dim2():
    gen = probe_schedule(2)
    assert [next(gen).coords for _ in range(3)] == [(1, 1), (1, 2), (1, 3)]


def test_radial_auto_agrees_with_index():
    for tup in fixtures.radial_tuples(40, seed=3):
        assert radial_filling_degree_auto(tup) == configuration_index(tup)


# ---- hemisphere feasibility ----


def test_fits_open_hemisphere_frozen():
    assert fits_open_hemisphere(fixtures.hemisphere_triple())
    assert not fits_open_hemisphere(fixtures.interior_triple())


def test_hemisphere_iff_index_zero_on_circle():
    """For a generic triple the filling misses a pole exactly when the
    index vanishes."""
    for triple in fixtures.circle_triples(40, seed=23):
        assert fits_open_hemisphere(triple) == (configuration_index(triple) == 0)


# ---- rational circle points ----


def test_circle_point_values():
    assert circle_point(0).coords == (1, 0)
    assert circle_point(Fraction(1, 2)).coords == (3, 4)
    assert circle_point(1).coords == (0, 1)


@given(
    num=st.integers(min_value=-50, max_value=50),
    den=st.integers(min_value=1, max_value=20),
)
def test_circle_point_is_on_the_circle(num, den):
    t = Fraction(num, den)
    x, y = circle_point(t).coords
    # lies on x^2 + y^2 = r^2 with integer r, i.e. a Pythagorean direction
    r2 = x * x + y * y
    assert int(r2**0.5 + 0.5) ** 2 == r2


@settings(max_examples=40)
@given(data=st.data())
def test_random_spanning_triples_cross_checked(data):
    """Index, winding and radial oracle on seeded random circle triples."""
    seed = data.draw(st.integers(min_value=0, max_value=10_000))
    triple = fixtures.random_circle_triple(Random(seed))
    idx = configuration_index(triple)
    assert winding_degree_2d(triple) == idx
    assert radial_filling_degree_auto(triple) == idx
