"""Triangulations of products of simplices and cubes without new vertices.

Two classical constructions are combined here:

* the *staircase* triangulation of a product of two simplices: maximal
  simplices correspond to monotone lattice paths from the minimal to the
  maximal vertex of the (k+1) x (m+1) grid, giving binomial(k+m, k)
  simplices of dimension k+m;
* the *marked cube* triangulation of the n-cube: once an antipodal vertex
  pair (V0, V1) is marked, the maximal simplices are the n! maximal
  chains of the face lattice from V0 to V1, each of volume 1/n!.

A vertex numbering ``nu`` (cell index plus a large multiple of the
covering degree) drives the choice of marks and orderings on a product
cell Cube^k x Simplex^(n-k): the cube factor is triangulated with the
nu-extremal marks, each resulting simplex is ordered by ascending nu and
crossed with the nu-ordered simplex factor via the staircase rule. The
numbering is rejected (AmbiguousNu) whenever it fails to determine these
data. Assembling the per-cell triangulations checks that shared faces
receive identical triangulations from both sides and introduces no new
vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb, factorial
from typing import Mapping, Optional, Sequence

from .errors import (
    AmbiguousNu,
    DimensionMismatch,
    FaceMismatch,
    MTooSmall,
    NotAFace,
    NotAntipodal,
)
from .exactgeom import det_fraction


def _sorted_labels(labels):
    try:
        return tuple(sorted(labels))
    except TypeError:
        return tuple(sorted(labels, key=lambda x: (type(x).__name__, repr(x))))


@dataclass(frozen=True)
class GridCellMeta:
    """Staircase cell data: the two ordered vertex axes of the product."""

    rows: tuple
    cols: tuple


@dataclass(frozen=True)
class CubeCellMeta:
    """Marked cube data: dimension and the antipodal marked pair."""

    dim: int
    marked: tuple


@dataclass(frozen=True)
class SimplicialComplex:
    """An abstract simplicial complex given by its maximal simplices.

    ``coords`` (optional) realizes vertices rationally for volume audits;
    ``nu`` (optional) records the numbering that produced the complex;
    ``cell`` (optional) remembers the underlying cell for face queries.
    """

    vertices: tuple
    maximal_simplices: tuple
    coords: Optional[Mapping] = field(default=None, compare=False)
    nu: Optional[Mapping] = field(default=None, compare=False)
    cell: object = field(default=None, compare=False)

    @staticmethod
    def build(simplices, coords=None, nu=None, cell=None) -> "SimplicialComplex":
        canon = sorted(
            {_sorted_labels(s) for s in simplices},
            key=lambda s: [(type(x).__name__, repr(x)) for x in s],
        )
        verts = _sorted_labels({v for s in canon for v in s})
        return SimplicialComplex(
            vertices=verts,
            maximal_simplices=tuple(canon),
            coords=coords,
            nu=nu,
            cell=cell,
        )

    @property
    def dim(self) -> int:
        return max(len(s) for s in self.maximal_simplices) - 1

    def faces(self) -> set:
        out = set()
        for s in self.maximal_simplices:
            for r in range(1, len(s) + 1):
                out.update(combinations(s, r))
        return out

    def euler_characteristic(self) -> int:
        chi = 0
        for f in self.faces():
            chi += -1 if len(f) % 2 == 0 else 1
        return chi

    def induced(self, vertex_subset) -> "SimplicialComplex":
        """Subcomplex induced on a vertex subset (maximal intersections)."""
        keep = set(vertex_subset)
        pieces = {
            _sorted_labels(set(s) & keep)
            for s in self.maximal_simplices
            if set(s) & keep
        }
        maximal = [
            p for p in pieces if not any(set(p) < set(q) for q in pieces if q != p)
        ]
        return SimplicialComplex.build(
            maximal,
            coords=self.coords,
            nu=self.nu,
        )

    def relabeled(self, mapping: Mapping) -> "SimplicialComplex":
        coords = (
            {mapping[v]: c for v, c in self.coords.items() if v in mapping}
            if self.coords
            else None
        )
        nu = (
            {mapping[v]: x for v, x in self.nu.items() if v in mapping}
            if self.nu
            else None
        )
        return SimplicialComplex.build(
            [tuple(mapping[v] for v in s) for s in self.maximal_simplices],
            coords=coords,
            nu=nu,
        )

    def same_triangulation(self, other: "SimplicialComplex") -> bool:
        return (
            set(self.vertices) == set(other.vertices)
            and {frozenset(s) for s in self.maximal_simplices}
            == {frozenset(s) for s in other.maximal_simplices}
        )

    def maximal_volumes(self) -> list[Fraction]:
        """Realized volume of each maximal simplex (needs full-dim coords)."""
        if self.coords is None:
            raise DimensionMismatch("volume audit needs vertex coordinates")
        out = []
        for s in self.maximal_simplices:
            pts = [tuple(Fraction(x) for x in self.coords[v]) for v in s]
            d = len(s) - 1
            if any(len(p) != d for p in pts):
                raise DimensionMismatch(
                    f"simplex {s} is not full-dimensional in its realization"
                )
            rows = [
                [pts[i + 1][c] - pts[0][c] for c in range(d)] for i in range(d)
            ]
            out.append(abs(det_fraction(rows)) / factorial(d))
        return out

    def check_valid(self) -> None:
        """Combinatorial sanity: distinct, mutually non-nested maximal simplices."""
        seen = set()
        for s in self.maximal_simplices:
            if len(set(s)) != len(s):
                raise FaceMismatch(f"repeated vertex inside simplex {s}")
            fs = frozenset(s)
            if fs in seen:
                raise FaceMismatch(f"duplicate maximal simplex {s}")
            seen.add(fs)
        for a, b in combinations(seen, 2):
            if a < b or b < a:
                raise FaceMismatch("maximal simplex nested inside another")


# ====== staircase triangulation of Simplex^k x Simplex^m ======


def _staircase_paths(rows: Sequence, cols: Sequence):
    """Monotone lattice paths through the rows x cols grid, as vertex tuples."""
    k, m = len(rows) - 1, len(cols) - 1
    paths = []

    def walk(i, j, acc):
        if i == k and j == m:
            paths.append(tuple(acc))
            return
        if i < k:
            walk(i + 1, j, acc + [(rows[i + 1], cols[j])])
        if j < m:
            walk(i, j + 1, acc + [(rows[i], cols[j + 1])])

    walk(0, 0, [(rows[0], cols[0])])
    return paths


def staircase_triangulation(k: int, m: int) -> SimplicialComplex:
    """Staircase triangulation of Simplex^k x Simplex^m.

    Vertices are grid pairs (i, j), 0 <= i <= k, 0 <= j <= m; the
    binomial(k+m, k) maximal simplices are the monotone paths from (0, 0)
    to (k, m). The attached realization places vertex (i, j) at
    (e_i, e_j) in R^(k+m) (with e_0 = 0), where every path simplex has
    volume 1/(k+m)!.
    """
    if k < 0 or m < 0:
        raise DimensionMismatch("factor dimensions must be nonnegative")
    rows = tuple(range(k + 1))
    cols = tuple(range(m + 1))
    coords = {}
    for i, j in product(rows, cols):
        left = tuple(Fraction(1 if c == i else 0) for c in range(1, k + 1))
        right = tuple(Fraction(1 if c == j else 0) for c in range(1, m + 1))
        coords[(i, j)] = left + right
    return SimplicialComplex.build(
        _staircase_paths(rows, cols),
        coords=coords,
        cell=GridCellMeta(rows=rows, cols=cols),
    )


# ====== marked-cube (symmetric) triangulation of the n-cube ======


def _antipode(vertex: tuple) -> tuple:
    return tuple(1 - c for c in vertex)


def kuhn_triangulation(n: int, marked: Optional[tuple] = None) -> SimplicialComplex:
    """Triangulation of the n-cube into n! simplices from a marked pair.

    ``marked`` is an antipodal pair (V0, V1) of cube vertices (defaults to
    the origin and the all-ones vertex). Maximal simplices are the maximal
    chains of the boolean lattice rebased at V0, so the triangulation is
    invariant under every cube symmetry fixing the marked pair; in the
    unit-cube realization each simplex has volume 1/n!.
    """
    if n < 1:
        raise DimensionMismatch("cube dimension must be >= 1")
    if marked is None:
        marked = (tuple([0] * n), tuple([1] * n))
    v0, v1 = (tuple(v) for v in marked)
    if len(v0) != n or len(v1) != n or not set(v0) | set(v1) <= {0, 1}:
        raise NotAntipodal(f"marked pair {marked} is not a pair of {n}-cube vertices")
    if v1 != _antipode(v0):
        raise NotAntipodal(f"marked vertices {v0} and {v1} are not antipodal")
    simplices = []
    from itertools import permutations as _perms

    for order in _perms(range(n)):
        chain = [v0]
        cur = list(v0)
        for pos in order:
            cur[pos] = 1 - cur[pos]
            chain.append(tuple(cur))
        simplices.append(tuple(chain))
    coords = {
        v: tuple(Fraction(c) for c in v) for v in product((0, 1), repeat=n)
    }
    return SimplicialComplex.build(
        simplices, coords=coords, cell=CubeCellMeta(dim=n, marked=(v0, v1))
    )


def induced_cube_marks(marked: tuple, fixed: Mapping[int, int]) -> tuple:
    """Marked pair of a cube face: the face vertices nearest to V0 and V1."""
    v0, v1 = marked
    m0 = tuple(fixed.get(p, v0[p]) for p in range(len(v0)))
    m1 = tuple(fixed.get(p, v1[p]) for p in range(len(v1)))
    return (m0, m1)


# ====== face restriction ======


def restrict_to_face(tri: SimplicialComplex, face_vertices) -> SimplicialComplex:
    """Induced triangulation on a face of the underlying cell.

    For a staircase complex the admissible faces are the subproducts
    F1 x F2 of the grid; for a marked-cube complex they are the subcubes
    obtained by fixing coordinates. Anything else raises NotAFace. The
    result carries the inherited cell structure (in particular, the
    induced marks of a cube face).
    """
    face = set(face_vertices)
    if not face <= set(tri.vertices):
        raise NotAFace("face vertices are not vertices of the complex")
    meta = tri.cell
    if isinstance(meta, GridCellMeta):
        sub_rows = tuple(r for r in meta.rows if any(v[0] == r for v in face))
        sub_cols = tuple(c for c in meta.cols if any(v[1] == c for v in face))
        if face != {(r, c) for r in sub_rows for c in sub_cols}:
            raise NotAFace(
                "staircase faces are exactly the subproducts of the grid axes"
            )
        induced = tri.induced(face)
        return SimplicialComplex.build(
            induced.maximal_simplices,
            coords=tri.coords,
            nu=tri.nu,
            cell=GridCellMeta(rows=sub_rows, cols=sub_cols),
        )
    if isinstance(meta, CubeCellMeta):
        n = meta.dim
        values = [set(v[p] for v in face) for p in range(n)]
        expected = {tuple(v) for v in product(*(sorted(vals) for vals in values))}
        if face != expected:
            raise NotAFace("cube faces are exactly the subcubes with fixed coordinates")
        fixed = {p: vals.copy().pop() for p, vals in enumerate(values) if len(vals) == 1}
        induced = tri.induced(face)
        return SimplicialComplex.build(
            induced.maximal_simplices,
            coords=tri.coords,
            nu=tri.nu,
            cell=CubeCellMeta(dim=n, marked=induced_cube_marks(meta.marked, fixed)),
        )
    if meta is None:
        raise NotAFace("the complex does not describe a cell; no faces to restrict to")
    raise NotAFace(f"unsupported cell structure {meta!r}")


# ====== vertex numbering ======


def nu_numbering(cells: Sequence[tuple], modulus: int) -> tuple[int, ...]:
    """Numbers nu = index + modulus * degree for (index, degree) pairs.

    The modulus must strictly dominate every cell index so that the pair
    (index, degree) stays recoverable and degree differences dominate the
    ordering; otherwise MTooSmall is raised.
    """
    cells = [(int(i), int(d)) for i, d in cells]
    if modulus < 1:
        raise MTooSmall(f"modulus {modulus} must be positive")
    for i, d in cells:
        if i < 0 or d < 0:
            raise MTooSmall(f"cell index and degree must be nonnegative, got {(i, d)}")
        if i >= modulus:
            raise MTooSmall(
                f"modulus {modulus} does not dominate cell index {i}"
            )
    return tuple(i + modulus * d for i, d in cells)


# ====== product cells and assembly ======


@dataclass
class ProductCell:
    """A cell Cube^k x Simplex^m with globally labelled, numbered vertices.

    ``labels`` maps grid vertices (cube_vertex, simplex_vertex) to global
    labels; ``nu`` assigns the numbering to global labels. ``coords`` may
    realize the labels in a common ambient space for geometric audits.
    """

    cube_dim: int
    simplex_dim: int
    labels: Mapping
    nu: Mapping
    coords: Optional[Mapping] = None

    def __post_init__(self):
        grid = set(product(product((0, 1), repeat=self.cube_dim), range(self.simplex_dim + 1)))
        if set(self.labels) != grid:
            raise DimensionMismatch(
                "cell labels must cover exactly the cube x simplex vertex grid"
            )
        if len(set(self.labels.values())) != len(self.labels):
            raise DimensionMismatch("cell labels must be distinct")
        missing = [lab for lab in self.labels.values() if lab not in self.nu]
        if missing:
            raise AmbiguousNu(f"no numbering for labels {missing}")

    @staticmethod
    def from_nu_grid(cube_dim: int, simplex_dim: int, nu_by_grid: Mapping) -> "ProductCell":
        """Cell with identity labels, numbering given directly on the grid."""
        labels = {g: g for g in nu_by_grid}
        return ProductCell(
            cube_dim=cube_dim,
            simplex_dim=simplex_dim,
            labels=labels,
            nu=dict(nu_by_grid),
        )


def _cube_marks_from_nu(cell: ProductCell) -> tuple:
    """The nu-extremal antipodal pair on the cube factor, validated."""
    cube_vertices = list(product((0, 1), repeat=cell.cube_dim))
    marks = None
    for s in range(cell.simplex_dim + 1):
        vals = {c: cell.nu[cell.labels[(c, s)]] for c in cube_vertices}
        lo = min(vals.values())
        hi = max(vals.values())
        mins = [c for c, v in vals.items() if v == lo]
        maxs = [c for c, v in vals.items() if v == hi]
        if len(mins) != 1 or len(maxs) != 1:
            raise AmbiguousNu(
                f"numbering is not uniquely extremal on the cubical face at "
                f"simplex vertex {s}"
            )
        pair = (mins[0], maxs[0])
        if marks is None:
            marks = pair
        elif marks != pair:
            raise AmbiguousNu(
                "numbering selects different marked pairs on parallel cubical faces"
            )
    return marks


def _nu_order(cell: ProductCell, items: Sequence, key) -> tuple:
    """Order ``items`` by nu via ``key``; ties raise AmbiguousNu."""
    decorated = sorted((cell.nu[cell.labels[key(x)]], i, x) for i, x in enumerate(items))
    values = [d[0] for d in decorated]
    if len(set(values)) != len(values):
        raise AmbiguousNu(f"numbering ties on {items}")
    return tuple(d[2] for d in decorated)


def triangulate_product_cell(cell: ProductCell) -> SimplicialComplex:
    """Numbering-driven triangulation of Cube^k x Simplex^m, no new vertices.

    The cube factor is cut into k! simplices by the marked-pair rule with
    the nu-extremal marks; each cube simplex is ordered by ascending nu
    and crossed with the nu-ordered simplex factor along staircase paths,
    for a total of k! * binomial(k+m, k) maximal simplices, each with
    pairwise distinct nu values.
    """
    k, m = cell.cube_dim, cell.simplex_dim
    simplex_vertices = list(range(m + 1))
    if k == 0:
        ordered = _nu_order(cell, simplex_vertices, key=lambda s: ((), s))
        grid_simplices = [tuple(((), s) for s in ordered)]
    else:
        marks = _cube_marks_from_nu(cell)
        cube_tri = kuhn_triangulation(k, marked=marks)
        # Ascending-nu order on each cube simplex must not depend on the
        # simplex-factor vertex used to read the numbering off.
        cube_chains = []
        for chain in cube_tri.maximal_simplices:
            orders = {
                _nu_order(cell, chain, key=lambda c, s=s: (c, s))
                for s in simplex_vertices
            }
            if len(orders) != 1:
                raise AmbiguousNu(
                    f"numbering orders cube simplex {chain} inconsistently "
                    "across the simplex factor"
                )
            cube_chains.append(orders.pop())
        simplex_orders = {
            _nu_order(cell, simplex_vertices, key=lambda s, c=c: (c, s))
            for c in product((0, 1), repeat=k)
        }
        if len(simplex_orders) != 1:
            raise AmbiguousNu(
                "numbering orders the simplex factor inconsistently across "
                "the cube"
            )
        simplex_order = simplex_orders.pop()
        grid_simplices = []
        for chain in cube_chains:
            grid_simplices.extend(_staircase_paths(chain, simplex_order))
    out_simplices = []
    for s in grid_simplices:
        labels = tuple(cell.labels[g] for g in s)
        nus = [cell.nu[lab] for lab in labels]
        if len(set(nus)) != len(nus):
            raise AmbiguousNu(f"numbering repeats inside output simplex {labels}")
        out_simplices.append(labels)
    nu = {lab: cell.nu[lab] for lab in cell.labels.values()}
    coords = dict(cell.coords) if cell.coords else None
    return SimplicialComplex.build(out_simplices, coords=coords, nu=nu)


def _face_label_sets(cell: ProductCell) -> set[frozenset]:
    """Label sets of all faces (cube face x simplex face) of the cell."""
    axis_choices = product(*(((0,), (1,), (0, 1)),) * cell.cube_dim)
    cube_faces = [list(product(*choice)) for choice in axis_choices]
    simplex_points = range(cell.simplex_dim + 1)
    faces = set()
    for cube_face in cube_faces:
        for r in range(1, cell.simplex_dim + 2):
            for simplex_face in combinations(simplex_points, r):
                faces.add(
                    frozenset(
                        cell.labels[(c, s)]
                        for c in cube_face
                        for s in simplex_face
                    )
                )
    return faces


def assemble_triangulation(cells: Sequence[ProductCell]) -> SimplicialComplex:
    """Union of per-cell triangulations with shared-face agreement checks.

    Two cells may meet along several faces at once (on a closed surface a
    pair of square cells can share two opposite edges), so the agreement
    check runs over every maximal common face: the induced triangulations
    there must coincide, and every label shared by two cells must carry
    one numbering. Violations raise FaceMismatch naming the offending
    face. The output vertex set is exactly the union of the input label
    sets.
    """
    pieces = [triangulate_product_cell(c) for c in cells]
    nu: dict = {}
    for cell in cells:
        for lab in cell.labels.values():
            if lab in nu and nu[lab] != cell.nu[lab]:
                raise FaceMismatch(
                    f"label {lab!r} numbered inconsistently across cells",
                    face=(lab,),
                )
            nu[lab] = cell.nu[lab]
    face_sets = [_face_label_sets(c) for c in cells]
    for i, j in combinations(range(len(cells)), 2):
        shared = set(cells[i].labels.values()) & set(cells[j].labels.values())
        if not shared:
            continue
        common = face_sets[i] & face_sets[j]
        for face in common:
            if any(face < other for other in common):
                continue  # checking the maximal face covers its subfaces
            left = pieces[i].induced(face)
            right = pieces[j].induced(face)
            if not left.same_triangulation(right):
                raise FaceMismatch(
                    "cells induce different triangulations on a shared face",
                    face=_sorted_labels(face),
                )
    coords = None
    if all(c.coords is not None for c in cells):
        coords = {}
        for c in cells:
            coords.update(c.coords)
    out = SimplicialComplex.build(
        [s for p in pieces for s in p.maximal_simplices],
        coords=coords,
        nu=nu,
    )
    expected_vertices = set(nu)
    if set(out.vertices) != expected_vertices:
        raise FaceMismatch("assembled complex changed the vertex set")
    out.check_valid()
    return out


def expected_staircase_count(k: int, m: int) -> int:
    return comb(k + m, k)
