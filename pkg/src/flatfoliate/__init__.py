"""Exact Euler-number computations for flat sphere bundles.

The package computes spherical configuration indices with integer
arithmetic, aggregates them into the local Euler-number formula with
its a-priori bound, triangulates the auxiliary product cells without
introducing vertices, and runs the flat-circle-bundle experiment over
the torus where the formula returns exactly zero while the bound decays
with the box size.
"""

from .errors import (
    AmbiguousNu,
    AntipodalPair,
    DegenerateConfiguration,
    DimensionMismatch,
    EmptySet,
    FaceMismatch,
    FlatFoliateError,
    GenericityExhausted,
    InvalidCounts,
    MalformedInput,
    MTooSmall,
    NonCommuting,
    NonGenericProbe,
    NonIntegralWinding,
    NotAFace,
    NotAntipodal,
    TooFewQuasisections,
    TypeMismatch,
    ZeroVector,
)
from .exactgeom import (
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
from .localformula import (
    CancellationAudit,
    ChamberChain,
    CrossingConfiguration,
    EssentialTuple,
    EulerReport,
    all_chains,
    cancellation_audit,
    direct_vertex_expectation,
    essential_tuples,
    euler_number,
    parallel_vertex_expectation,
    permutation_sign,
    sign_stripped_chain_total,
    sullivan_bound,
    vertex_weight,
)
from .toruslab import (
    BranchGerm,
    ChamberComplex,
    FolnerBox,
    HolonomyPair,
    Mat2,
    QuasisectionRegion,
    TorusCrossing,
    TorusData,
    boundary_crossings,
    build_region,
    cayley_ball,
    cell_status,
    check_neighborhood,
    crossing_configuration,
    decay_experiment,
    diagonal_pair,
    euler_estimate,
    extract_crossings,
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
from .triangulations import (
    CubeCellMeta,
    GridCellMeta,
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

__version__ = "0.1.0"
