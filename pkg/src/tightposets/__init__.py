"""Factor posets of finite frames: which subsets of a frame are tight.

The main entry points are :func:`factor_poset` (frame -> poset),
:func:`inverse_frame_r2` (poset -> planar frame), :func:`minimal_scalings`
(vertices of the scaling polytope), :func:`find_tight_projections` and
:func:`enumerate_factor_posets_r2`.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .arith import DEFAULT_TOL, GaussRat, QuadRat, Tolerance
from .enumeration import (
    CensusResult,
    canonical_form,
    census_by_closure,
    check_ec_conjecture,
    check_furedi_bound,
    conjectured_bound_hn,
    ec_bound,
    enumerate_factor_posets_r2,
    extremal_ec_frame,
    furedi_bound,
    scaled_onb_reduction,
)
from .errors import (
    InconclusiveError,
    InfeasibleScalingError,
    LimitExceededError,
    MixedScalarError,
    NoSigningError,
    NotSpanClosedError,
    SearchBoundExceeded,
    SingletonError,
    TightPosetError,
    ValidationError,
    ZeroVectorError,
)
from .factor_poset import (
    Signing,
    all_signings,
    empty_cover,
    factor_poset,
    forced_sign_relations,
    hasse_dot,
    satisfies_closure_condition,
    signing_from_direction,
)
from .feasibility import build_feasibility_system, solve_heuristic
from .frame import (
    Frame,
    diagram_vector,
    frame_operator,
    full_diagram_vector,
    is_full_spark,
    spans_space,
    spark,
    subset_is_tight,
)
from .inverse import (
    full_spark_obstruction,
    index_span,
    inverse_frame_r2,
    inverse_full_spark_r2,
    is_span_closed,
    span_closure,
    witness_bound,
)
from .poset import Poset
from .projections import (
    find_tight_projections,
    interlacing_check,
    lambda_F,
    project_frame,
    reduce_dimension_preserving_poset,
)
from .scalability import (
    ScalingPolytope,
    classify_scaling,
    exists_orthogonal_partition,
    has_prime_strict_scaling,
    minimal_scalings,
    scalability_poset,
)

__all__ = [name for name in dir() if not name.startswith("_")]
