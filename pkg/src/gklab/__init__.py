"""Growth sequences and Gelfand-Kirillov dimension for algebras over Z and Z[q]."""

from .analysis import GKEstimate, GrowthClass, classify_growth, estimate_gkdim
from .calculus import DimBound, DimValue, INF, bergman_normalize, eval_construction, parse_expr
from .coeff import DomainSpec, Fraction, ParamPoly, RankMatrix, fraction_normalize, matrix_rank
from .growth import (
    Frame,
    GrowthSequence,
    MonomialModule,
    growth_sequence,
    make_frame,
    module_growth_sequence,
    standard_monomial_count,
    subalgebra_growth,
    tdeg_pool_estimate,
)
from .presentation import (
    NCPoly,
    Presentation,
    confluence_check,
    load_presentation,
    multiply_reduced,
    parse_poly,
    parse_presentation,
    reduce,
    validate_pbw_shape,
)

__version__ = "0.1.0"
