"""Integrability exponents of pushforward measures by polynomial maps.

Exact engines (sparse rational polynomials, Newton-polyhedron thresholds,
closed-form exponent conversions) paired with empirical verification over
the reals (Monte Carlo pushforwards, tail and Fourier-decay fits) and over
the p-adics (exact cylinder masses).
"""

from .values import (
    INF,
    BoundKind,
    BoundedValue,
    ExponentValue,
    FieldValidity,
    KStarBounds,
    LctValue,
)
from .polys import (
    ExponentOverflowError,
    NotLocallyDominantError,
    NotMonomialError,
    PolyMap,
    Polynomial,
    as_monomial_ideal,
    evaluate,
    jacobian_matrix,
    jacobian_minors,
    partial_derivative,
    shift_to_origin,
)
from .lct import (
    Divisor,
    MonomialIdeal,
    ResolutionData,
    lct_diagonal_sum,
    lct_from_resolution,
    lct_lower_is_positive_check,
    lct_monomial,
    lct_principal_monomial,
)
from .exponents import (
    MonomialLocalModel,
    consistency_chain_check,
    delta_from_eps,
    eps_equidimensional,
    eps_from_delta,
    eps_from_lct,
    eps_lower_bound,
    eps_monomial_model,
    eps_upper_bound_complex,
    k_star_bounds_from_lct,
    k_star_upper_from_eps,
    lct_from_eps,
    reverse_young_check,
    reverse_young_self,
    thom_sebastiani,
    young_combine,
)
from .mapspec import MapSpec, MapSpecError, parse_map_spec

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
