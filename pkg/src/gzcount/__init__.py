"""Exact vertex counting for Gelfand-Zetlin polytopes.

Counts vertices by several independent routes (operator fixed point,
direct polyhedral enumeration, fiber recursion, closed formulas) and
machine-verifies the generating-function identities relating them, all
in exact arithmetic.
"""

from .counting import (
    CacheFormatError,
    CountCache,
    MultiplicityVector,
    SHARED_CACHE,
    TriTable,
    a_infinity,
    a_infinity_unnormalized,
    apply_A,
    binomial_formula_V,
    coeff_theorem_V,
    count_by_fiber_recursion,
    g_polynomial,
    h_polynomial,
    recurrence_V3,
    tri_table,
    vertex_count,
)
from .genfun import (
    ResidualReport,
    SeriesBuildSpec,
    build_E,
    build_G,
    build_series,
    closed_form_E2,
    closed_form_G3,
    closed_form_H,
    dde_residual,
    g3_roots,
    g4_explore,
    h_slice,
    pde_residual,
    verify_dde_G,
    verify_e2,
    verify_g3,
    verify_h,
    verify_pde_E,
)
from .oracle import (
    DEFAULT_LIMIT_DIM,
    DimensionLimitError,
    GZShape,
    HRep,
    OracleError,
    VertexSet,
    build_hrep,
    enumerate_vertices,
    oracle_count,
)
from .polyseries import Monomial, SparsePoly, TruncSeries, divide_exact, format_rational

__version__ = "0.1.0"
