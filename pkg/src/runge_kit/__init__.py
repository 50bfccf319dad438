"""Runge's method on modular curves, made executable.

Exact cusp and Siegel-unit combinatorics for subgroups of GL2(Z/NZ), Runge unit
construction with certified exponent budgets, explicit height bounds, and
sampled certification of the analytic estimates near infinity.
"""
from __future__ import annotations

from .analytic import (
    UpperHalfPoint,
    VerificationReport,
    check_cor_j,
    check_prop_j,
    check_siegel_D,
    check_siegel_global,
    eval_j,
    eval_siegel,
    reduce_to_D,
)
from .bounds import (
    BoundReport,
    bound_refined,
    bound_split_cartan,
    bound_theorem_1_1,
    bound_theorem_1_2,
    bound_x0_plus,
    isogeny_height_gap,
    rho,
)
from .cusps import (
    Cusp,
    CuspOrbit,
    GeometricCusp,
    cusp_width,
    cusps_of_XN,
    galois_orbits,
    geometric_cusps,
    runge_condition,
)
from .exactmath import (
    ExponentVector,
    IntMatrix,
    RankDeficiencyError,
    bareiss_det,
    bernoulli2,
    ell,
    positive_combination,
    rank,
)
from .gl2 import (
    ResidueMatrix,
    Subgroup,
    UnitLabel,
    borel,
    borel_unipotent,
    closure,
    full_gl2,
    nonsplit_cartan,
    normalizer_split_cartan,
    split_cartan,
    trivial_group,
    unit_galois_group,
)
from .runge import RungeConditionError, RungeUnit, runge_unit, verify_runge_unit
from .units import ConventionError, Divisor, div_u, div_w, divisor_matrix, lambda_integrality

__version__ = "0.1.0"
