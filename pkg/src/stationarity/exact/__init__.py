"""Exact rational core: linear algebra, simplex LP, double description."""
from .kernels import BACKEND
from .linalg import (
    RankInfo,
    frac,
    in_span,
    mat,
    min_norm_solution,
    normalize1,
    primitive,
    rank,
    rank_and_nullspace,
    row_basis,
    solve,
    vec,
)
from .lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    DimensionError,
    LinearSystem,
    LpOutcome,
    check_outcome,
    feasible_point,
    is_feasible,
    lp_solve,
    max_slack,
)
from .rays import ConeGenerators, extreme_rays

__all__ = [
    "BACKEND",
    "ConeGenerators",
    "DimensionError",
    "INFEASIBLE",
    "LinearSystem",
    "LpOutcome",
    "OPTIMAL",
    "RankInfo",
    "UNBOUNDED",
    "check_outcome",
    "extreme_rays",
    "feasible_point",
    "frac",
    "in_span",
    "is_feasible",
    "lp_solve",
    "mat",
    "max_slack",
    "min_norm_solution",
    "normalize1",
    "primitive",
    "rank",
    "rank_and_nullspace",
    "row_basis",
    "solve",
    "vec",
]
