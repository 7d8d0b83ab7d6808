"""Exact learning of finite unions of integer cubes.

The package learns axis-aligned cube unions over the integer lattice from
membership / equivalence / subset oracles, and applies the learners to
monadic decomposition of quantifier-free linear integer arithmetic.
"""

from .errors import (
    BudgetExceeded,
    CubeLearnError,
    FormulaError,
    LearnTimeout,
    ProtocolError,
    SolverError,
    UnboundedDirection,
)
from .geometry import AbstractGrid, Bound, Cube, CubeUnion, NEG_INF, POS_INF, Point
from .learners import (
    ALGORITHMS,
    LearnResult,
    LearnerConfig,
    QueryStats,
    VisitedCorners,
    learn_cubes,
    learn_cubes_infinity_meq,
    learn_max_cube,
    run_session,
)
from .oracles import (
    EquivalenceOracle,
    GroundTruthTeacher,
    MembershipOracle,
    ScriptedCornerOracle,
    SubsetOracle,
)
from .search import (
    SearchStrategy,
    compute_max_bounds,
    compute_min_bounds,
    find_max_corner,
    find_max_inc_corner,
    find_min_corner,
    find_min_inc_corner,
)
from .formula import Formula, cube_union_to_formula, parse_formula
from .solver import (
    BruteBackend,
    ExternalBackend,
    backend_from_spec,
    monadic_decompose,
    solver_check,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "AbstractGrid",
    "Bound",
    "BruteBackend",
    "BudgetExceeded",
    "Cube",
    "CubeLearnError",
    "CubeUnion",
    "EquivalenceOracle",
    "ExternalBackend",
    "Formula",
    "FormulaError",
    "GroundTruthTeacher",
    "LearnResult",
    "LearnTimeout",
    "LearnerConfig",
    "MembershipOracle",
    "NEG_INF",
    "POS_INF",
    "Point",
    "ProtocolError",
    "QueryStats",
    "ScriptedCornerOracle",
    "SearchStrategy",
    "SolverError",
    "SubsetOracle",
    "UnboundedDirection",
    "VisitedCorners",
    "backend_from_spec",
    "compute_max_bounds",
    "compute_min_bounds",
    "cube_union_to_formula",
    "find_max_corner",
    "find_max_inc_corner",
    "find_min_corner",
    "find_min_inc_corner",
    "learn_cubes",
    "learn_cubes_infinity_meq",
    "learn_max_cube",
    "monadic_decompose",
    "parse_formula",
    "run_session",
    "solver_check",
]
