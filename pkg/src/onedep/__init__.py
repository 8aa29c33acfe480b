"""One-dependent hard-core processes on star graphs and symmetric colorings."""
from .coloring import (
    ALPHA,
    BETA,
    ColorClass,
    FeasibilityRegion,
    LevelSolution,
    UnsupportedLevelError,
    canonicalize,
    count_classes,
    feasibility,
    generate_equations,
    l4k_formula,
    probe_alpha,
    solve_level,
    solve_levels,
    star3_obstruction,
)
from .critical import (
    CriticalResult,
    emit_table,
    min_colors_lower_bound,
    p_star,
    ph_finite,
    ph_star,
)
from .exact import (
    AffineClosureError,
    AffineExpr,
    InfeasibleSystemError,
    LinearSystem,
    ParamName,
    rat,
    solve_affine_system,
)
from .oracle import StarShape, check_one_dependence, enumerate_probs, ph_oracle
from .star import StarConfig, a_seq, limit_a, ray_prob, star_prob, zeros_prob

__version__ = "0.1.0"
