"""Sparse principal component analysis by penalized power iteration.

Four penalized formulations (l1/l0 penalty, one component or a block of m)
are maximized by a single linearize-and-step scheme over the unit sphere or
the Stiefel manifold, followed by a variance-maximizing fill of the active
loadings, deflation for sequential extraction, and an experiment harness.
"""

from .block import (
    BlockConfig,
    BlockResult,
    block_l0_subgradient,
    block_l0_value,
    block_l1_subgradient,
    block_l1_value,
    init_block,
    solve_block,
    z_from_x_block_l0,
    z_from_x_block_l1,
)
from .errors import (
    DataFormatError,
    EmptySupportError,
    NotConvexError,
    NumericalError,
    SparsePCAError,
    ZeroDirectionError,
)
from .gradient import (
    IterateTrace,
    ObjectiveOracle,
    Sphere,
    Stiefel,
    StopRule,
    domain_step,
    maximize,
    optimality_measure,
    power_method,
    procrustes,
    rate_bound_check,
    shifted_power_method,
)
from .harness import (
    BenchRow,
    ExperimentSpec,
    ResultPoint,
    TradeoffPoint,
    TradeoffResult,
    bench_scaling,
    cardinality_sweep,
    emit_results,
    gen_gaussian,
    load_matrix,
    run_experiment,
    save_matrix,
    tradeoff_sweep,
)
from .linalg import (
    PolarFactor,
    RankOneFactors,
    adjusted_variance,
    level_set_convexity,
    polar_factor,
    rank_one_svd,
)
from .postprocess import (
    AlternatingFill,
    FillProblem,
    alternating_fill,
    deflate,
    fill_single_l1,
    sequential_extract,
    variance,
)
from .single import (
    PenaltyConfig,
    SingleResult,
    cardinality_upper_bound,
    gamma_max,
    init_column,
    l0_subgradient,
    l0_value,
    l1_subgradient,
    l1_value,
    solve_single,
    z_from_x_l0,
    z_from_x_l1,
)

__version__ = "0.1.0"

__all__ = [
    "AlternatingFill",
    "BenchRow",
    "BlockConfig",
    "BlockResult",
    "DataFormatError",
    "EmptySupportError",
    "ExperimentSpec",
    "FillProblem",
    "IterateTrace",
    "NotConvexError",
    "NumericalError",
    "ObjectiveOracle",
    "PenaltyConfig",
    "PolarFactor",
    "RankOneFactors",
    "ResultPoint",
    "SingleResult",
    "SparsePCAError",
    "Sphere",
    "Stiefel",
    "StopRule",
    "TradeoffPoint",
    "TradeoffResult",
    "ZeroDirectionError",
    "adjusted_variance",
    "alternating_fill",
    "bench_scaling",
    "block_l0_subgradient",
    "block_l0_value",
    "block_l1_subgradient",
    "block_l1_value",
    "cardinality_sweep",
    "cardinality_upper_bound",
    "deflate",
    "domain_step",
    "emit_results",
    "fill_single_l1",
    "gamma_max",
    "gen_gaussian",
    "init_block",
    "init_column",
    "l0_subgradient",
    "l0_value",
    "l1_subgradient",
    "l1_value",
    "level_set_convexity",
    "load_matrix",
    "maximize",
    "optimality_measure",
    "polar_factor",
    "power_method",
    "procrustes",
    "rank_one_svd",
    "rate_bound_check",
    "run_experiment",
    "save_matrix",
    "sequential_extract",
    "shifted_power_method",
    "solve_block",
    "solve_single",
    "tradeoff_sweep",
    "variance",
    "z_from_x_block_l0",
    "z_from_x_block_l1",
    "z_from_x_l0",
    "z_from_x_l1",
]
