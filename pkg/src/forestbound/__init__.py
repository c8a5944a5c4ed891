"""Post hoc upper bounds on false discoveries over forest-structured
reference families, with an incremental algorithm for whole bound curves."""

from .bounds import (
    atom_hit_counts,
    naive_curve,
    oracle_vstar_partitions,
    oracle_vstar_sets,
    oracle_vstar_subsets,
    vstar,
)
from .curve import BoundCurve, CurveState, curve_from_pvalues, fast_curve, fdp_curve
from .errors import (
    DuplicateRegionError,
    ForestError,
    FormatError,
    IncompleteFamilyError,
    IndexOutOfRangeError,
    InvalidProbabilityError,
    NotAPermutationError,
    OverlapError,
    SizeMismatchError,
    TooLargeForOracleError,
    UnknownRegionError,
    ZetaRangeError,
)
from .forest import (
    DepthIndex,
    ForestFamily,
    Region,
    RegionKey,
    build_dyadic,
    build_family,
    complete_family,
    depth_of,
    region_members,
)
from .pruning import PruneResult, compact, definition_removed_set, prune
from .sim import (
    BenchReport,
    ScalingReport,
    ScenarioConfig,
    TimingSummary,
    gen_pvalues,
    run_scenario,
    scaling_check,
)
from .zeta import ZetaEstimator, apply_zetas, zeta_dkwm, zeta_trivial

__version__ = "0.1.0"

__all__ = [
    "BenchReport",
    "BoundCurve",
    "CurveState",
    "DepthIndex",
    "DuplicateRegionError",
    "ForestError",
    "ForestFamily",
    "FormatError",
    "IncompleteFamilyError",
    "IndexOutOfRangeError",
    "InvalidProbabilityError",
    "NotAPermutationError",
    "OverlapError",
    "PruneResult",
    "Region",
    "RegionKey",
    "ScalingReport",
    "ScenarioConfig",
    "SizeMismatchError",
    "TimingSummary",
    "TooLargeForOracleError",
    "UnknownRegionError",
    "ZetaEstimator",
    "ZetaRangeError",
    "apply_zetas",
    "atom_hit_counts",
    "build_dyadic",
    "build_family",
    "complete_family",
    "compact",
    "curve_from_pvalues",
    "definition_removed_set",
    "depth_of",
    "fast_curve",
    "fdp_curve",
    "gen_pvalues",
    "naive_curve",
    "oracle_vstar_partitions",
    "oracle_vstar_sets",
    "oracle_vstar_subsets",
    "prune",
    "region_members",
    "run_scenario",
    "scaling_check",
    "vstar",
    "zeta_dkwm",
    "zeta_trivial",
]
