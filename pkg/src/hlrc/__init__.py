"""Hierarchical locally recoverable codes with availability.

Construction of q-ary Reed-Muller codes with nested affine-flat recovery and
of fiber-product evaluation codes (Hermitian, additive families) over the
affine line, plus erasure decoders, brute-force verification oracles, and a
deterministic simulation harness.
"""

from .gf import FieldSpec, build_field, subfield_linear_independent
from .codes import EvaluationCode
from .rm import RMSpec, rm_build, rm_params, rm_hierarchy_params
from .fiber import (
    CurvePoint,
    FactorCurve,
    FiberSpec,
    artin_schreier_spec,
    build_fiber_code,
    enumerate_split_points,
    fiber_params,
    hermitian_spec,
    middle_support,
    recovery_support,
    verify_rm_embedding,
)
from .recovery import (
    ErasureWord,
    HierarchyStructure,
    RecoveryReport,
    build_fiber_hierarchy,
    build_rm_hierarchy,
    check_structure,
    hierarchical_recover,
    interpolate_erased,
    peel_level,
    solve_erasures_ml,
)
from .oracle import (
    DistanceResult,
    dimension_rank,
    exhaustive_erasure_check,
    min_distance_bruteforce,
)
from .sim import ErasureModel, TrialStats, run_trials

__all__ = [
    "FieldSpec",
    "build_field",
    "subfield_linear_independent",
    "EvaluationCode",
    "RMSpec",
    "rm_build",
    "rm_params",
    "rm_hierarchy_params",
    "CurvePoint",
    "FactorCurve",
    "FiberSpec",
    "artin_schreier_spec",
    "build_fiber_code",
    "enumerate_split_points",
    "fiber_params",
    "hermitian_spec",
    "middle_support",
    "recovery_support",
    "verify_rm_embedding",
    "ErasureWord",
    "HierarchyStructure",
    "RecoveryReport",
    "build_fiber_hierarchy",
    "build_rm_hierarchy",
    "check_structure",
    "hierarchical_recover",
    "interpolate_erased",
    "peel_level",
    "solve_erasures_ml",
    "DistanceResult",
    "dimension_rank",
    "exhaustive_erasure_check",
    "min_distance_bruteforce",
    "ErasureModel",
    "TrialStats",
    "run_trials",
]
