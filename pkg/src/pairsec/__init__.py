"""Security and efficiency estimates for pairing-friendly elliptic curves."""
__version__ = "0.1.0"

from .cost_model import (
    CostPoint,
    CostSearchResult,
    GridConfig,
    ModelParams,
    asymptotic_bits,
    evaluate_point,
    optimize,
    variant,
)
from .dickman import log2_rho, rho
from .errors import (
    InfeasibleCurveError,
    PairsecError,
    SeedNotFoundError,
    SetupValidationError,
    UnknownCurveError,
)
from .estimator import SecurityEstimator
from .families import CurveInstance, FamilySpec, default_registry, find_seed, instantiate
from .intpoly import BiPoly, UniPoly, resultant_prs, resultant_uni, resultant_x
from .norm_mc import NormEstimate, estimate_norms
from .pairing_cost import PairingModel, compare_at_level, pairing_cost
from .security import SecurityProfile, SweepResult, curve_side_bits, min_p_for_level, profile, sweep_family
from .tnfs_setup import TnfsSetup, build_setup

__all__ = [
    "BiPoly", "CostPoint", "CostSearchResult", "CurveInstance", "FamilySpec", "GridConfig",
    "InfeasibleCurveError", "ModelParams", "NormEstimate", "PairingModel", "PairsecError",
    "SecurityEstimator", "SecurityProfile", "SeedNotFoundError", "SetupValidationError",
    "SweepResult", "TnfsSetup", "UniPoly", "UnknownCurveError", "asymptotic_bits",
    "build_setup", "compare_at_level", "curve_side_bits", "default_registry",
    "estimate_norms", "evaluate_point", "find_seed", "instantiate", "log2_rho",
    "min_p_for_level", "optimize", "pairing_cost", "profile", "resultant_prs",
    "resultant_uni", "resultant_x", "rho", "sweep_family", "variant",
]
