"""Limit-cycle analysis for planar Lienard systems dx = y - F(x), dy = -g(x).

The package detects and counts limit cycles through the half-return map,
computes the potential-based amplitude upper bound from y-axis intercepts,
mechanically verifies the exact-count theorem hypotheses, and evaluates the
small-perturbation radius criterion in the canonical plane.
"""

from .amplitude import AlphaBarResult, alpha_bar, solve_alpha
from .averaging import (PhiProblem, PhiRoots, canonical_to_lienard,
                        lienard_to_canonical, phi, phi_roots, quintic_radii)
from .catalog import builtin, builtin_names
from .cycles import (LimitCycle, PotentialDecomposition, PotentialScan,
                     ReturnMapScan, find_limit_cycles, half_return,
                     potential_decomposition, potential_scan, potential_value,
                     scan_cycles)
from .errors import (AnalysisError, ConfigError, DomainError, LienardError,
                     NoRootError, NumericalError, StructuralError,
                     UnknownModelError)
from .functions import (FunctionModel, LienardSystem, Segment, ValidationReport,
                        ZeroStructure, find_zero_structure, validate_model)
from .integrate import (EventSpec, PhaseState, StepControl, Trajectory,
                        integrate, path_potential_delta, vector_field)
from .model_files import load_system, save_system
from .theorems import TheoremReport, check_hypotheses, predict_count

__version__ = "1.0.0"

__all__ = [
    "AlphaBarResult", "AnalysisError", "ConfigError", "DomainError",
    "EventSpec", "FunctionModel", "LienardError", "LienardSystem",
    "LimitCycle", "NoRootError", "NumericalError", "PhaseState", "PhiProblem",
    "PhiRoots", "PotentialDecomposition", "PotentialScan", "ReturnMapScan",
    "Segment", "StepControl", "StructuralError", "TheoremReport", "Trajectory",
    "UnknownModelError", "ValidationReport", "ZeroStructure", "alpha_bar",
    "builtin", "builtin_names", "canonical_to_lienard", "check_hypotheses",
    "eval_model", "find_limit_cycles", "find_zero_structure", "half_return",
    "integrate", "lienard_to_canonical", "load_system", "path_potential_delta",
    "phi", "phi_roots", "potential_decomposition", "potential_scan",
    "potential_value", "predict_count", "quintic_radii", "save_system",
    "scan_cycles", "solve_alpha", "validate_model", "vector_field",
]

from .functions import eval as eval_model  # noqa: E402  (keep builtin eval clear)
