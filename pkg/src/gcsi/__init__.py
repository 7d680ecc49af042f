"""Generalized Cauchy-Schwarz inequality on finite-dimensional Hilbert C*-modules."""

__version__ = "0.1.0"

from .classify import ClassificationReport, classify
from .engine import (
    MEMBER,
    NON_MEMBER,
    UNDECIDED,
    GcsiVerdict,
    brute_force_index_2d,
    check_fixed_lambda,
    equality_defect,
    gcsi_index,
    pair_stats,
    sqrt_form_margin,
)
from .estimators import GcsiIndex, OperatorClassifier, OperatorFeatures
from .harness import EnsembleSpec, TheoremResult, generate, repro, verify
from .linalg import DEFAULT_TOL, DomainError, Tolerances
from .module import ModuleElement, ModuleSpace, inner
from .search import SearchConfig

__all__ = [
    "ClassificationReport", "classify", "MEMBER", "NON_MEMBER", "UNDECIDED", "GcsiVerdict",
    "brute_force_index_2d", "check_fixed_lambda", "equality_defect", "gcsi_index", "pair_stats",
    "sqrt_form_margin", "GcsiIndex", "OperatorClassifier", "OperatorFeatures", "EnsembleSpec",
    "TheoremResult", "generate", "repro", "verify", "DEFAULT_TOL", "DomainError", "Tolerances",
    "ModuleElement", "ModuleSpace", "inner", "SearchConfig",
]
