"""Nash-bargaining solvers for one-sided and two-sided matching markets."""

from .instances import (
    DimensionError,
    DomainError,
    UnsupportedModelError,
    LinearInstance,
    TwoSidedInstance,
    SplcInstance,
    NplcInstance,
    utilities,
    objective,
    gradient,
    validate_allocation,
    leontief_to_nplc,
)
from .results import SolveResult, Termination

__all__ = [
    "DimensionError",
    "DomainError",
    "UnsupportedModelError",
    "LinearInstance",
    "TwoSidedInstance",
    "SplcInstance",
    "NplcInstance",
    "utilities",
    "objective",
    "gradient",
    "validate_allocation",
    "leontief_to_nplc",
    "SolveResult",
    "Termination",
]

__version__ = "0.1.0"
