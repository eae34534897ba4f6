"""Common solver result and diagnostics types."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class Termination(str, enum.Enum):
    GAP_REACHED = "GapReached"
    ITER_LIMIT = "IterLimit"
    TIME_LIMIT = "TimeLimit"
    INFEASIBLE = "Infeasible"


@dataclass
class SolveResult:
    """Outcome of one solver run.

    ``allocation`` is entry-level (n, n) except for SPLC, where it is the
    segment-level (n, n, K) array.  ``objective`` is in nats and equals the
    model objective at (allocation, v); it is NaN for infeasible runs.
    ``gap`` is the solver's relative optimality gap at termination.
    """

    allocation: np.ndarray
    v: np.ndarray
    objective: float
    gap: float
    iterations: int
    wall_time: float
    termination: Termination


@dataclass
class IterationRecord:
    """One per-iteration diagnostics event emitted to a sink."""

    t: int
    wall_time: float
    objective_bound: float  # CCP: eta; FW: current objective
    gap: float
    sigma: float = float("nan")  # CCP only
    f_lower: float = float("nan")  # CCP only
    step_size: float = float("nan")  # FW only
    note: str = ""


@dataclass
class Diagnostics:
    """Default diagnostics sink: keeps every record in order."""

    records: list = field(default_factory=list)

    def __call__(self, record: IterationRecord) -> None:
        self.records.append(record)
