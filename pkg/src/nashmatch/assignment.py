"""Combinatorial machinery on the Birkhoff polytope.

Max-weight perfect matching (used for solver initial points and
Frank-Wolfe atoms) and Birkhoff-von Neumann decomposition of doubly
stochastic matrices into lotteries over permutations.

Permutations are integer arrays ``perm`` with ``perm[i]`` the good/job
assigned to agent i; ``as_permutation`` validates bijectivity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .instances import (
    LinearInstance,
    NplcInstance,
    SplcInstance,
    TwoSidedInstance,
    utilities,
    validate_allocation,
)

__all__ = [
    "as_permutation",
    "permutation_matrix",
    "max_weight_perfect_matching",
    "MatchingLottery",
    "BvnDegeneracyError",
    "bvn_decompose",
    "permutation_utilities",
    "expected_utility_of_lottery",
]


def as_permutation(perm) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.int64)
    n = perm.size
    if perm.ndim != 1 or np.any(np.sort(perm) != np.arange(n)):
        raise ValueError(f"not a permutation: {perm!r}")
    return perm


def permutation_matrix(perm: np.ndarray) -> np.ndarray:
    n = perm.size
    P = np.zeros((n, n))
    P[np.arange(n), perm] = 1.0
    return P


def max_weight_perfect_matching(W: np.ndarray):
    """Permutation maximizing sum_i W[i, perm[i]], with its value.

    Ties between equally heavy matchings break toward the
    lexicographically smallest permutation: the dual potentials of the
    O(n^3) assignment solve expose the tight subgraph that carries every
    optimal matching, and a second pass picks the smallest column per
    row that keeps the tight graph perfectly matchable.
    """
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError(f"weight matrix must be square, got {W.shape}")
    if not np.all(np.isfinite(W)):
        raise ValueError("weights must be finite")
    n = W.shape[0]
    if n == 1:
        return np.zeros(1, dtype=np.int64), float(W[0, 0])
    col4row, u, v = backend.solve_assignment_min(-W)
    # maximization potentials: pu_i + pv_j >= W_ij, tight on optimal edges
    pu, pv = -u, -v
    slack = pu[:, None] + pv[None, :] - W
    tol = 1e-9 * max(1.0, float(np.abs(W).max()))
    tight = slack <= tol
    perm = backend.lex_tighten(tight, col4row)
    value = float(W[np.arange(n), perm].sum())
    return perm, value


class BvnDegeneracyError(RuntimeError):
    """Support of the residual admits no perfect matching."""


@dataclass
class MatchingLottery:
    """Weighted list of permutations; weights sum to one."""

    permutations: np.ndarray  # (count, n) int
    weights: np.ndarray  # (count,)

    def __post_init__(self):
        self.permutations = np.asarray(self.permutations, dtype=np.int64)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.permutations.ndim != 2:
            raise ValueError("permutations must be a (count, n) array")
        if self.weights.shape != (self.permutations.shape[0],):
            raise ValueError("one weight per permutation required")

    @property
    def n(self) -> int:
        return self.permutations.shape[1]

    def __len__(self) -> int:
        return self.permutations.shape[0]

    def reconstruct(self) -> np.ndarray:
        """The doubly stochastic matrix this lottery mixes to."""
        x = np.zeros((self.n, self.n))
        rows = np.arange(self.n)
        for perm, wt in zip(self.permutations, self.weights):
            x[rows, perm] += wt
        return x

    def sample(self, rng: np.random.Generator, size: int = 1) -> np.ndarray:
        """Draw permutations i.i.d. from the lottery (one multinomial)."""
        counts = rng.multinomial(size, self.weights / self.weights.sum())
        picks = np.repeat(np.arange(len(self)), counts)
        return self.permutations[picks]


def bvn_decompose(x: np.ndarray, tol: float = 1e-9) -> MatchingLottery:
    """Birkhoff-von Neumann decomposition of a doubly stochastic matrix.

    Repeatedly finds a perfect matching on the support ``x > tol``,
    subtracts the smallest matched entry, and stops once the residual
    mass falls below ``n * tol`` (the remainder is discarded and weights
    renormalized).  Emits at most n^2 - 2n + 2 permutations.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if x.shape != (n, n):
        raise ValueError("allocation must be square")
    residual = x.copy()
    perms = []
    weights = []
    total = 1.0
    hint = None
    while total > n * tol:
        support = residual > tol
        hint = backend.kuhn_matching(support, hint)
        if hint is None:
            raise BvnDegeneracyError(
                f"no perfect matching on the support with {total:.3e} mass left"
            )
        w = float(residual[np.arange(n), hint].min())
        perms.append(hint.copy())
        weights.append(w)
        residual[np.arange(n), hint] -= w
        total -= w
        if len(perms) > n * n + 2:
            raise BvnDegeneracyError("decomposition failed to terminate")
    weights = np.asarray(weights)
    lottery = MatchingLottery(np.asarray(perms), weights / weights.sum())
    return lottery


def permutation_utilities(instance, perm: np.ndarray) -> np.ndarray:
    """Utility vector of an integral matching, in O(n) per model."""
    n = instance.n
    rows = np.arange(n)
    if isinstance(instance, LinearInstance):
        return instance.u[rows, perm]
    if isinstance(instance, TwoSidedInstance):
        inv = np.empty(n, dtype=np.int64)
        inv[perm] = rows
        return np.concatenate(
            [instance.u[rows, perm], instance.w[inv, np.arange(n)]]
        )
    if isinstance(instance, SplcInstance):
        return instance.full_unit_utility()[rows, perm]
    if isinstance(instance, NplcInstance):
        return utilities(instance, permutation_matrix(perm))
    raise TypeError(f"unknown instance type {type(instance)!r}")


def expected_utility_of_lottery(instance, lottery: MatchingLottery) -> np.ndarray:
    """Expected utilities under the lottery; for linear and two-sided
    instances this equals the utilities of the reconstructed fractional
    allocation."""
    out = None
    for perm, wt in zip(lottery.permutations, lottery.weights):
        pu = wt * permutation_utilities(instance, perm)
        out = pu if out is None else out + pu
    return out
