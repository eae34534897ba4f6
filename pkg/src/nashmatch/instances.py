"""Market instance types and utility/objective/gradient evaluation.

Four instance families are supported:

* ``LinearInstance``   -- linear utilities, optional disagreement vector
  (``c = 0`` is the Fisher variant, general ``c`` the Arrow-Debreu one).
* ``TwoSidedInstance`` -- linear utilities on both sides of the market;
  the utility vector has 2n components (agents first, then jobs).
* ``SplcInstance``     -- separable piecewise-linear concave utilities,
  stored as per-(agent, good) segment slopes and lengths.
* ``NplcInstance``     -- non-separable piecewise-linear concave utilities,
  each agent's utility a min over affine hyperplanes.

Allocations are plain numpy arrays: an entry-level allocation is an
``(n, n)`` doubly stochastic matrix; an SPLC allocation is ``(n, n, K)``
with the third axis indexing segments.  Instances are immutable after
construction and all evaluation functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "DimensionError",
    "DomainError",
    "UnsupportedModelError",
    "LinearInstance",
    "TwoSidedInstance",
    "SplcInstance",
    "NplcInstance",
    "MarketInstance",
    "Violation",
    "utilities",
    "objective",
    "gradient",
    "validate_allocation",
    "leontief_to_nplc",
]


class DimensionError(ValueError):
    """Shape mismatch between an instance and an allocation."""


class DomainError(ValueError):
    """A utility does not strictly exceed its disagreement value.

    ``agent`` is the index of the first offending component (for two-sided
    instances, indices n..2n-1 refer to jobs).
    """

    def __init__(self, agent: int, value: float, threshold: float):
        self.agent = int(agent)
        self.value = float(value)
        self.threshold = float(threshold)
        super().__init__(
            f"component {agent}: utility {value!r} does not exceed "
            f"disagreement value {threshold!r}"
        )


class UnsupportedModelError(TypeError):
    """Operation not defined for this instance family."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


def _check_finite_nonneg(a: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{what} must be finite")
    if np.any(a < 0):
        raise ValueError(f"{what} must be non-negative")


@dataclass(frozen=True)
class LinearInstance:
    """One-sided market with linear utilities.

    ``u[i, j]`` is the rate at which agent i accrues utility per unit of
    good j; ``c[i]`` is agent i's disagreement utility.  Every row and
    every column of ``u`` must contain a strictly positive entry.
    """

    u: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        u = _readonly(self.u)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DimensionError(f"u must be square, got shape {u.shape}")
        n = u.shape[0]
        c = _readonly(np.zeros(n) if self.c is None else self.c)
        if c.shape != (n,):
            raise DimensionError(f"c must have shape ({n},), got {c.shape}")
        _check_finite_nonneg(u, "u")
        _check_finite_nonneg(c, "c")
        if not np.all((u > 0).any(axis=1)):
            bad = int(np.flatnonzero(~(u > 0).any(axis=1))[0])
            raise ValueError(f"row {bad} of u has no positive entry")
        if not np.all((u > 0).any(axis=0)):
            bad = int(np.flatnonzero(~(u > 0).any(axis=0))[0])
            raise ValueError(f"column {bad} of u has no positive entry")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return self.u.shape[0]

    @property
    def is_fisher(self) -> bool:
        """True when the disagreement point is the origin."""
        return not np.any(self.c)


@dataclass(frozen=True)
class TwoSidedInstance:
    """Two-sided market: workers with rates ``u``, firms with rates ``w``.

    The disagreement point is implicitly the origin in R^(2n).
    """

    u: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        u = _readonly(self.u)
        w = _readonly(self.w)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DimensionError(f"u must be square, got shape {u.shape}")
        if w.shape != u.shape:
            raise DimensionError(f"w shape {w.shape} differs from u shape {u.shape}")
        _check_finite_nonneg(u, "u")
        _check_finite_nonneg(w, "w")
        if not np.all((u > 0).any(axis=1)):
            bad = int(np.flatnonzero(~(u > 0).any(axis=1))[0])
            raise ValueError(f"row {bad} of u has no positive entry")
        if not np.all((w > 0).any(axis=0)):
            bad = int(np.flatnonzero(~(w > 0).any(axis=0))[0])
            raise ValueError(f"column {bad} of w has no positive entry")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return self.u.shape[0]

    @property
    def c(self) -> np.ndarray:
        return np.zeros(2 * self.n)


@dataclass(frozen=True)
class SplcInstance:
    """One-sided market with separable piecewise-linear concave utilities.

    ``slopes[i, j, k]`` and ``lengths[i, j, k]`` describe segment k of the
    utility agent i derives from good j; ``nseg[i, j]`` gives the number of
    active segments (entries beyond it are padding and must be zero).
    Within each (i, j) the active slopes strictly decrease and the active
    lengths sum to at least one unit.
    """

    slopes: np.ndarray
    lengths: np.ndarray
    c: np.ndarray
    nseg: np.ndarray = None

    def __post_init__(self):
        slopes = _readonly(self.slopes)
        lengths = _readonly(self.lengths)
        if slopes.ndim != 3 or slopes.shape[0] != slopes.shape[1]:
            raise DimensionError(f"slopes must be (n, n, K), got {slopes.shape}")
        if lengths.shape != slopes.shape:
            raise DimensionError("lengths shape differs from slopes shape")
        n, _, kmax = slopes.shape
        if self.nseg is None:
            nseg = np.full((n, n), kmax, dtype=int)
        else:
            nseg = np.array(self.nseg, dtype=int)
            nseg.flags.writeable = False
        if nseg.shape != (n, n):
            raise DimensionError(f"nseg must be ({n}, {n}), got {nseg.shape}")
        c = _readonly(np.zeros(n) if self.c is None else self.c)
        if c.shape != (n,):
            raise DimensionError(f"c must have shape ({n},), got {c.shape}")
        _check_finite_nonneg(slopes, "slopes")
        _check_finite_nonneg(lengths, "lengths")
        _check_finite_nonneg(c, "c")
        if np.any(nseg < 1) or np.any(nseg > kmax):
            raise ValueError("nseg entries must lie in 1..K")
        k_idx = np.arange(kmax)
        active = k_idx[None, None, :] < nseg[:, :, None]
        if np.any(slopes[~active] != 0) or np.any(lengths[~active] != 0):
            raise ValueError("padding beyond nseg must be zero")
        if np.any(lengths[active] <= 0) or np.any(lengths[active] > 1):
            raise ValueError("active segment lengths must lie in (0, 1]")
        # strict slope decrease within each (i, j), over active segments only
        both = active[:, :, 1:] & active[:, :, :-1]
        if np.any((slopes[:, :, 1:] >= slopes[:, :, :-1]) & both):
            raise ValueError("segment slopes must strictly decrease within each (i, j)")
        total_len = np.where(active, lengths, 0.0).sum(axis=2)
        if np.any(total_len < 1 - 1e-12):
            i, j = np.unravel_index(int(np.argmin(total_len)), total_len.shape)
            raise ValueError(
                f"segment lengths of ({i}, {j}) sum to {total_len[i, j]} < 1"
            )
        object.__setattr__(self, "slopes", slopes)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "nseg", nseg)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_segment_lists(cls, segments, c=None) -> "SplcInstance":
        """Build from ``segments[i][j] = [(slope, length), ...]`` (ragged)."""
        n = len(segments)
        kmax = max(len(segments[i][j]) for i in range(n) for j in range(n))
        slopes = np.zeros((n, n, kmax))
        lengths = np.zeros((n, n, kmax))
        nseg = np.zeros((n, n), dtype=int)
        for i in range(n):
            if len(segments[i]) != n:
                raise DimensionError("segments must be an n x n table")
            for j in range(n):
                segs = segments[i][j]
                nseg[i, j] = len(segs)
                for k, (s, l) in enumerate(segs):
                    slopes[i, j, k] = s
                    lengths[i, j, k] = l
        return cls(slopes=slopes, lengths=lengths, c=c, nseg=nseg)

    @property
    def n(self) -> int:
        return self.slopes.shape[0]

    @property
    def kmax(self) -> int:
        return self.slopes.shape[2]

    def active_mask(self) -> np.ndarray:
        """Boolean (n, n, K) mask of real (non-padding) segments."""
        k_idx = np.arange(self.kmax)
        return k_idx[None, None, :] < self.nseg[:, :, None]

    def full_unit_utility(self) -> np.ndarray:
        """(n, n) matrix of f_ij(1): utility of one full unit of good j."""
        take = np.minimum(
            self.lengths,
            np.maximum(0.0, 1.0 - (np.cumsum(self.lengths, axis=2) - self.lengths)),
        )
        return (self.slopes * take).sum(axis=2)

    def greedy_fill(self, amounts: np.ndarray) -> np.ndarray:
        """Spread entry-level amounts (n, n) over segments in slope order."""
        prior = np.cumsum(self.lengths, axis=2) - self.lengths
        return np.clip(amounts[:, :, None] - prior, 0.0, self.lengths)


@dataclass(frozen=True)
class NplcInstance:
    """One-sided market with min-of-hyperplanes (NPLC) utilities.

    Agent i's utility for bundle row x_i is
    ``min_k (a[i, k] . x_i + b[i, k])`` over the ``nhyp[i]`` active
    hyperplanes.  At least one active intercept per agent must be zero so
    the empty bundle yields zero utility.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    nhyp: np.ndarray = None

    def __post_init__(self):
        a = _readonly(self.a)
        b = _readonly(self.b)
        if a.ndim != 3 or a.shape[0] != a.shape[2]:
            raise DimensionError(f"a must be (n, K, n), got {a.shape}")
        n, kmax, _ = a.shape
        if b.shape != (n, kmax):
            raise DimensionError(f"b must be ({n}, {kmax}), got {b.shape}")
        if self.nhyp is None:
            nhyp = np.full(n, kmax, dtype=int)
        else:
            nhyp = np.array(self.nhyp, dtype=int)
            nhyp.flags.writeable = False
        if nhyp.shape != (n,):
            raise DimensionError(f"nhyp must be ({n},), got {nhyp.shape}")
        c = _readonly(np.zeros(n) if self.c is None else self.c)
        if c.shape != (n,):
            raise DimensionError(f"c must have shape ({n},), got {c.shape}")
        _check_finite_nonneg(a, "a")
        _check_finite_nonneg(b, "b")
        _check_finite_nonneg(c, "c")
        if np.any(nhyp < 1) or np.any(nhyp > kmax):
            raise ValueError("nhyp entries must lie in 1..K")
        for i in range(n):
            if not np.any(b[i, : nhyp[i]] == 0):
                raise ValueError(f"agent {i} has no hyperplane with zero intercept")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "nhyp", nhyp)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_hyperplane_lists(cls, hyperplanes, c=None) -> "NplcInstance":
        """Build from ``hyperplanes[i] = [(a_vec, b), ...]`` (ragged)."""
        n = len(hyperplanes)
        kmax = max(len(h) for h in hyperplanes)
        a = np.zeros((n, kmax, n))
        b = np.zeros((n, kmax))
        nhyp = np.zeros(n, dtype=int)
        for i, planes in enumerate(hyperplanes):
            nhyp[i] = len(planes)
            for k, (avec, bval) in enumerate(planes):
                a[i, k] = avec
                b[i, k] = bval
        return cls(a=a, b=b, c=c, nhyp=nhyp)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def kmax(self) -> int:
        return self.a.shape[1]


MarketInstance = LinearInstance | TwoSidedInstance | SplcInstance | NplcInstance


def _check_entry_allocation(instance, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    n = instance.n
    if x.shape != (n, n):
        raise DimensionError(f"allocation shape {x.shape}, expected ({n}, {n})")
    return x


def utilities(instance: MarketInstance, x: np.ndarray) -> np.ndarray:
    """Utility vector accrued under allocation ``x``.

    Returns length n for one-sided instances and length 2n for two-sided
    ones (agent utilities first, then job utilities).  For NPLC the value
    is the min over the agent's hyperplanes.
    """
    if isinstance(instance, LinearInstance):
        x = _check_entry_allocation(instance, x)
        return (instance.u * x).sum(axis=1)
    if isinstance(instance, TwoSidedInstance):
        x = _check_entry_allocation(instance, x)
        return np.concatenate(
            [(instance.u * x).sum(axis=1), (instance.w * x).sum(axis=0)]
        )
    if isinstance(instance, SplcInstance):
        x = np.asarray(x, dtype=float)
        if x.shape != instance.slopes.shape:
            raise DimensionError(
                f"allocation shape {x.shape}, expected {instance.slopes.shape}"
            )
        return (instance.slopes * x).sum(axis=(1, 2))
    if isinstance(instance, NplcInstance):
        x = _check_entry_allocation(instance, x)
        n = instance.n
        # value[i, k] = a[i, k] . x[i] + b[i, k]
        value = np.einsum("ikj,ij->ik", instance.a, x) + instance.b
        v = np.empty(n)
        for i in range(n):
            v[i] = value[i, : instance.nhyp[i]].min()
        return v
    raise UnsupportedModelError(f"unknown instance type {type(instance)!r}")


def disagreement_vector(instance: MarketInstance) -> np.ndarray:
    """The disagreement point in the same space as ``utilities``."""
    if isinstance(instance, TwoSidedInstance):
        return np.zeros(2 * instance.n)
    return instance.c


def objective(instance: MarketInstance, v: np.ndarray) -> float:
    """Sum of log utility gains over the disagreement point, in nats."""
    v = np.asarray(v, dtype=float)
    c = disagreement_vector(instance)
    if v.shape != c.shape:
        raise DimensionError(f"utility vector shape {v.shape}, expected {c.shape}")
    gains = v - c
    if np.any(gains <= 0):
        bad = int(np.flatnonzero(gains <= 0)[0])
        raise DomainError(bad, v[bad], c[bad])
    return float(np.log(gains).sum())


def gradient(instance: MarketInstance, x: np.ndarray) -> np.ndarray:
    """Gradient of ``objective(utilities(x))`` with respect to x.

    Defined for linear and two-sided instances only; entries are
    ``u_ij / (v_i - c_i)`` plus, for two-sided instances, ``w_ij / v_j``.
    """
    if isinstance(instance, LinearInstance):
        v = utilities(instance, x)
        gains = v - instance.c
        if np.any(gains <= 0):
            bad = int(np.flatnonzero(gains <= 0)[0])
            raise DomainError(bad, v[bad], instance.c[bad])
        return instance.u / gains[:, None]
    if isinstance(instance, TwoSidedInstance):
        v = utilities(instance, x)
        if np.any(v <= 0):
            bad = int(np.flatnonzero(v <= 0)[0])
            raise DomainError(bad, v[bad], 0.0)
        n = instance.n
        return instance.u / v[:n, None] + instance.w / v[None, n:]
    raise UnsupportedModelError(
        "gradient is defined for linear and two-sided instances only"
    )


@dataclass(frozen=True)
class Violation:
    """One feasibility defect found by ``validate_allocation``."""

    kind: str  # 'row-sum' | 'col-sum' | 'negative' | 'segment-bound' | 'padding'
    where: tuple
    amount: float

    def __str__(self):
        return f"{self.kind} at {self.where}: off by {self.amount:.3e}"


def validate_allocation(instance: MarketInstance, x, tol: float = 1e-9) -> list:
    """Check ``x`` is a fractional perfect matching for the instance.

    Returns an empty list when all row and column sums are within ``tol``
    of one, entries are >= -tol and, for SPLC, segment values respect
    their length bounds.  Diagnostic: never raises on bad input.
    """
    x = np.asarray(x, dtype=float)
    n = instance.n
    out = []
    if isinstance(instance, SplcInstance):
        if x.shape != instance.slopes.shape:
            return [Violation("shape", (x.shape,), 0.0)]
        row = x.sum(axis=(1, 2))
        col = x.sum(axis=(0, 2))
        over = x - instance.lengths
        for i, j, k in zip(*np.nonzero(over > tol)):
            out.append(Violation("segment-bound", (int(i), int(j), int(k)), float(over[i, j, k])))
        inactive = ~instance.active_mask()
        for i, j, k in zip(*np.nonzero(inactive & (np.abs(x) > tol))):
            out.append(Violation("padding", (int(i), int(j), int(k)), float(x[i, j, k])))
    else:
        if x.shape != (n, n):
            return [Violation("shape", (x.shape,), 0.0)]
        row = x.sum(axis=1)
        col = x.sum(axis=0)
    for i in np.flatnonzero(np.abs(row - 1) > tol):
        out.append(Violation("row-sum", (int(i),), float(row[i] - 1)))
    for j in np.flatnonzero(np.abs(col - 1) > tol):
        out.append(Violation("col-sum", (int(j),), float(col[j] - 1)))
    neg = np.asarray(x < -tol).nonzero()
    for idx in zip(*neg):
        out.append(Violation("negative", tuple(int(t) for t in idx), float(x[idx])))
    return out


def leontief_to_nplc(interest_sets: Sequence[Sequence[int]],
                     ratios: Sequence[Sequence[float]],
                     c=None) -> NplcInstance:
    """Encode Leontief preferences ``min_{j in S_i} x_ij / a_ij`` as NPLC.

    ``interest_sets[i]`` lists the goods agent i wants and ``ratios[i]``
    the matching positive proportions a_ij.  Each wanted good becomes one
    hyperplane with coefficient 1/a_ij on that good and zero intercept.
    """
    n = len(interest_sets)
    if len(ratios) != n:
        raise DimensionError("interest_sets and ratios must have equal length")
    hyperplanes = []
    for i, (goods, coefs) in enumerate(zip(interest_sets, ratios)):
        if len(goods) == 0:
            raise ValueError(f"agent {i} has an empty interest set")
        if len(goods) != len(coefs):
            raise DimensionError(f"agent {i}: interest set and ratios differ in length")
        planes = []
        for j, aij in zip(goods, coefs):
            if aij <= 0:
                raise ValueError(f"agent {i}, good {j}: ratio must be positive")
            vec = np.zeros(n)
            vec[j] = 1.0 / aij
            planes.append((vec, 0.0))
        hyperplanes.append(planes)
    return NplcInstance.from_hyperplane_lists(hyperplanes, c=c)
