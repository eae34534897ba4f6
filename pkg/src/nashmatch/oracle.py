"""Grid-search ground truth for tiny instances.

``brute_force_solve`` enumerates all n! permutation matrices, sweeps a
lattice over their convex-combination weights, evaluates the bargaining
objective at every feasible lattice point, and polishes the best point
with exact line searches toward each permutation vertex.  It exists as
an independent oracle for the iterative solvers, so it shares no code
with them.

Full lattice enumeration is only tractable through n = 3 (the weight
simplex has n! coordinates); for n = 4 the sweep covers every support of
at most three permutations and the vertex line searches iterate to
stall, which recovers the global optimum since the objective is concave.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .assignment import permutation_utilities
from .instances import TwoSidedInstance, objective, utilities

__all__ = ["brute_force_solve"]

_GRID_CACHE = {}


def simplex_grid(k: int, steps: int) -> np.ndarray:
    """All nonnegative integer k-vectors summing to ``steps``, as rows."""
    key = (k, steps)
    cached = _GRID_CACHE.get(key)
    if cached is not None:
        return cached
    out = _compositions(k, steps)
    if k <= 8 and math.comb(steps + k - 1, k - 1) < 5_000_000:
        _GRID_CACHE[key] = out
    return out


def _compositions(k: int, steps: int) -> np.ndarray:
    out = np.empty((math.comb(steps + k - 1, k - 1), k), dtype=np.int32)
    _fill_compositions(out, 0, 0, k, steps)
    return out


def _fill_compositions(out, row0, col, k, steps):
    """Write all compositions of ``steps`` into columns col..col+k-1."""
    if k == 1:
        out[row0, col] = steps
        return 1
    if k == 2:
        # vectorized innermost level: (f, steps - f)
        count = steps + 1
        vals = np.arange(count, dtype=np.int32)
        out[row0:row0 + count, col] = vals
        out[row0:row0 + count, col + 1] = steps - vals
        return count
    row = row0
    for first in range(steps + 1):
        written = _fill_compositions(out, row, col + 1, k - 1, steps - first)
        out[row:row + written, col] = first
        row += written
    return row - row0


def _disagreement(instance) -> np.ndarray:
    if isinstance(instance, TwoSidedInstance):
        return np.zeros(2 * instance.n)
    return instance.c


def _vertex_line_search(v, vhat, c, tol=1e-12):
    """argmax_t f((1-t) v + t vhat) on [0, 1] by bisecting the derivative."""
    diff = vhat - v
    lo, hi = 0.0, 1.0
    bad = diff < 0
    if np.any(bad):
        # keep every coordinate strictly above c
        cap = (v[bad] - c[bad]) / (v[bad] - vhat[bad])
        hi = min(1.0, float(cap.min()) * (1 - 1e-12))
        if hi <= 0:
            return 0.0

    def dphi(t):
        denom = (1 - t) * v + t * vhat - c
        return float(np.sum(diff / denom))

    if dphi(0.0) <= 0:
        return 0.0
    if dphi(hi) >= 0:
        return hi
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if dphi(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def brute_force_solve(instance, resolution: float = 0.02):
    """Ground-truth objective and allocation for instances with n <= 4.

    Returns ``(f_star, x_star)``.  ``resolution`` is the lattice step for
    the permutation-weight sweep and must be 0.02 or 0.01.
    """
    from .instances import LinearInstance

    if not isinstance(instance, (LinearInstance, TwoSidedInstance)):
        raise TypeError("brute force supports linear and two-sided instances")
    n = instance.n
    if n > 4:
        raise ValueError(f"brute force limited to n <= 4, got n = {n}")
    if resolution not in (0.02, 0.01):
        raise ValueError("resolution must be 0.02 or 0.01")
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    k = perms.shape[0]
    pu = np.stack([permutation_utilities(instance, p) for p in perms])
    c = _disagreement(instance)
    steps = round(1.0 / resolution)

    best_val = -np.inf
    best_w = None
    slack_best = -np.inf
    slack_w = None
    if n <= 3:
        supports = [np.arange(k)]
        grid = simplex_grid(k, steps).astype(float) / steps
    else:
        supports = [np.array(s) for s in itertools.combinations(range(k), 3)]
        grid = simplex_grid(3, steps).astype(float) / steps
    for sup in supports:
        V = grid @ pu[sup]
        gains = V - c
        slack = gains.min(axis=1)
        idx = int(np.argmax(slack))
        if slack[idx] > slack_best:
            slack_best = slack[idx]
            slack_w = (sup, grid[idx])
        feas = slack > 0
        if np.any(feas):
            vals = np.where(feas, np.log(np.where(gains > 0, gains, 1.0)).sum(axis=1), -np.inf)
            idx = int(np.argmax(vals))
            if vals[idx] > best_val:
                best_val = float(vals[idx])
                best_w = (sup, grid[idx])

    weights = np.zeros(k)
    if best_w is None:
        # no strictly feasible lattice point: start from the max-slack one
        sup, row = slack_w
        weights[sup] = row
    else:
        sup, row = best_w
        weights[sup] = row
    v = weights @ pu

    if best_w is None:
        # lift the worst coordinate above c before optimizing the objective
        for _ in range(4 * k):
            gains = v - c
            if gains.min() > 0:
                break
            worst = int(np.argmin(gains))
            target = int(np.argmax(pu[:, worst]))
            t = 0.5  # any interior blend raises the worst coordinate
            weights = (1 - t) * weights
            weights[target] += t
            v = weights @ pu
        if (v - c).min() <= 0:
            raise ValueError("instance appears infeasible to the oracle")

    passes = 1 if n <= 3 else 200
    for _ in range(passes):
        improved = 0.0
        for t_idx in range(k):
            vhat = pu[t_idx]
            t = _vertex_line_search(v, vhat, c)
            if t <= 0:
                continue
            new_v = (1 - t) * v + t * vhat
            gain_new = np.log(new_v - c).sum()
            gain_old = np.log(v - c).sum()
            if gain_new > gain_old + 1e-15:
                improved += gain_new - gain_old
                weights = (1 - t) * weights
                weights[t_idx] += t
                v = new_v
        if improved < 1e-12:
            break

    x_star = np.zeros((n, n))
    rows = np.arange(n)
    for wt, perm in zip(weights, perms):
        if wt > 0:
            x_star[rows, perm] += wt
    f_star = objective(instance, utilities(instance, x_star))
    return f_star, x_star
