"""Shared LP scaffolding for the five market models.

Every linear program in the suite (feasibility certificates, Pareto
checks, CCP masters) shares the same leading structure: a block of
allocation columns constrained by the fractional-perfect-matching rows,
optionally followed by utility-definition or hyperplane rows.  This
module builds those blocks once, in vectorized COO form, and provides
crash bases seeded from an integral matching so the simplex never pays
for a cold phase 1 on large instances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import lp as lpmod
from .instances import (
    LinearInstance,
    NplcInstance,
    SplcInstance,
    TwoSidedInstance,
    utilities,
)

__all__ = [
    "ModelBlocks",
    "model_blocks",
    "matching_crash_token",
    "initial_matching_weights",
    "integral_allocation",
]


def initial_matching_weights(instance) -> np.ndarray:
    """Weight matrix whose max-weight matching seeds the solvers.

    Entry (i, j) is the utility of assigning good/job j to agent i
    integrally (two-sided: both sides' utilities summed).
    """
    if isinstance(instance, LinearInstance):
        return instance.u.copy()
    if isinstance(instance, TwoSidedInstance):
        return instance.u + instance.w
    if isinstance(instance, SplcInstance):
        return instance.full_unit_utility()
    if isinstance(instance, NplcInstance):
        vals = instance.a.transpose(0, 2, 1) + instance.b[:, None, :]
        k_idx = np.arange(instance.kmax)
        inactive = k_idx[None, None, :] >= instance.nhyp[:, None, None]
        vals = np.where(inactive, np.inf, vals)
        return vals.min(axis=2)
    raise TypeError(f"unknown instance type {type(instance)!r}")


def integral_allocation(instance, perm: np.ndarray) -> np.ndarray:
    """The model-shaped allocation that assigns good perm[i] to agent i."""
    n = instance.n
    P = np.zeros((n, n))
    P[np.arange(n), perm] = 1.0
    if isinstance(instance, SplcInstance):
        return instance.greedy_fill(P)
    return P


@dataclass
class ModelBlocks:
    """Column/row layout shared by every LP over one instance's allocations.

    Columns 0..nx-1 are allocation variables; ``value_rows`` holds the
    utility-defining rows (with a +1 column for each v variable to be
    appended by the caller at ``v_offset``).
    """

    instance: object
    n: int
    nx: int  # allocation column count
    v_dim: int  # utility vector length (n, or 2n for two-sided)
    x_lower: np.ndarray
    x_upper: np.ndarray
    match_rows: sp.csr_matrix  # 2n rows over the x block
    # value rows over [x | v] columns: v_relation per row, value_rhs
    value_rows_x: sp.csr_matrix  # coefficients on x
    value_rows_v: sp.csr_matrix  # coefficients on v (shape rows x v_dim)
    value_relations: np.ndarray
    value_rhs: np.ndarray

    def x_matrix(self, xcols: np.ndarray):
        """Reshape a flat allocation column block to the model's shape."""
        inst = self.instance
        if isinstance(inst, SplcInstance):
            return xcols.reshape(inst.n, inst.n, inst.kmax)
        return xcols.reshape(self.n, self.n)

    def x_flat(self, x):
        return np.asarray(x, dtype=float).ravel()


def _matching_rows_entry(n: int) -> sp.csr_matrix:
    cols = np.arange(n * n)
    agent = np.repeat(np.arange(n), n)
    good = np.tile(np.arange(n), n)
    ri = np.concatenate([agent, n + good])
    ci = np.concatenate([cols, cols])
    return sp.csr_matrix((np.ones(2 * n * n), (ri, ci)), shape=(2 * n, n * n))


def _matching_rows_segment(n: int, k: int) -> sp.csr_matrix:
    cols = np.arange(n * n * k)
    agent = cols // (n * k)
    good = (cols // k) % n
    ri = np.concatenate([agent, n + good])
    ci = np.concatenate([cols, cols])
    return sp.csr_matrix((np.ones(2 * n * n * k), (ri, ci)), shape=(2 * n, n * n * k))


def model_blocks(instance, fix_two_sided_zeros: bool = False) -> ModelBlocks:
    """Build the matching rows and utility rows for one instance.

    With ``fix_two_sided_zeros`` the caller asserts that the support
    ``{(i, j): u_ij > 0 or w_ij > 0}`` admits a perfect matching, and
    columns outside the support get a zero upper bound.
    """
    n = instance.n
    if isinstance(instance, LinearInstance):
        nx, v_dim = n * n, n
        x_lower, x_upper = np.zeros(nx), np.ones(nx)
        match = _matching_rows_entry(n)
        cols = np.arange(nx)
        uflat = instance.u.ravel()
        mask = uflat != 0
        vr_x = sp.csr_matrix(
            (-uflat[mask], (cols[mask] // n, cols[mask])), shape=(n, nx)
        )
        vr_v = sp.identity(n, format="csr")
        rel = np.full(n, "=")
        rhs = np.zeros(n)
    elif isinstance(instance, TwoSidedInstance):
        nx, v_dim = n * n, 2 * n
        x_lower, x_upper = np.zeros(nx), np.ones(nx)
        if fix_two_sided_zeros:
            dead = (instance.u.ravel() == 0) & (instance.w.ravel() == 0)
            x_upper[dead] = 0.0
        match = _matching_rows_entry(n)
        cols = np.arange(nx)
        uflat, wflat = instance.u.ravel(), instance.w.ravel()
        um, wm = uflat != 0, wflat != 0
        ri = np.concatenate([cols[um] // n, n + cols[wm] % n])
        ci = np.concatenate([cols[um], cols[wm]])
        dat = np.concatenate([-uflat[um], -wflat[wm]])
        vr_x = sp.csr_matrix((dat, (ri, ci)), shape=(2 * n, nx))
        vr_v = sp.identity(2 * n, format="csr")
        rel = np.full(2 * n, "=")
        rhs = np.zeros(2 * n)
    elif isinstance(instance, SplcInstance):
        k = instance.kmax
        nx, v_dim = n * n * k, n
        x_lower = np.zeros(nx)
        x_upper = instance.lengths.ravel().copy()  # padding has length 0
        match = _matching_rows_segment(n, k)
        cols = np.arange(nx)
        sflat = instance.slopes.ravel()
        mask = sflat != 0
        vr_x = sp.csr_matrix(
            (-sflat[mask], (cols[mask] // (n * k), cols[mask])), shape=(n, nx)
        )
        vr_v = sp.identity(n, format="csr")
        rel = np.full(n, "=")
        rhs = np.zeros(n)
    elif isinstance(instance, NplcInstance):
        k = instance.kmax
        nx, v_dim = n * n, n
        x_lower, x_upper = np.zeros(nx), np.ones(nx)
        match = _matching_rows_entry(n)
        # one row per active hyperplane: v_i - a[i,k] . x_i <= b[i,k]
        ri, ci, dat, vri, vci, vdat, rhs_list = [], [], [], [], [], [], []
        row = 0
        for i in range(n):
            for kk in range(instance.nhyp[i]):
                a = instance.a[i, kk]
                nz = np.flatnonzero(a)
                ri.append(np.full(nz.size, row))
                ci.append(i * n + nz)
                dat.append(-a[nz])
                vri.append(row)
                vci.append(i)
                vdat.append(1.0)
                rhs_list.append(instance.b[i, kk])
                row += 1
        vr_x = sp.csr_matrix(
            (np.concatenate(dat), (np.concatenate(ri), np.concatenate(ci))),
            shape=(row, nx),
        )
        vr_v = sp.csr_matrix((vdat, (vri, vci)), shape=(row, n))
        rel = np.full(row, "<")
        rhs = np.array(rhs_list)
    else:
        raise TypeError(f"unknown instance type {type(instance)!r}")
    return ModelBlocks(
        instance=instance,
        n=n,
        nx=nx,
        v_dim=v_dim,
        x_lower=x_lower,
        x_upper=x_upper,
        match_rows=match,
        value_rows_x=vr_x,
        value_rows_v=vr_v,
        value_relations=rel,
        value_rhs=rhs,
    )


def initial_matching_statuses(blocks: ModelBlocks, perm: np.ndarray):
    """Crash data for the matching rows given an integral matching.

    Returns (basis_for_match_rows, upper_cols): the column to make basic
    for each of the 2n matching rows (-1 marks "use the row's own
    logical"; good row perm[0] keeps its logical for rank completion,
    since the matching rows sum-cancel) and the columns to pin at their
    upper bound (saturated SPLC segments of the matched pairs).
    """
    inst = blocks.instance
    n = blocks.n
    basis = np.full(2 * n, -1, dtype=int)
    upper_cols = []
    if isinstance(inst, SplcInstance):
        k = inst.kmax
        take = inst.greedy_fill(np.eye(n))  # spread 1 unit over segments
        for i in range(n):
            j = int(perm[i])
            used = np.flatnonzero(take[i, j] > 0)
            if used.size == 0:
                used = np.array([0])
            for kk in used[:-1]:
                upper_cols.append((i * n + j) * k + int(kk))
            basis[i] = (i * n + j) * k + int(used[-1])
        for j in range(n):
            if j != perm[0]:
                basis[n + j] = (0 * n + j) * k + 0
    else:
        for i in range(n):
            basis[i] = i * n + int(perm[i])
        for j in range(n):
            if j != perm[0]:
                basis[n + j] = 0 * n + j
    return basis, upper_cols


def matching_crash_token(blocks: ModelBlocks, lp: lpmod.LinearProgram,
                         perm: np.ndarray, extra_basis: dict):
    """Full warm-start token for an LP led by the matching rows.

    ``extra_basis`` maps row index -> basic column for rows beyond the
    matching block; rows absent from it keep their logical basic.
    """
    nvars = lp.nvars
    m = lp.nrows
    match_basis, upper_cols = initial_matching_statuses(blocks, perm)
    basis = np.empty(m, dtype=int)
    vstat = np.full(nvars + m, lpmod.NB_LOWER, dtype=np.int8)
    free = ~np.isfinite(lp.lower) & ~np.isfinite(lp.upper)
    vstat[:nvars][free] = lpmod.NB_FREE
    only_upper = ~np.isfinite(lp.lower) & np.isfinite(lp.upper)
    vstat[:nvars][only_upper] = lpmod.NB_UPPER
    for col in upper_cols:
        vstat[col] = lpmod.NB_UPPER
    for r in range(m):
        if r < 2 * blocks.n and match_basis[r] >= 0:
            basis[r] = match_basis[r]
        elif r in extra_basis:
            basis[r] = extra_basis[r]
        else:
            basis[r] = nvars + r  # the row's own logical
    vstat[basis] = lpmod.BASIC
    return basis, vstat
