"""Feasibility certificates and Pareto checks, both as LPs.

``feasibility_certificate`` maximizes the worst utility slack
min_i (v_i - c_i) over the model's feasible allocations; a positive
optimum certifies the bargaining problem is feasible and the maximizer
doubles as the strictly interior point used for cut repair and solver
initialization.  ``pareto_check`` certifies that a utility vector is
undominated by maximizing total utility above it.
"""

from __future__ import annotations

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
from .programs import ModelBlocks, matching_crash_token, model_blocks

__all__ = ["feasibility_certificate", "pareto_check"]


def _disagreement(instance):
    if isinstance(instance, TwoSidedInstance):
        return np.zeros(2 * instance.n)
    return instance.c


def feasibility_certificate(instance):
    """Maximize t with v_i(x) - c_i >= t; returns (t*, x_bar, v_bar).

    ``t* > 0`` certifies the instance is feasible; the maximizer is the
    most interior point available and is returned in the model's
    allocation shape together with its utility vector.
    """
    blocks = model_blocks(instance)
    n, nx = blocks.n, blocks.nx
    c = _disagreement(instance)
    if isinstance(instance, NplcInstance):
        # columns [x | v | t]: hyperplane rows bound v, then v_i - t >= c_i
        nv = nx + n + 1
        t_col = nx + n
        obj = np.zeros(nv)
        obj[t_col] = 1.0
        hyper = sp.hstack(
            [blocks.value_rows_x, blocks.value_rows_v,
             sp.csr_matrix((blocks.value_rows_x.shape[0], 1))]
        ).tocsr()
        slack_rows = sp.hstack(
            [sp.csr_matrix((n, nx)), sp.identity(n),
             -np.ones((n, 1))]
        ).tocsr()
        rows = sp.vstack(
            [sp.hstack([blocks.match_rows, sp.csr_matrix((2 * n, n + 1))]),
             hyper, slack_rows]
        ).tocsr()
        relations = np.concatenate(
            [np.full(2 * n, "="), blocks.value_relations, np.full(n, ">")]
        )
        rhs = np.concatenate([np.ones(2 * n), blocks.value_rhs, c])
        lower = np.concatenate([blocks.x_lower, np.zeros(n), [-np.inf]])
        upper = np.concatenate([blocks.x_upper, np.full(n, np.inf), [np.inf]])
    else:
        # columns [x | t]: utility rows carry -u directly
        nv = nx + 1
        t_col = nx
        obj = np.zeros(nv)
        obj[t_col] = 1.0
        vdim = blocks.v_dim
        util_rows = sp.hstack(
            [blocks.value_rows_x, np.ones((vdim, 1))]
        ).tocsr()  # -u.x + t <= -c  <=>  u.x - t >= c
        rows = sp.vstack(
            [sp.hstack([blocks.match_rows, sp.csr_matrix((2 * n, 1))]), util_rows]
        ).tocsr()
        relations = np.concatenate([np.full(2 * n, "="), np.full(vdim, "<")])
        rhs = np.concatenate([np.ones(2 * n), -c])
        lower = np.concatenate([blocks.x_lower, [-np.inf]])
        upper = np.concatenate([blocks.x_upper, [np.inf]])
    prog = lpmod.LinearProgram(
        objective=obj, rows=rows, relations=relations, rhs=rhs,
        lower=lower, upper=upper,
    )
    ctx = lpmod.SimplexContext(prog)
    perm = np.arange(n)
    extra = {}
    if isinstance(instance, NplcInstance):
        # make each v_i basic for that agent's first hyperplane row
        row = 2 * n
        for i in range(n):
            extra[row] = nx + i
            row += instance.nhyp[i]
    token = matching_crash_token(blocks, prog, perm, extra)
    sol = ctx.solve(warm_token=token)
    if sol.status is not lpmod.LpStatus.OPTIMAL:
        raise lpmod.SimplexFailure(
            f"feasibility certificate LP ended {sol.status.value}"
        )
    x_bar = blocks.x_matrix(sol.x[:nx])
    v_bar = utilities(instance, x_bar)
    return float(sol.objective), x_bar, v_bar


def pareto_check(instance, v_star: np.ndarray, tol: float = 1e-6) -> bool:
    """True when no feasible utility vector weakly dominates ``v_star``.

    Maximizes total utility subject to v >= v_star; the optimum exceeds
    sum(v_star) by more than ``tol`` exactly when a dominating point
    exists.
    """
    blocks = model_blocks(instance)
    n, nx = blocks.n, blocks.nx
    v_star = np.asarray(v_star, dtype=float)
    if v_star.shape != (blocks.v_dim,):
        raise ValueError(f"v_star must have shape ({blocks.v_dim},)")
    if isinstance(instance, NplcInstance):
        # columns [x | v]; maximize sum v with v >= v_star via bounds
        obj = np.concatenate([np.zeros(nx), np.ones(n)])
        rows = sp.vstack(
            [sp.hstack([blocks.match_rows, sp.csr_matrix((2 * n, n))]),
             sp.hstack([blocks.value_rows_x, blocks.value_rows_v])]
        ).tocsr()
        relations = np.concatenate([np.full(2 * n, "="), blocks.value_relations])
        rhs = np.concatenate([np.ones(2 * n), blocks.value_rhs])
        lower = np.concatenate([blocks.x_lower, v_star - 1e-9])
        upper = np.concatenate([blocks.x_upper, np.full(n, np.inf)])
    else:
        # total utility is linear in x; dominance rows come from the
        # (negated) utility rows: -u.x <= -v_star
        if isinstance(instance, LinearInstance):
            obj = instance.u.ravel().copy()
        elif isinstance(instance, TwoSidedInstance):
            obj = (instance.u + instance.w).ravel()
        else:
            obj = instance.slopes.ravel().copy()
        rows = sp.vstack([blocks.match_rows, blocks.value_rows_x]).tocsr()
        relations = np.concatenate(
            [np.full(2 * n, "="), np.full(blocks.v_dim, "<")]
        )
        rhs = np.concatenate([np.ones(2 * n), -(v_star - 1e-9)])
        lower, upper = blocks.x_lower, blocks.x_upper
    prog = lpmod.LinearProgram(
        objective=obj, rows=rows, relations=relations, rhs=rhs,
        lower=lower, upper=upper,
    )
    sol = lpmod.solve(prog)
    if sol.status is not lpmod.LpStatus.OPTIMAL:
        # v_star itself is feasible up to numerics; treat as undominated
        return True
    return bool(sol.objective <= float(v_star.sum()) + tol)
