"""Bounded-variable revised simplex engine with warm-restart row addition.

The engine keeps the constraint matrix in two sparse column blocks (the
rows present at construction plus the rows appended afterwards) and an
implicit identity for per-row logical variables, and maintains an
explicit dense basis inverse updated by rank-one pivots with periodic
refactorization.  ``solve`` runs a composite phase 1 (minimizing the
total bound violation of the basic variables) followed by a primal
phase 2; ``add_row_resolve`` appends one row and restores optimality
with dual simplex pivots from the previous basis.

Pivot selection is Dantzig with deterministic tie-breaking; after
``10 * (rows + vars)`` consecutive degenerate pivots the engine falls
back to Bland's rule.  Tolerances: pivot 1e-9, ratio test 1e-10,
feasibility ``1e-9 * (1 + |rhs|_inf)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

__all__ = [
    "LpStatus",
    "LinearProgram",
    "LpSolution",
    "SimplexContext",
    "SimplexFailure",
    "solve",
    "add_row_resolve",
]

# variable statuses
NB_LOWER, NB_UPPER, BASIC, NB_FREE = 0, 1, 2, 3

PIVOT_TOL = 1e-9
RATIO_TOL = 1e-10
REFACTOR_EVERY = 256


class LpStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


class SimplexFailure(RuntimeError):
    """Numerical breakdown; carries the pivot trace for post-mortem."""

    def __init__(self, message, pivots=()):
        super().__init__(message)
        self.pivots = tuple(pivots)


def _as_csr(rows, nv) -> sp.csr_matrix:
    if rows is None:
        return sp.csr_matrix((0, nv))
    if sp.issparse(rows):
        return rows.tocsr().astype(float)
    arr = np.asarray(rows, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return sp.csr_matrix(arr)


def _densify_row(coefs, nv) -> np.ndarray:
    """Accept a dense vector or an (indices, values) pair."""
    if isinstance(coefs, tuple) and len(coefs) == 2:
        idx, val = coefs
        row = np.zeros(nv)
        row[np.asarray(idx, dtype=int)] = np.asarray(val, dtype=float)
        return row
    row = np.asarray(coefs, dtype=float)
    if row.shape != (nv,):
        raise ValueError(f"row has shape {row.shape}, expected ({nv},)")
    return row


@dataclass
class LinearProgram:
    """max objective . x  s.t.  rows x {<=,=,>=} rhs,  lower <= x <= upper."""

    objective: np.ndarray
    rows: sp.csr_matrix
    relations: np.ndarray  # one of '<', '=', '>' per row
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        nv = self.objective.size
        self.rows = _as_csr(self.rows, nv)
        if self.rows.shape[1] != nv:
            raise ValueError(
                f"rows have {self.rows.shape[1]} columns, objective has {nv}"
            )
        self.relations = np.asarray(self.relations, dtype="<U1")
        self.rhs = np.asarray(self.rhs, dtype=float)
        m = self.rows.shape[0]
        if self.relations.shape != (m,) or self.rhs.shape != (m,):
            raise ValueError("relations/rhs length mismatch with rows")
        if m and not np.all(np.isin(self.relations, ("<", "=", ">"))):
            raise ValueError("relations must be '<', '=' or '>'")
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if self.lower.shape != (nv,) or self.upper.shape != (nv,):
            raise ValueError("bound length mismatch with objective")
        if not np.all(np.isfinite(self.objective)):
            raise ValueError("objective coefficients must be finite")
        if self.rows.nnz and not np.all(np.isfinite(self.rows.data)):
            raise ValueError("row coefficients must be finite")
        if m and not np.all(np.isfinite(self.rhs)):
            raise ValueError("rhs must be finite")
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")

    @property
    def nvars(self) -> int:
        return self.objective.size

    @property
    def nrows(self) -> int:
        return self.rows.shape[0]

    def with_extra_row(self, coefs, relation: str, rhs: float) -> "LinearProgram":
        """A copy of this LP with one appended row (for from-scratch solves)."""
        extra = sp.csr_matrix(_densify_row(coefs, self.nvars))
        return LinearProgram(
            objective=self.objective.copy(),
            rows=sp.vstack([self.rows, extra]).tocsr(),
            relations=np.append(self.relations, relation),
            rhs=np.append(self.rhs, float(rhs)),
            lower=self.lower.copy(),
            upper=self.upper.copy(),
        )


@dataclass
class LpSolution:
    status: LpStatus
    x: np.ndarray  # structural primal values
    duals: np.ndarray  # one multiplier per row
    objective: float
    basis_token: tuple  # opaque (basis, vstat) snapshot for warm restarts
    iterations: int
    pivots: tuple  # (phase, entering, leaving) per pivot; leaving=-1 on bound flips


class SimplexContext:
    """Mutable solver state for one LP; single-threaded use only."""

    def __init__(self, lp: LinearProgram):
        self.nv = lp.nvars
        self.c_struct = lp.objective.copy()
        self.base = lp.rows.tocsc()
        self.m0 = lp.rows.shape[0]
        self.extra = sp.csc_matrix((0, self.nv))
        self.relations = list(lp.relations)
        self.rhs = list(lp.rhs)
        self.lb_struct = lp.lower.copy()
        self.ub_struct = lp.upper.copy()
        self.pivot_log = []
        self._iters = 0
        self._state = None

    # -- assembled quantities --------------------------------------------------

    @property
    def m(self) -> int:
        return self.m0 + self.extra.shape[0]

    @property
    def ncols(self) -> int:
        return self.nv + self.m

    def _logical_bounds(self):
        lb = np.empty(self.m)
        ub = np.empty(self.m)
        for i, rel in enumerate(self.relations):
            if rel == "<":
                lb[i], ub[i] = 0.0, np.inf
            elif rel == "=":
                lb[i], ub[i] = 0.0, 0.0
            else:
                lb[i], ub[i] = -np.inf, 0.0
        return lb, ub

    def _column(self, j: int) -> np.ndarray:
        """Dense column j of the full matrix [[base], [extra]] | I."""
        col = np.zeros(self.m)
        if j < self.nv:
            s = self.base.indptr[j], self.base.indptr[j + 1]
            col[self.base.indices[s[0]:s[1]]] = self.base.data[s[0]:s[1]]
            if self.extra.shape[0]:
                s = self.extra.indptr[j], self.extra.indptr[j + 1]
                col[self.m0 + self.extra.indices[s[0]:s[1]]] = self.extra.data[s[0]:s[1]]
        else:
            col[j - self.nv] = 1.0
        return col

    def _matvec_struct(self, xs: np.ndarray) -> np.ndarray:
        top = self.base @ xs
        if self.extra.shape[0]:
            return np.concatenate([top, self.extra @ xs])
        return top

    def _rmatvec(self, y: np.ndarray) -> np.ndarray:
        out = self.base.T @ y[: self.m0]
        if self.extra.shape[0]:
            out = out + self.extra.T @ y[self.m0:]
        return out

    def _feas_tol(self) -> float:
        scale = 1.0 + (max(abs(v) for v in self.rhs) if self.rhs else 0.0)
        return 1e-9 * scale

    # -- basis management --------------------------------------------------------

    def _install_state(self, basis, vstat, binv=None):
        llb, lub = self._logical_bounds()
        self._state = {
            "basis": np.asarray(basis, dtype=int).copy(),
            "vstat": np.asarray(vstat, dtype=np.int8).copy(),
            "lb": np.concatenate([self.lb_struct, llb]),
            "ub": np.concatenate([self.ub_struct, lub]),
            "cost": np.concatenate([self.c_struct, np.zeros(self.m)]),
            "binv": binv,
            "xB": None,
            "etas": 0,
            "devex": np.ones(self.ncols),
        }
        st = self._state
        # variables pinned by lb == ub can never move: bar them from entering
        st["movable"] = ~(st["ub"] - st["lb"] <= 0)
        if binv is None:
            self._refactor()
        self._recompute_xB()

    def _refactor(self):
        st = self._state
        B = np.zeros((self.m, self.m))
        for r, j in enumerate(st["basis"]):
            B[:, r] = self._column(j)
        try:
            st["binv"] = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise SimplexFailure(f"singular basis: {exc}", self.pivot_log)
        st["etas"] = 0
        st["devex"][:] = 1.0  # reset the reference framework

    def _nonbasic_values(self) -> np.ndarray:
        st = self._state
        vals = np.where(st["vstat"] == NB_UPPER, st["ub"], st["lb"])
        vals[st["vstat"] == NB_FREE] = 0.0
        vals[st["vstat"] == BASIC] = 0.0
        vals[~np.isfinite(vals)] = 0.0
        return vals

    def _recompute_xB(self):
        st = self._state
        vals = self._nonbasic_values()
        r = np.asarray(self.rhs, dtype=float) - self._matvec_struct(vals[: self.nv])
        r -= vals[self.nv:]
        st["xB"] = st["binv"] @ r

    def _residual(self) -> float:
        """Row residual |b - A x| for the current full primal point."""
        st = self._state
        vals = self._nonbasic_values()
        vals[st["basis"]] = st["xB"]
        r = np.asarray(self.rhs, dtype=float) - self._matvec_struct(vals[: self.nv])
        r -= vals[self.nv:]
        return float(np.max(np.abs(r))) if self.m else 0.0

    def _value_of(self, j: int) -> float:
        st = self._state
        if st["vstat"][j] == NB_LOWER:
            v = st["lb"][j]
        elif st["vstat"][j] == NB_UPPER:
            v = st["ub"][j]
        else:
            v = 0.0
        return v if np.isfinite(v) else 0.0

    def _pivot(self, r: int, j: int, w: np.ndarray, new_val: float, leave_stat: int):
        st = self._state
        wr = w[r]
        if abs(wr) < 1e-11:
            raise SimplexFailure(
                f"pivot element {wr!r} too small (row {r}, col {j})", self.pivot_log
            )
        leaving = int(st["basis"][r])
        st["vstat"][leaving] = leave_stat
        st["basis"][r] = j
        st["vstat"][j] = BASIC
        br = st["binv"][r] / wr
        st["binv"] -= np.outer(w, br)
        st["binv"][r] = br
        st["xB"][r] = new_val
        st["etas"] += 1
        if st["etas"] >= REFACTOR_EVERY:
            self._refactor()
            self._recompute_xB()
        return leaving

    # -- shared pieces of the pricing/ratio machinery ---------------------------

    def _pick_entering(self, score, bland: bool):
        """Entering column and direction from per-column improvement rates.

        ``score[j]`` is the objective improvement rate per unit increase of
        x_j (callers negate as needed); eligibility depends on the bound the
        variable currently sits at.  Candidates are ranked by the Devex
        criterion score^2 / weight, which curbs the zigzagging Dantzig
        pricing suffers on degenerate assignment-structured bases.
        """
        st = self._state
        vstat = st["vstat"]
        mov = st["movable"]
        up_ok = ((vstat == NB_LOWER) | (vstat == NB_FREE)) & mov
        dn_ok = ((vstat == NB_UPPER) | (vstat == NB_FREE)) & mov
        gain_up = np.where(up_ok, score, 0.0)
        gain_dn = np.where(dn_ok, -score, 0.0)
        gain = np.maximum(gain_up, gain_dn)
        if bland:
            cand = np.flatnonzero(gain > PIVOT_TOL)
            if cand.size == 0:
                return None, 0.0
            j = int(cand[0])
        else:
            rank = np.where(gain > PIVOT_TOL, gain * gain / st["devex"], 0.0)
            j = int(np.argmax(rank))
            if gain[j] <= PIVOT_TOL:
                return None, 0.0
        s = 1.0 if gain_up[j] >= gain_dn[j] else -1.0
        return j, s

    def _devex_update(self, j, r, w):
        """Forrest-Goldfarb reference-weight update; call before pivoting."""
        st = self._state
        aq = w[r]
        if abs(aq) < 1e-11:
            return
        rho = st["binv"][r]
        alpha = np.concatenate([self._rmatvec(rho), rho])
        gq = max(st["devex"][j], 1.0)
        cand = (alpha / aq) ** 2 * gq
        np.maximum(st["devex"], cand, out=st["devex"])
        leaving = st["basis"][r]
        st["devex"][leaving] = max(gq / (aq * aq), 1.0)

    def _ratio_phase2(self, j, s, w):
        """Returns (t, leaving_row, leave_stat, flip); t=None when unbounded."""
        st = self._state
        xB, basis = st["xB"], st["basis"]
        lbB, ubB = st["lb"][basis], st["ub"][basis]
        rate = -s * w
        t_best, r_best, stat_best = np.inf, None, None

        def consider(mask, target, leave_stat):
            nonlocal t_best, r_best, stat_best
            idxs = np.flatnonzero(mask)
            if idxs.size == 0:
                return
            lim = np.maximum((target[idxs] - xB[idxs]) / rate[idxs], 0.0)
            k = int(np.argmin(lim))
            if lim[k] < t_best - RATIO_TOL or (r_best is None and lim[k] < t_best):
                near = idxs[lim <= lim[k] + RATIO_TOL]
                r_best = int(near[np.argmax(np.abs(w[near]))])
                t_best = lim[k]
                stat_best = leave_stat

        consider((rate < -RATIO_TOL) & np.isfinite(lbB), lbB, NB_LOWER)
        consider((rate > RATIO_TOL) & np.isfinite(ubB), ubB, NB_UPPER)
        own = st["ub"][j] - st["lb"][j]
        if np.isfinite(own) and own <= t_best + RATIO_TOL:
            return own, None, None, True
        if not np.isfinite(t_best):
            return None, None, None, False
        return t_best, r_best, stat_best, False

    def _ratio_phase1(self, j, s, w, ftol):
        """Phase-1 test: infeasible basics also block at their violated bound."""
        st = self._state
        xB, basis = st["xB"], st["basis"]
        lbB, ubB = st["lb"][basis], st["ub"][basis]
        rate = -s * w
        below = lbB - xB > ftol
        above = xB - ubB > ftol
        feas = ~(below | above)
        t_best, r_best, stat_best = np.inf, None, None

        def consider(mask, target, leave_stat):
            nonlocal t_best, r_best, stat_best
            idxs = np.flatnonzero(mask)
            if idxs.size == 0:
                return
            lim = np.maximum((target[idxs] - xB[idxs]) / rate[idxs], 0.0)
            k = int(np.argmin(lim))
            if lim[k] < t_best - RATIO_TOL or (r_best is None and lim[k] < t_best):
                near = idxs[lim <= lim[k] + RATIO_TOL]
                r_best = int(near[np.argmax(np.abs(w[near]))])
                t_best = lim[k]
                stat_best = leave_stat

        consider(feas & (rate < -RATIO_TOL) & np.isfinite(lbB), lbB, NB_LOWER)
        consider(feas & (rate > RATIO_TOL) & np.isfinite(ubB), ubB, NB_UPPER)
        consider(below & (rate > RATIO_TOL), lbB, NB_LOWER)
        consider(above & (rate < -RATIO_TOL), ubB, NB_UPPER)
        own = st["ub"][j] - st["lb"][j]
        if np.isfinite(own) and own <= t_best + RATIO_TOL:
            return own, None, None, True
        if not np.isfinite(t_best):
            return None, None, None, False
        return t_best, r_best, stat_best, False

    def _apply_step(self, j, s, t, r, leave_stat, flip, w, phase):
        st = self._state
        st["xB"] -= s * t * w
        self._iters += 1
        if flip:
            st["vstat"][j] = NB_UPPER if s > 0 else NB_LOWER
            self.pivot_log.append((phase, j, -1))
            return
        new_val = self._value_of(j) + s * t
        self._devex_update(j, r, w)
        leaving = self._pivot(r, j, w, new_val, leave_stat)
        self.pivot_log.append((phase, j, leaving))

    # -- phases ------------------------------------------------------------------

    def _phase1(self) -> bool:
        st = self._state
        ftol = self._feas_tol()
        bland_after = 10 * (self.m + self.nv)
        degen = 0
        retried = False
        max_iter = 100 * (self.m + 10) + 20000
        for _ in range(max_iter):
            xB, basis = st["xB"], st["basis"]
            lbB, ubB = st["lb"][basis], st["ub"][basis]
            viol = np.maximum(np.maximum(lbB - xB, xB - ubB), 0.0)
            if viol.max(initial=0.0) <= ftol:
                return True
            cB1 = np.where(xB - ubB > ftol, 1.0, np.where(lbB - xB > ftol, -1.0, 0.0))
            y = st["binv"].T @ cB1
            q = np.concatenate([self._rmatvec(y), y])
            # d(infeasibility)/dx_j = -q_j, so q is the improvement rate
            j, s = self._pick_entering(q, bland=degen > bland_after)
            if j is None:
                if not retried:
                    retried = True
                    self._refactor()
                    self._recompute_xB()
                    continue
                return viol.max(initial=0.0) <= 1e-6 * (1.0 + viol.max(initial=0.0))
            w = st["binv"] @ self._column(j)
            t, r, leave_stat, flip = self._ratio_phase1(j, s, w, ftol)
            if t is None:
                raise SimplexFailure("phase-1 ray without blocking event", self.pivot_log)
            degen = degen + 1 if t <= RATIO_TOL else 0
            self._apply_step(j, s, t, r, leave_stat, flip, w, phase=1)
        raise SimplexFailure("phase-1 iteration cap exceeded", self.pivot_log)

    def _phase2(self) -> LpStatus:
        st = self._state
        ftol = self._feas_tol()
        bland_after = 10 * (self.m + self.nv)
        degen = 0
        max_iter = 100 * (self.m + 10) + 20000
        for _ in range(max_iter):
            y = st["binv"].T @ st["cost"][st["basis"]]
            d = st["cost"] - np.concatenate([self._rmatvec(y), y])
            j, s = self._pick_entering(d, bland=degen > bland_after)
            if j is None:
                if st["etas"] > 0 and self._residual() > ftol:
                    self._refactor()
                    self._recompute_xB()
                    continue
                return LpStatus.OPTIMAL
            w = st["binv"] @ self._column(j)
            t, r, leave_stat, flip = self._ratio_phase2(j, s, w)
            if t is None:
                return LpStatus.UNBOUNDED
            degen = degen + 1 if t <= RATIO_TOL else 0
            self._apply_step(j, s, t, r, leave_stat, flip, w, phase=2)
        raise SimplexFailure("phase-2 iteration cap exceeded", self.pivot_log)

    def _dual_simplex(self) -> LpStatus:
        st = self._state
        ftol = self._feas_tol()
        bland_after = 10 * (self.m + self.nv)
        degen = 0
        max_iter = 100 * (self.m + 10) + 20000
        for _ in range(max_iter):
            xB, basis = st["xB"], st["basis"]
            lbB, ubB = st["lb"][basis], st["ub"][basis]
            below = lbB - xB
            above = xB - ubB
            viol = np.maximum(np.maximum(below, above), 0.0)
            if viol.max(initial=0.0) <= ftol:
                return LpStatus.OPTIMAL
            if degen > bland_after:
                r = int(np.flatnonzero(viol > ftol)[0])
            else:
                r = int(np.argmax(viol))
            leaves_low = below[r] >= above[r]
            y = st["binv"].T @ st["cost"][basis]
            d = st["cost"] - np.concatenate([self._rmatvec(y), y])
            rho = st["binv"][r]
            alpha = np.concatenate([self._rmatvec(rho), rho])
            vstat = st["vstat"]
            mov = st["movable"]
            lo = (vstat == NB_LOWER) & mov
            up = (vstat == NB_UPPER) & mov
            fr = (vstat == NB_FREE) & mov
            if leaves_low:
                elig = (lo & (alpha < -PIVOT_TOL)) | (up & (alpha > PIVOT_TOL)) | (
                    fr & (np.abs(alpha) > PIVOT_TOL)
                )
            else:
                elig = (lo & (alpha > PIVOT_TOL)) | (up & (alpha < -PIVOT_TOL)) | (
                    fr & (np.abs(alpha) > PIVOT_TOL)
                )
            idxs = np.flatnonzero(elig)
            if idxs.size == 0:
                if st["etas"] > 0:
                    self._refactor()
                    self._recompute_xB()
                    degen = 0
                    continue
                return LpStatus.INFEASIBLE
            ratios = np.abs(d[idxs]) / np.abs(alpha[idxs])
            if degen > bland_after:
                j = int(idxs[np.argmin(ratios)])
            else:
                best = ratios.min()
                near = idxs[ratios <= best + RATIO_TOL]
                j = int(near[np.argmax(np.abs(alpha[near]))])
            target = lbB[r] if leaves_low else ubB[r]
            delta = (xB[r] - target) / alpha[j]
            w = st["binv"] @ self._column(j)
            st["xB"] -= delta * w
            new_val = self._value_of(j) + delta
            degen = degen + 1 if abs(delta) <= RATIO_TOL else 0
            self._devex_update(j, r, w)
            leaving = self._pivot(r, j, w, new_val, NB_LOWER if leaves_low else NB_UPPER)
            self._iters += 1
            self.pivot_log.append((3, j, leaving))
        raise SimplexFailure("dual simplex iteration cap exceeded", self.pivot_log)

    # -- public API ----------------------------------------------------------------

    def solve(self, warm_token=None) -> LpSolution:
        """Solve from scratch (all-logical basis) or from a warm token."""
        if warm_token is None:
            basis = np.arange(self.nv, self.nv + self.m)
            vstat = np.full(self.ncols, NB_LOWER, dtype=np.int8)
            free = ~np.isfinite(self.lb_struct) & ~np.isfinite(self.ub_struct)
            only_upper = ~np.isfinite(self.lb_struct) & np.isfinite(self.ub_struct)
            vstat[: self.nv][free] = NB_FREE
            vstat[: self.nv][only_upper] = NB_UPPER
            vstat[basis] = BASIC
        else:
            basis, vstat = np.array(warm_token[0]), np.array(warm_token[1])
            if basis.size != self.m or vstat.size != self.ncols:
                raise ValueError("warm token does not match this LP's shape")
        self._install_state(basis, vstat)
        if not self._phase1():
            return self._solution(LpStatus.INFEASIBLE)
        return self._solution(self._phase2())

    def add_row_resolve(self, coefs, relation: str, rhs: float) -> LpSolution:
        """Append one row and restore optimality via dual simplex."""
        if self._state is None:
            raise RuntimeError("solve() must run before add_row_resolve()")
        st = self._state
        row = _densify_row(coefs, self.nv)
        old_m = self.m
        self.extra = sp.vstack([self.extra, sp.csr_matrix(row)], format="csc")
        self.relations.append(relation)
        self.rhs.append(float(rhs))
        # grow the basis inverse: new row's logical enters the basis
        rowvec = np.zeros(old_m)
        for r, col in enumerate(st["basis"]):
            if col < self.nv:
                rowvec[r] = row[col]
        binv = np.zeros((self.m, self.m))
        binv[:old_m, :old_m] = st["binv"]
        binv[old_m, :old_m] = -rowvec @ st["binv"]
        binv[old_m, old_m] = 1.0
        basis = np.append(st["basis"], self.ncols - 1)
        vstat = np.append(st["vstat"], np.int8(BASIC))
        self._install_state(basis, vstat, binv=binv)
        status = self._dual_simplex()
        if status is LpStatus.OPTIMAL:
            status = self._phase2()  # cheap polish; normally zero pivots
        return self._solution(status)

    def _solution(self, status: LpStatus) -> LpSolution:
        st = self._state
        vals = self._nonbasic_values()
        vals[st["basis"]] = st["xB"]
        x = vals[: self.nv]
        y = st["binv"].T @ st["cost"][st["basis"]]
        if status is LpStatus.OPTIMAL:
            obj = float(self.c_struct @ x)
        elif status is LpStatus.UNBOUNDED:
            obj = np.inf
        else:
            obj = np.nan
        return LpSolution(
            status=status,
            x=x.copy(),
            duals=np.asarray(y, dtype=float).copy(),
            objective=obj,
            basis_token=(st["basis"].copy(), st["vstat"].copy()),
            iterations=self._iters,
            pivots=tuple(self.pivot_log),
        )


def solve(lp: LinearProgram) -> LpSolution:
    """Solve an LP from scratch with a fresh context."""
    return SimplexContext(lp).solve()


def add_row_resolve(lp: LinearProgram, prev: LpSolution, coefs, relation: str,
                    rhs: float) -> LpSolution:
    """Re-optimize ``lp`` plus one extra row starting from ``prev``'s basis.

    Stand-alone form of :meth:`SimplexContext.add_row_resolve` for callers
    that did not keep the solving context alive.
    """
    ctx = SimplexContext(lp)
    ctx.solve(warm_token=prev.basis_token)
    return ctx.add_row_resolve(coefs, relation, rhs)
