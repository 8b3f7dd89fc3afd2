"""Dense two-phase simplex for small linear programs.

Models are stated in maximization form::

    max  objective @ x + offset
    s.t. lhs[i] @ x  (senses[i])  rhs[i]      senses in {"<=", ">=", "="}
         lower <= x <= upper                  entries may be +-inf

Internally the model is rewritten with nonnegative variables (shifting at
finite lower bounds, reflecting at finite upper bounds, splitting free
variables) and solved as a minimization with the classical two-phase dense
tableau method.  Pricing is Dantzig's most-negative-reduced-cost rule with an
automatic switch to Bland's anti-cycling rule on degenerate stretches; see
:func:`_run_simplex`.  Ratio-test ties always leave the basis at the lowest
variable index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ModelError

FEASIBILITY_TOL = 1e-8
REDUCED_COST_TOL = 1e-9
_PIVOT_TOL = 1e-10
_MAX_PIVOTS = 200_000

LESS_EQUAL = "<="
GREATER_EQUAL = ">="
EQUAL = "="
_SENSES = {LESS_EQUAL, GREATER_EQUAL, EQUAL}


@dataclass
class LinearProgram:
    """A dense LP in the maximization form described in the module docstring."""

    objective: np.ndarray
    lhs: np.ndarray
    senses: tuple[str, ...]
    rhs: np.ndarray
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    offset: float = 0.0

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float).reshape(-1)
        n = self.objective.size
        try:
            self.lhs = np.asarray(self.lhs, dtype=float).reshape(-1, n) if n else np.zeros((0, 0))
        except ValueError as exc:
            raise ModelError(f"lhs is not a matrix with {n} columns") from exc
        self.rhs = np.asarray(self.rhs, dtype=float).reshape(-1)
        senses = tuple("=" if s in ("=", "==") else s for s in self.senses)
        if any(s not in _SENSES for s in senses):
            raise ModelError(f"unknown constraint sense in {senses}")
        self.senses = senses
        m = self.lhs.shape[0]
        if self.rhs.size != m or len(self.senses) != m:
            raise ModelError(
                f"inconsistent row counts: {m} lhs rows, {self.rhs.size} rhs, "
                f"{len(self.senses)} senses"
            )
        self.lower = (
            np.zeros(n) if self.lower is None else np.asarray(self.lower, dtype=float).reshape(-1)
        )
        self.upper = (
            np.full(n, np.inf)
            if self.upper is None
            else np.asarray(self.upper, dtype=float).reshape(-1)
        )
        if self.lower.size != n or self.upper.size != n:
            raise ModelError("bound vectors must match the objective length")
        if np.any(self.lower > self.upper):
            j = int(np.argmax(self.lower > self.upper))
            raise ModelError(f"variable {j} has lower {self.lower[j]} > upper {self.upper[j]}")
        if not np.all(np.isfinite(self.objective)):
            raise ModelError("objective coefficients must be finite")
        if not (np.all(np.isfinite(self.lhs)) and np.all(np.isfinite(self.rhs))):
            raise ModelError("constraint coefficients must be finite")

    @property
    def n_vars(self) -> int:
        return self.objective.size

    @property
    def n_rows(self) -> int:
        return self.lhs.shape[0]


@dataclass
class LpSolution:
    """Solver outcome: ``status`` in {"optimal", "infeasible", "unbounded"}."""

    status: str
    x: np.ndarray | None = None
    objective: float | None = None


@dataclass
class _Standardized:
    """LP rewritten over nonnegative variables."""

    A: np.ndarray
    senses: list[str]
    b: np.ndarray
    c: np.ndarray  # minimization costs for the substituted variables
    col_var: list[int]  # original variable index per column
    col_sign: list[float]
    base: np.ndarray  # constant part of each original variable


def _standardize(lp: LinearProgram) -> _Standardized:
    n = lp.n_vars
    base = np.zeros(n)
    col_var: list[int] = []
    col_sign: list[float] = []
    upper_rows: list[tuple[int, float]] = []  # (column, bound)

    for j in range(n):
        lo, hi = lp.lower[j], lp.upper[j]
        if hi - lo <= 1e-12:
            base[j] = lo
            continue
        if np.isfinite(lo):
            base[j] = lo
            col_var.append(j)
            col_sign.append(1.0)
            if np.isfinite(hi):
                upper_rows.append((len(col_var) - 1, hi - lo))
        elif np.isfinite(hi):
            base[j] = hi
            col_var.append(j)
            col_sign.append(-1.0)
        else:
            col_var.append(j)
            col_sign.append(1.0)
            col_var.append(j)
            col_sign.append(-1.0)

    n2 = len(col_var)
    A2 = lp.lhs[:, col_var] * np.asarray(col_sign) if n2 else np.zeros((lp.n_rows, 0))
    b2 = lp.rhs - lp.lhs @ base
    c2 = lp.objective[col_var] * np.asarray(col_sign) if n2 else np.zeros(0)
    senses = list(lp.senses)

    if upper_rows:
        extra = np.zeros((len(upper_rows), n2))
        extra_b = np.zeros(len(upper_rows))
        for r, (k, bound) in enumerate(upper_rows):
            extra[r, k] = 1.0
            extra_b[r] = bound
        A2 = np.vstack([A2, extra])
        b2 = np.concatenate([b2, extra_b])
        senses.extend([LESS_EQUAL] * len(upper_rows))

    # Make every right-hand side nonnegative.
    for i in np.flatnonzero(b2 < 0):
        A2[i] = -A2[i]
        b2[i] = -b2[i]
        if senses[i] == LESS_EQUAL:
            senses[i] = GREATER_EQUAL
        elif senses[i] == GREATER_EQUAL:
            senses[i] = LESS_EQUAL

    return _Standardized(A2, senses, b2, -c2, col_var, col_sign, base)


def _pivot(T: np.ndarray, r: int, j: int) -> None:
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    T[:, j] = 0.0
    T[r, j] = 1.0


_STALL_LIMIT = 24


def _run_simplex(T: np.ndarray, basis: np.ndarray) -> str:
    """Minimize the cost row of the tableau in place; returns a status.

    Pricing is Dantzig (most negative reduced cost) while the objective
    makes progress.  After :data:`_STALL_LIMIT` pivots without improvement
    the loop falls back to Bland's rule, whose lowest-index choices cannot
    cycle, and returns to Dantzig once the objective strictly drops again.
    """
    stalled = 0
    bland = False
    for _ in range(_MAX_PIVOTS):
        reduced = T[-1, :-1]
        if reduced.size == 0:  # every variable fixed, nothing to price
            return "optimal"
        if bland:
            improving = np.flatnonzero(reduced < -REDUCED_COST_TOL)
            if improving.size == 0:
                return "optimal"
            j = int(improving[0])
        else:
            j = int(np.argmin(reduced))
            if reduced[j] >= -REDUCED_COST_TOL:
                return "optimal"
        col = T[:-1, j]
        rows = np.flatnonzero(col > _PIVOT_TOL)
        if rows.size == 0:
            return "unbounded"
        ratios = T[:-1, -1][rows] / col[rows]
        rmin = ratios.min()
        ties = rows[ratios <= rmin + 1e-12 + 1e-9 * abs(rmin)]
        r = int(ties[np.argmin(basis[ties])])
        before = T[-1, -1]
        _pivot(T, r, j)
        basis[r] = j
        if T[-1, -1] > before + 1e-12:
            stalled = 0
            bland = False
        else:
            stalled += 1
            if stalled >= _STALL_LIMIT:
                bland = True
    raise ModelError("simplex pivot limit exceeded")


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Solve ``lp``, returning an optimal, infeasible, or unbounded outcome.

    An "optimal" solution satisfies every constraint within
    :data:`FEASIBILITY_TOL` and leaves no improving reduced cost beyond
    :data:`REDUCED_COST_TOL`.
    """
    std = _standardize(lp)
    m, n2 = std.A.shape

    needs_artificial = [s != LESS_EQUAL for s in std.senses]
    n_slack = sum(1 for s in std.senses if s != EQUAL)
    n_art = sum(needs_artificial)

    ncols = n2 + n_slack + n_art
    T = np.zeros((m + 1, ncols + 1))
    T[:m, :n2] = std.A
    T[:m, -1] = std.b
    basis = np.full(m, -1, dtype=int)

    slack_at = n2
    art_at = n2 + n_slack
    art_cols = []
    for i, sense in enumerate(std.senses):
        if sense == LESS_EQUAL:
            T[i, slack_at] = 1.0
            basis[i] = slack_at
            slack_at += 1
        elif sense == GREATER_EQUAL:
            T[i, slack_at] = -1.0
            slack_at += 1
        if needs_artificial[i]:
            T[i, art_at] = 1.0
            basis[i] = art_at
            art_cols.append(art_at)
            art_at += 1

    if art_cols:
        T[-1, art_cols] = 1.0
        for i in range(m):
            if basis[i] in art_cols:
                T[-1] -= T[i]
        if _run_simplex(T, basis) != "optimal":
            raise ModelError("phase-1 subproblem reported unbounded")
        scale = max(1.0, float(np.abs(std.b).max()) if m else 1.0)
        if -T[-1, -1] > FEASIBILITY_TOL * scale:
            return LpSolution("infeasible")

        # Pivot leftover artificials out of the basis; drop redundant rows.
        art_set = set(art_cols)
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] in art_set:
                candidates = np.flatnonzero(np.abs(T[i, : art_cols[0]]) > _PIVOT_TOL)
                if candidates.size:
                    _pivot(T, i, int(candidates[0]))
                    basis[i] = int(candidates[0])
                else:
                    keep[i] = False
        if not keep.all():
            T = np.vstack([T[:-1][keep], T[-1:]])
            basis = basis[keep]
            m = basis.size
        T = np.delete(T, art_cols, axis=1)

    # Phase 2: install the real cost row and reoptimize.
    costs = np.zeros(T.shape[1] - 1)
    costs[:n2] = std.c
    T[-1, :-1] = costs
    T[-1, -1] = 0.0
    for i in range(m):
        cb = costs[basis[i]]
        if cb != 0.0:
            T[-1] -= cb * T[i]
    status = _run_simplex(T, basis)
    if status == "unbounded":
        return LpSolution("unbounded")

    u = np.zeros(T.shape[1] - 1)
    u[basis] = T[:m, -1]
    x = std.base.copy()
    for k, (j, sign) in enumerate(zip(std.col_var, std.col_sign)):
        x[j] += sign * u[k]
    objective = float(lp.objective @ x + lp.offset)
    return LpSolution("optimal", x, objective)
