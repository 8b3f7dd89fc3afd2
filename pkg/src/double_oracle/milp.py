"""Branch and bound for mixed 0/1 linear programs.

The search is best-first on LP relaxation bounds.  Branching fixes the most
fractional binary variable, ties broken at the lowest variable index, so runs
are deterministic.  Each node tightens variable bounds by iterated constraint
activity propagation before solving its relaxation; with the big-M models
built elsewhere in this package that fixes whole blocks of binaries per
branch and keeps the tree small.  Propagation only removes points that are
either infeasible or integer-infeasible, so node bounds stay valid.

Node relaxations differ from each other only in variable bounds, and there
are hundreds of them per solve, so they go to SciPy's HiGHS backend when
SciPy is importable; otherwise (or on a numerically distressed node) the
tableau solver in :mod:`.linprog` is used.  Everything else - the tree, the
bounds, the statuses - is computed here.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelError, ResourceLimitError
from .linprog import (
    EQUAL,
    GREATER_EQUAL,
    LESS_EQUAL,
    LinearProgram,
    LpSolution,
    solve_lp,
)

try:
    from scipy.optimize import linprog as _scipy_linprog
except ImportError:  # pragma: no cover - scipy is a soft dependency
    _scipy_linprog = None

DEFAULT_INT_TOL = 1e-6
DEFAULT_GAP_TOL = 1e-9
DEFAULT_NODE_LIMIT = 10**6
_BOUND_EPS = 1e-9  # slack added to propagated bounds against float roundoff
_ROW_INFEAS_TOL = 1e-7


@dataclass
class MilpModel:
    """An LP together with the indices of its binary variables."""

    lp: LinearProgram
    binary_vars: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(j) for j in self.binary_vars)
        n = self.lp.n_vars
        if len(set(idx)) != len(idx):
            raise ModelError("duplicate binary variable index")
        for j in idx:
            if not 0 <= j < n:
                raise ModelError(f"binary index {j} out of range for {n} variables")
            if self.lp.lower[j] < -1e-12 or self.lp.upper[j] > 1.0 + 1e-12:
                raise ModelError(
                    f"binary variable {j} must have relaxation bounds within [0, 1], "
                    f"got [{self.lp.lower[j]}, {self.lp.upper[j]}]"
                )
        self.binary_vars = tuple(sorted(idx))


@dataclass
class MilpSolution(LpSolution):
    """LP-style outcome plus search statistics.

    ``bound`` is the proved upper bound on the optimum at termination and
    ``nodes`` counts solved LP relaxations.
    """

    nodes: int = 0
    bound: float = math.nan


def _propagate(
    A: np.ndarray,
    senses: tuple[str, ...],
    b: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    binary_vars: tuple[int, ...],
    int_tol: float,
    max_rounds: int = 25,
) -> bool:
    """Tighten (lo, hi) in place; returns False when infeasibility is proven."""
    m = A.shape[0]
    rows = [(i, np.flatnonzero(A[i])) for i in range(m)]
    for _ in range(max_rounds):
        changed = False
        for i, nz in rows:
            if nz.size == 0:
                continue
            a = A[i, nz]
            tmin = np.where(a > 0, a * lo[nz], a * hi[nz])
            tmax = np.where(a > 0, a * hi[nz], a * lo[nz])
            sense = senses[i]

            if sense in (LESS_EQUAL, EQUAL):
                inf_mask = np.isneginf(tmin)
                n_inf = int(inf_mask.sum())
                fin_sum = tmin[~inf_mask].sum()
                if n_inf == 0 and fin_sum > b[i] + _ROW_INFEAS_TOL:
                    return False
                if n_inf <= 1:
                    for k in range(nz.size):
                        if n_inf == 1 and not inf_mask[k]:
                            continue
                        rest = fin_sum - (0.0 if inf_mask[k] else tmin[k])
                        cap = b[i] - rest
                        j = nz[k]
                        if a[k] > 0:
                            new_hi = cap / a[k] + _BOUND_EPS
                            if new_hi < hi[j] - _BOUND_EPS:
                                hi[j] = new_hi
                                changed = True
                        else:
                            new_lo = cap / a[k] - _BOUND_EPS
                            if new_lo > lo[j] + _BOUND_EPS:
                                lo[j] = new_lo
                                changed = True

            if sense in (GREATER_EQUAL, EQUAL):
                inf_mask = np.isposinf(tmax)
                n_inf = int(inf_mask.sum())
                fin_sum = tmax[~inf_mask].sum()
                if n_inf == 0 and fin_sum < b[i] - _ROW_INFEAS_TOL:
                    return False
                if n_inf <= 1:
                    for k in range(nz.size):
                        if n_inf == 1 and not inf_mask[k]:
                            continue
                        rest = fin_sum - (0.0 if inf_mask[k] else tmax[k])
                        need = b[i] - rest
                        j = nz[k]
                        if a[k] > 0:
                            new_lo = need / a[k] - _BOUND_EPS
                            if new_lo > lo[j] + _BOUND_EPS:
                                lo[j] = new_lo
                                changed = True
                        else:
                            new_hi = need / a[k] + _BOUND_EPS
                            if new_hi < hi[j] - _BOUND_EPS:
                                hi[j] = new_hi
                                changed = True

        for j in binary_vars:
            if lo[j] > int_tol and lo[j] < 1.0:
                lo[j] = 1.0
                changed = True
            if hi[j] < 1.0 - int_tol and hi[j] > 0.0:
                hi[j] = 0.0
                changed = True
        if np.any(lo > hi + _ROW_INFEAS_TOL):
            return False
        np.minimum(lo, hi, out=lo)
        if not changed:
            break
    return True


class _RelaxationSolver:
    """Solves a stream of LP relaxations that differ only in variable bounds."""

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        self.scipy_ok = _scipy_linprog is not None
        if self.scipy_ok:
            le = [i for i, s in enumerate(lp.senses) if s == LESS_EQUAL]
            ge = [i for i, s in enumerate(lp.senses) if s == GREATER_EQUAL]
            eq = [i for i, s in enumerate(lp.senses) if s == EQUAL]
            ub_blocks = [lp.lhs[le]] if le else []
            ub_rhs = [lp.rhs[le]] if le else []
            if ge:
                ub_blocks.append(-lp.lhs[ge])
                ub_rhs.append(-lp.rhs[ge])
            self.a_ub = np.vstack(ub_blocks) if ub_blocks else None
            self.b_ub = np.concatenate(ub_rhs) if ub_rhs else None
            self.a_eq = lp.lhs[eq] if eq else None
            self.b_eq = lp.rhs[eq] if eq else None
            self.cost = -lp.objective

    def solve(self, lo: np.ndarray, hi: np.ndarray) -> LpSolution:
        if self.scipy_ok:
            res = _scipy_linprog(
                self.cost,
                A_ub=self.a_ub,
                b_ub=self.b_ub,
                A_eq=self.a_eq,
                b_eq=self.b_eq,
                bounds=np.column_stack([lo, hi]),
                method="highs",
            )
            if res.status == 0:
                return LpSolution(
                    "optimal", np.asarray(res.x), float(self.lp.offset - res.fun)
                )
            if res.status == 2:
                return LpSolution("infeasible")
            if res.status == 3:
                return LpSolution("unbounded")
            # status 1/4 (limits or numerical trouble): retry exactly below.
        return solve_lp(
            LinearProgram(
                objective=self.lp.objective,
                lhs=self.lp.lhs,
                senses=self.lp.senses,
                rhs=self.lp.rhs,
                lower=lo,
                upper=hi,
                offset=self.lp.offset,
            )
        )


def solve_milp(
    model: MilpModel,
    int_tol: float = DEFAULT_INT_TOL,
    gap_tol: float = DEFAULT_GAP_TOL,
    node_limit: int = DEFAULT_NODE_LIMIT,
    propagate: bool = True,
) -> MilpSolution:
    """Maximize the model over binary assignments of its integer variables.

    Returns an incumbent whose binaries are within ``int_tol`` of {0, 1} and
    whose objective is within ``gap_tol`` (absolute) of the proved bound, or
    an infeasible status when no integer-feasible point exists.  Exceeding
    ``node_limit`` raises :class:`ResourceLimitError` carrying the best
    incumbent and bound seen so far.
    """
    lp = model.lp
    binaries = model.binary_vars
    relaxations = _RelaxationSolver(lp)

    incumbent_x: np.ndarray | None = None
    incumbent_obj = -math.inf
    nodes = 0
    counter = itertools.count()

    # Heap entries: (-parent bound, tiebreak, {var: (lo, hi)} branch fixings).
    heap: list[tuple[float, int, dict[int, tuple[float, float]]]] = [
        (-math.inf, next(counter), {})
    ]

    def current_bound() -> float:
        open_bound = -heap[0][0] if heap else -math.inf
        return max(open_bound, incumbent_obj)

    while heap:
        if incumbent_x is not None and -heap[0][0] <= incumbent_obj + gap_tol:
            break
        neg_bound, _, fixings = heapq.heappop(heap)
        if incumbent_x is not None and -neg_bound <= incumbent_obj + gap_tol:
            continue

        lo = lp.lower.copy()
        hi = lp.upper.copy()
        for j, (lj, hj) in fixings.items():
            lo[j] = max(lo[j], lj)
            hi[j] = min(hi[j], hj)
        if np.any(lo > hi):
            continue
        if propagate and not _propagate(
            lp.lhs, lp.senses, lp.rhs, lo, hi, binaries, int_tol
        ):
            continue

        if nodes >= node_limit:
            raise ResourceLimitError(
                f"branch-and-bound node limit {node_limit} exceeded "
                f"(incumbent {incumbent_obj!r}, bound {current_bound()!r})",
                incumbent=None if incumbent_x is None else incumbent_x.copy(),
                bound=current_bound(),
            )
        nodes += 1
        relaxation = relaxations.solve(lo, hi)
        if relaxation.status == "infeasible":
            continue
        if relaxation.status == "unbounded":
            return MilpSolution("unbounded", nodes=nodes, bound=math.inf)
        obj = relaxation.objective
        if incumbent_x is not None and obj <= incumbent_obj + gap_tol:
            continue

        z = relaxation.x[list(binaries)] if binaries else np.zeros(0)
        frac = np.abs(z - np.round(z))
        if frac.size == 0 or frac.max() <= int_tol:
            if obj > incumbent_obj:
                incumbent_obj = obj
                incumbent_x = relaxation.x.copy()
            continue

        branch_var = binaries[int(np.argmax(frac))]
        for fixed in (0.0, 1.0):
            child = dict(fixings)
            child[branch_var] = (fixed, fixed)
            heapq.heappush(heap, (-obj, next(counter), child))

    bound = current_bound()
    if incumbent_x is None:
        return MilpSolution("infeasible", nodes=nodes, bound=bound)
    return MilpSolution("optimal", incumbent_x, incumbent_obj, nodes=nodes, bound=bound)
