"""Exact equilibria of finite zero-sum matrix games via linear programming.

The value LP is the classical reciprocal form: shift the payoff matrix so
every entry is positive, solve ``min sum(p')`` subject to ``A'^T p' >= 1``
for the row player (and the symmetric ``max sum(q')`` with ``A' q' <= 1``
for the column player), then normalize and un-shift.  One LP per player.

The LPs go to SciPy's HiGHS backend when it is importable; the package's own
tableau solver is the fallback.  On large degenerate subgames the dense
tableau accumulates enough pivot roundoff to miss the minimax certificate
below, and HiGHS's revised simplex does not.  The certificate is verified
here either way, independent of which solver produced the strategies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    FiniteMixedStrategy,
    GameDefinition,
    StrategyPoint,
    merge_duplicates,
    require_in_space,
)
from .errors import ModelError
from .linprog import GREATER_EQUAL, LESS_EQUAL, LinearProgram, solve_lp

try:
    from scipy.optimize import linprog as _scipy_linprog
except ImportError:  # pragma: no cover - exercised only without scipy
    _scipy_linprog = None

# |max_i (Aq)_i - value| and |min_j (p^T A)_j - value| for returned equilibria.
CERTIFICATE_TOL = 1e-7


@dataclass
class MatrixGame:
    """Payoff matrix for player 1 plus the pure strategies labeling its axes."""

    payoff: np.ndarray
    row_strategies: tuple[StrategyPoint, ...]
    col_strategies: tuple[StrategyPoint, ...]

    def __post_init__(self):
        self.payoff = np.asarray(self.payoff, dtype=float)
        if self.payoff.ndim != 2 or self.payoff.size == 0:
            raise ModelError(f"payoff must be a nonempty matrix, got shape {self.payoff.shape}")
        if not np.all(np.isfinite(self.payoff)):
            raise ModelError("payoff entries must be finite")
        self.row_strategies = tuple(self.row_strategies)
        self.col_strategies = tuple(self.col_strategies)
        m, k = self.payoff.shape
        if len(self.row_strategies) != m or len(self.col_strategies) != k:
            raise ModelError("strategy labels must match the payoff shape")

    @classmethod
    def from_payoff(cls, payoff: Sequence[Sequence[float]]) -> "MatrixGame":
        """Label rows and columns by their indices (as 1-D points)."""
        arr = np.asarray(payoff, dtype=float)
        rows = tuple(StrategyPoint((float(i),)) for i in range(arr.shape[0]))
        cols = tuple(StrategyPoint((float(j),)) for j in range(arr.shape[1]))
        return cls(arr, rows, cols)


def embed_matrix_game(
    payoff: Sequence[Sequence[float]],
) -> tuple[GameDefinition, tuple[StrategyPoint, ...], tuple[StrategyPoint, ...]]:
    """Wrap a finite matrix game as a :class:`GameDefinition`.

    Pure strategies are the row/column indices embedded as 1-D points; the
    utility callable indexes into the payoff matrix.  Returns the game plus
    the two pure-strategy lists (handy for exhaustive oracles).
    """
    from .core import Box  # local import keeps module load order simple

    arr = np.asarray(payoff, dtype=float)
    if arr.ndim != 2 or arr.size == 0 or not np.all(np.isfinite(arr)):
        raise ModelError(f"payoff must be a finite nonempty matrix, got shape {arr.shape}")
    m, k = arr.shape

    def lookup(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        i = np.rint(x[..., 0]).astype(int)
        j = np.rint(y[..., 0]).astype(int)
        return arr[i, j]

    rows = tuple(StrategyPoint((float(i),)) for i in range(m))
    cols = tuple(StrategyPoint((float(j),)) for j in range(k))
    game = GameDefinition(
        Box((0.0,), (float(m - 1),)),
        Box((0.0,), (float(k - 1),)),
        lookup,
        name="finite-matrix",
    )
    return game, rows, cols


def subgame_matrix(
    game: GameDefinition,
    xs: Sequence[StrategyPoint],
    ys: Sequence[StrategyPoint],
) -> MatrixGame:
    """Payoff matrix ``A[i][j] = u(xs[i], ys[j])`` evaluated by the game itself."""
    xs = list(xs)
    ys = list(ys)
    if not xs or not ys:
        raise ModelError("subgame needs at least one strategy per player")
    for pt in xs:
        require_in_space(game.space1, pt, "player 1")
    for pt in ys:
        require_in_space(game.space2, pt, "player 2")
    xa = np.asarray([p.coords for p in xs], dtype=float)
    ya = np.asarray([p.coords for p in ys], dtype=float)
    payoff = np.asarray(game.utility(xa[:, None, :], ya[None, :, :]), dtype=float)
    return MatrixGame(payoff, tuple(xs), tuple(ys))


def _reciprocal_weights(lp: LinearProgram, label: str) -> np.ndarray:
    """Optimal point of a reciprocal-form LP, preferring the HiGHS backend."""
    if _scipy_linprog is not None:
        senses = np.asarray([1.0 if s == LESS_EQUAL else -1.0 for s in lp.senses])
        res = _scipy_linprog(
            -lp.objective,
            A_ub=lp.lhs * senses[:, None],
            b_ub=lp.rhs * senses,
            bounds=(0, None),
            method="highs",
        )
        if res.status == 0:
            return np.clip(res.x, 0.0, None)
        # fall through on any distress and let the tableau solver decide
    sol = solve_lp(lp)
    if sol.status != "optimal":
        raise ModelError(f"{label} LP ended {sol.status}")
    return np.clip(sol.x, 0.0, None)


def solve_zero_sum(
    mg: MatrixGame,
) -> tuple[FiniteMixedStrategy, FiniteMixedStrategy, float]:
    """Equilibrium ``(p*, q*, value)`` of the matrix game.

    The output satisfies the minimax certificate
    ``max_i (A q*)_i = value = min_j (p*^T A)_j`` within
    :data:`CERTIFICATE_TOL`; a gross violation raises :class:`ModelError`.
    """
    A = mg.payoff
    m, k = A.shape
    shift = 1.0 + max(0.0, -float(A.min()))
    S = A + shift

    row_lp = LinearProgram(
        objective=-np.ones(m),
        lhs=S.T,
        senses=(GREATER_EQUAL,) * k,
        rhs=np.ones(k),
    )
    p_raw = _reciprocal_weights(row_lp, "row-player")
    v1 = 1.0 / p_raw.sum()

    col_lp = LinearProgram(
        objective=np.ones(k),
        lhs=S,
        senses=(LESS_EQUAL,) * m,
        rhs=np.ones(m),
    )
    q_raw = _reciprocal_weights(col_lp, "column-player")
    v2 = 1.0 / q_raw.sum()

    p_vec = p_raw / p_raw.sum()
    q_vec = q_raw / q_raw.sum()
    value = 0.5 * (v1 + v2) - shift

    best_row = float((A @ q_vec).max())
    best_col = float((p_vec @ A).min())
    if abs(best_row - value) > 1e-6 or abs(best_col - value) > 1e-6:
        raise ModelError(
            f"equilibrium certificate violated: max row {best_row}, "
            f"min col {best_col}, value {value}"
        )

    p = merge_duplicates(mg.row_strategies, p_vec)
    q = merge_duplicates(mg.col_strategies, q_vec)
    return p, q, value
