"""Strategy-generation loop for continuous two-player zero-sum games.

Starting from finite strategy sets, repeat: solve the finite subgame exactly
by LP, ask each player's oracle for a best response to the opponent's
subgame equilibrium, and add the answers to the sets.  The oracle values
sandwich the game value from below and above every iteration; the loop stops
once that sandwich closes to ``epsilon``, at which point the last subgame
equilibrium is an approximate equilibrium of the full game with additive
error equal to the final gap (plus the oracles' declared accuracy).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import (
    MERGE_TOL,
    FiniteMixedStrategy,
    GameDefinition,
    StrategyPoint,
    expected_utility,
    require_in_space,
)
from .errors import OracleContractError, ParameterError
from .matrix_game import solve_zero_sum, subgame_matrix
from .oracles import BestResponseOracle, OracleAnswer

# Absolute slack added to the gap <= epsilon stopping test.  Exact arithmetic
# drives the gap of a finite game to zero once the sets stop growing; in
# floats it lands within LP residual of zero, and this slack lets epsilon = 0
# terminate anyway.  Set to 0 to disable.
STOP_TOL = 1e-9

TERMINATED_GAP = "gap"
TERMINATED_CAP = "iteration_cap"


@dataclass(frozen=True)
class IterationRecord:
    """One iteration of a solver run.

    ``lower``/``upper`` are the oracle values against the current subgame
    equilibrium, ``subgame_value`` is the expected utility of that
    equilibrium, and ``size_x``/``size_y`` are the strategy-set sizes of the
    subgame that was solved.  ``added_x``/``added_y`` are the oracle answers,
    recorded even when they duplicate existing points.
    """

    index: int
    lower: float
    upper: float
    subgame_value: float
    size_x: int
    size_y: int
    added_x: StrategyPoint
    added_y: StrategyPoint
    time_s: float

    @property
    def gap(self) -> float:
        return self.upper - self.lower


@dataclass
class SolveResult:
    p_star: FiniteMixedStrategy
    q_star: FiniteMixedStrategy
    trace: list[IterationRecord]
    terminated_by: str  # "gap" or "iteration_cap"

    @property
    def gap(self) -> float:
        return self.trace[-1].gap

    @property
    def value(self) -> float:
        return self.trace[-1].subgame_value

    @property
    def iterations(self) -> int:
        return len(self.trace)


def _merged_point_list(
    points: Sequence[StrategyPoint], space, label: str
) -> list[StrategyPoint]:
    out: list[StrategyPoint] = []
    for pt in points:
        require_in_space(space, pt, label)
        _absorb(out, pt)
    if not out:
        raise ParameterError(f"{label} initial strategy set is empty")
    return out


def _absorb(points: list[StrategyPoint], candidate: StrategyPoint) -> bool:
    """Append ``candidate`` unless a point within MERGE_TOL already exists."""
    arr = candidate.array()
    for existing in points:
        if np.abs(existing.array() - arr).max() <= MERGE_TOL:
            return False
    points.append(candidate)
    return True


def _checked_answer(
    oracle: BestResponseOracle,
    opponent: FiniteMixedStrategy,
    space,
    player: int,
) -> OracleAnswer:
    answer = oracle.respond(opponent)
    if not space.contains(answer.point):
        raise OracleContractError(
            f"player {player} oracle returned {answer.point.coords}, "
            f"which is outside {space}"
        )
    return answer


def run_double_oracle(
    game: GameDefinition,
    oracle1: BestResponseOracle,
    oracle2: BestResponseOracle,
    initial_x: Sequence[StrategyPoint],
    initial_y: Sequence[StrategyPoint],
    epsilon: float = 1e-3,
    max_iters: int = 1000,
    on_iteration: Callable[[IterationRecord], None] | None = None,
) -> SolveResult:
    """Run the strategy-generation loop until the bound gap closes.

    Returns the last subgame equilibrium together with the full iteration
    trace.  Reaching ``max_iters`` is a normal outcome reported as
    ``terminated_by == "iteration_cap"``, not an error.  ``on_iteration`` is
    invoked with each record as it is produced, which lets callers stream
    partial traces.
    """
    if epsilon < 0:
        raise ParameterError(f"epsilon must be >= 0, got {epsilon}")
    if max_iters < 1:
        raise ParameterError(f"max_iters must be >= 1, got {max_iters}")

    xs = _merged_point_list(initial_x, game.space1, "player 1")
    ys = _merged_point_list(initial_y, game.space2, "player 2")

    trace: list[IterationRecord] = []
    for i in range(1, max_iters + 1):
        started = time.perf_counter()
        p_star, q_star, _ = solve_zero_sum(subgame_matrix(game, xs, ys))
        ans1 = _checked_answer(oracle1, q_star, game.space1, 1)
        ans2 = _checked_answer(oracle2, p_star, game.space2, 2)
        record = IterationRecord(
            index=i,
            lower=ans2.value,
            upper=ans1.value,
            subgame_value=expected_utility(p_star, q_star, game),
            size_x=len(xs),
            size_y=len(ys),
            added_x=ans1.point,
            added_y=ans2.point,
            time_s=time.perf_counter() - started,
        )
        trace.append(record)
        if on_iteration is not None:
            on_iteration(record)
        if record.gap <= epsilon + STOP_TOL:
            return SolveResult(p_star, q_star, trace, TERMINATED_GAP)
        _absorb(xs, ans1.point)
        _absorb(ys, ans2.point)
    return SolveResult(p_star, q_star, trace, TERMINATED_CAP)


def bounds_from_profile(
    game: GameDefinition,
    p: FiniteMixedStrategy,
    q: FiniteMixedStrategy,
    oracle1: BestResponseOracle,
    oracle2: BestResponseOracle,
) -> tuple[float, float]:
    """Certified value bounds from an arbitrary mixed profile.

    ``lower = min_y U(p, y)`` and ``upper = max_x U(x, q)`` (both up to
    oracle accuracy); the game value lies between them.
    """
    lower = _checked_answer(oracle2, p, game.space2, 2).value
    upper = _checked_answer(oracle1, q, game.space1, 1).value
    return lower, upper
