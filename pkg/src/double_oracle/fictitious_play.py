"""Fictitious play with oracle best responses, as a baseline solver.

Both players simultaneously best-respond to the opponent's empirical mixture
(uniform over the opponent's history, so each of the ``i`` entries carries
weight ``1/i``; duplicated responses accumulate mass).  The oracle values
computed against the empirical mixtures bound the game value from below and
above, which makes the trace directly comparable with the strategy-generation
solver's.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    MERGE_TOL,
    FiniteMixedStrategy,
    GameDefinition,
    StrategyPoint,
    expected_utility,
    merge_duplicates,
    require_in_space,
)
from .errors import ParameterError
from .engine import IterationRecord, _checked_answer
from .oracles import BestResponseOracle


class _Empirical:
    """Uniform history distribution with duplicates folded incrementally."""

    def __init__(self, first: StrategyPoint):
        self.reps: list[StrategyPoint] = [first]
        self.counts: list[int] = [1]
        self.total = 1

    def add(self, pt: StrategyPoint) -> None:
        arr = pt.array()
        for k, rep in enumerate(self.reps):
            if np.abs(rep.array() - arr).max() <= MERGE_TOL:
                self.counts[k] += 1
                self.total += 1
                return
        self.reps.append(pt)
        self.counts.append(1)
        self.total += 1

    def mixture(self) -> FiniteMixedStrategy:
        return merge_duplicates(self.reps, self.counts)


@dataclass
class FictitiousPlayResult:
    trace: list[IterationRecord]
    empirical1: FiniteMixedStrategy
    empirical2: FiniteMixedStrategy

    @property
    def gap(self) -> float:
        return self.trace[-1].gap


def run_fictitious_play(
    game: GameDefinition,
    oracle1: BestResponseOracle,
    oracle2: BestResponseOracle,
    init1: StrategyPoint,
    init2: StrategyPoint,
    iters: int,
    on_iteration: Callable[[IterationRecord], None] | None = None,
) -> FictitiousPlayResult:
    """Run ``iters`` rounds of simultaneous fictitious play.

    Iteration ``i`` records the oracle bounds against the empirical mixtures
    of the first ``i`` history entries; both responses are appended before
    the next round.  The responses of the final round are not appended, so
    the returned empirical mixtures are exactly the ones the last trace row
    measured (their expected utility equals its ``subgame_value``).
    """
    if iters < 1:
        raise ParameterError(f"iters must be >= 1, got {iters}")
    require_in_space(game.space1, init1, "player 1")
    require_in_space(game.space2, init2, "player 2")

    emp1 = _Empirical(init1)
    emp2 = _Empirical(init2)
    trace: list[IterationRecord] = []
    for i in range(1, iters + 1):
        started = time.perf_counter()
        mix1 = emp1.mixture()
        mix2 = emp2.mixture()
        ans1 = _checked_answer(oracle1, mix2, game.space1, 1)
        ans2 = _checked_answer(oracle2, mix1, game.space2, 2)
        record = IterationRecord(
            index=i,
            lower=ans2.value,
            upper=ans1.value,
            subgame_value=expected_utility(mix1, mix2, game),
            size_x=mix1.support_size,
            size_y=mix2.support_size,
            added_x=ans1.point,
            added_y=ans2.point,
            time_s=time.perf_counter() - started,
        )
        trace.append(record)
        if on_iteration is not None:
            on_iteration(record)
        if i < iters:
            emp1.add(ans1.point)
            emp2.add(ans2.point)
    return FictitiousPlayResult(trace, emp1.mixture(), emp2.mixture())
