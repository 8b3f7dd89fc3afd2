"""Strategy points, finitely supported mixed strategies, and game definitions.

Conventions used throughout the package:

* A pure strategy is a :class:`StrategyPoint`, a tuple of float coordinates.
* Utility callables are NumPy-vectorized.  ``utility(x, y)`` receives arrays
  whose trailing axis is the coordinate dimension of the respective player,
  broadcasts over any leading axes, and returns an array of the broadcast
  shape.  Player 1 maximizes ``utility``, player 2 minimizes it.
* Mixed strategies are finitely supported; two atoms closer than
  :data:`MERGE_TOL` in max-norm count as the same point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, InvalidStrategyError, ParameterError

# Max-norm distance below which two atoms are considered identical.
MERGE_TOL = 1e-9
# Allowed deviation of total probability mass from 1.
WEIGHT_SUM_TOL = 1e-9
# Slack used by the membership tests of strategy spaces.
MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True)
class StrategyPoint:
    """A pure strategy: an immutable tuple of finite float coordinates."""

    coords: tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if not coords:
            raise DomainError("a strategy point needs at least one coordinate")
        if not all(math.isfinite(c) for c in coords):
            raise DomainError(f"non-finite coordinate in strategy point {coords}")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)


def point(*coords: float) -> StrategyPoint:
    """Convenience constructor: ``point(0.2)`` or ``point(0.5, 0.25, 0.25)``."""
    return StrategyPoint(tuple(coords))


def _axis_grid(lo: float, hi: float, resolution: float) -> np.ndarray:
    """Uniform grid over [lo, hi] with spacing <= resolution, endpoints included.

    The step count is rounded down when ``(hi - lo) / resolution`` is an
    integer up to float noise, so round resolutions yield round grids.
    """
    if resolution <= 0:
        raise ParameterError(f"grid resolution must be positive, got {resolution!r}")
    span = hi - lo
    raw = span / resolution
    steps = int(round(raw)) if abs(raw - round(raw)) <= 1e-6 * max(1.0, raw) else int(math.ceil(raw))
    return np.linspace(lo, hi, max(steps, 1) + 1)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box ``prod_i [lower_i, upper_i]``."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lower)
        hi = tuple(float(v) for v in self.upper)
        if len(lo) != len(hi) or not lo:
            raise ParameterError("box bounds must be nonempty and of equal length")
        if not all(math.isfinite(a) and math.isfinite(b) for a, b in zip(lo, hi)):
            raise ParameterError("box bounds must be finite")
        if any(a > b for a, b in zip(lo, hi)):
            raise ParameterError(f"box has lower > upper: {lo} vs {hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return len(self.lower)

    def contains(self, pt: StrategyPoint, tol: float = MEMBERSHIP_TOL) -> bool:
        if pt.dim != self.dim:
            return False
        return all(a - tol <= c <= b + tol for c, a, b in zip(pt.coords, self.lower, self.upper))

    def grid_points(self, resolution: float) -> np.ndarray:
        if self.dim != 1:
            raise ParameterError("grid sampling is only defined for one-dimensional boxes")
        return _axis_grid(self.lower[0], self.upper[0], resolution)

    def sample(self, rng: np.random.Generator) -> StrategyPoint:
        coords = rng.uniform(self.lower, self.upper)
        return StrategyPoint(tuple(float(c) for c in np.atleast_1d(coords)))


@dataclass(frozen=True)
class IntervalUnion:
    """Disjoint union of closed intervals on the real line (dimension 1)."""

    pieces: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pieces = tuple((float(a), float(b)) for a, b in self.pieces)
        if not pieces:
            raise ParameterError("interval union needs at least one piece")
        for a, b in pieces:
            if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
                raise ParameterError(f"bad interval piece ({a}, {b})")
        ordered = sorted(pieces)
        for (_, b_prev), (a_next, _) in zip(ordered, ordered[1:]):
            if a_next <= b_prev:
                raise ParameterError("interval pieces must be disjoint")
        object.__setattr__(self, "pieces", tuple(ordered))

    @property
    def dim(self) -> int:
        return 1

    def contains(self, pt: StrategyPoint, tol: float = MEMBERSHIP_TOL) -> bool:
        if pt.dim != 1:
            return False
        c = pt.coords[0]
        return any(a - tol <= c <= b + tol for a, b in self.pieces)

    def grid_points(self, resolution: float) -> np.ndarray:
        return np.concatenate([_axis_grid(a, b, resolution) for a, b in self.pieces])

    def sample(self, rng: np.random.Generator) -> StrategyPoint:
        lengths = np.array([b - a for a, b in self.pieces])
        k = int(rng.choice(len(self.pieces), p=lengths / lengths.sum()))
        a, b = self.pieces[k]
        return StrategyPoint((float(rng.uniform(a, b)),))


@dataclass(frozen=True)
class Simplex:
    """Probability simplex ``{x >= 0, sum x = 1}`` in ``R^dim``."""

    dim: int

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ParameterError(f"simplex dimension must be >= 1, got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))

    def contains(self, pt: StrategyPoint, tol: float = MEMBERSHIP_TOL) -> bool:
        if pt.dim != self.dim:
            return False
        if any(c < -tol for c in pt.coords):
            return False
        return abs(math.fsum(pt.coords) - 1.0) <= tol

    def sample(self, rng: np.random.Generator) -> StrategyPoint:
        return StrategyPoint(tuple(float(c) for c in rng.dirichlet(np.ones(self.dim))))


StrategySpace = Box | IntervalUnion | Simplex


@dataclass(frozen=True)
class GameDefinition:
    """A two-player zero-sum game with compact strategy spaces.

    ``utility`` is the payoff to player 1 (the maximizer); player 2 receives
    its negation.  See the module docstring for the vectorization contract.
    """

    space1: StrategySpace
    space2: StrategySpace
    utility: Callable[[np.ndarray, np.ndarray], np.ndarray]
    name: str = ""


@dataclass(frozen=True)
class FiniteMixedStrategy:
    """Probability distribution with finite support over one player's space.

    Invariants enforced at construction: at least one atom, weights
    nonnegative and summing to 1 within :data:`WEIGHT_SUM_TOL`, all atoms of
    equal dimension and pairwise farther than :data:`MERGE_TOL` apart in
    max-norm.  Use :func:`merge_duplicates` to build one from raw lists.
    """

    atoms: tuple[StrategyPoint, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        atoms = tuple(self.atoms)
        weights = tuple(float(w) for w in self.weights)
        if not atoms:
            raise InvalidStrategyError("a mixed strategy needs at least one atom")
        if len(atoms) != len(weights):
            raise InvalidStrategyError(
                f"{len(atoms)} atoms but {len(weights)} weights"
            )
        if any(not math.isfinite(w) or w < 0.0 for w in weights):
            raise InvalidStrategyError(f"weights must be finite and >= 0, got {weights}")
        total = math.fsum(weights)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidStrategyError(f"weights sum to {total!r}, expected 1")
        dims = {a.dim for a in atoms}
        if len(dims) != 1:
            raise InvalidStrategyError(f"atoms of mixed dimension: {sorted(dims)}")
        if len(atoms) > 1:
            arr = np.asarray([a.coords for a in atoms])
            dist = np.abs(arr[:, None, :] - arr[None, :, :]).max(axis=-1)
            np.fill_diagonal(dist, np.inf)
            if dist.min() <= MERGE_TOL:
                raise InvalidStrategyError("atoms closer than the merge tolerance")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @property
    def support_size(self) -> int:
        return len(self.atoms)

    def atoms_array(self) -> np.ndarray:
        return np.asarray([a.coords for a in self.atoms], dtype=float)

    def weights_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)


def dirac(pt: StrategyPoint) -> FiniteMixedStrategy:
    """Point mass at ``pt``."""
    return FiniteMixedStrategy((pt,), (1.0,))


def merge_duplicates(
    atoms: Sequence[StrategyPoint], weights: Sequence[float]
) -> FiniteMixedStrategy:
    """Combine near-duplicate atoms and renormalize into a valid mixture.

    Atoms within :data:`MERGE_TOL` (max-norm) of an earlier atom are folded
    into it, summing their weights; the earlier coordinates are kept.  Atoms
    with zero weight are dropped.  Weights must be nonnegative (tiny negative
    float noise up to 1e-12 is clipped) with positive total; the result is
    renormalized to sum to 1.
    """
    atoms = list(atoms)
    w = np.asarray(list(weights), dtype=float)
    if len(atoms) != w.size:
        raise InvalidStrategyError(f"{len(atoms)} atoms but {w.size} weights")
    if len(atoms) == 0:
        raise InvalidStrategyError("a mixed strategy needs at least one atom")
    if np.any(~np.isfinite(w)) or np.any(w < -1e-12):
        raise InvalidStrategyError(f"weights must be finite and >= 0, got {w.tolist()}")
    w = np.clip(w, 0.0, None)
    if w.sum() <= 0.0:
        raise InvalidStrategyError("total weight must be positive")

    reps: list[StrategyPoint] = []
    rep_arr: list[np.ndarray] = []
    acc: list[float] = []
    for atom, wi in zip(atoms, w):
        if wi == 0.0:
            continue
        arr = atom.array()
        merged = False
        for k, other in enumerate(rep_arr):
            if other.shape == arr.shape and np.abs(other - arr).max() <= MERGE_TOL:
                acc[k] += wi
                merged = True
                break
        if not merged:
            reps.append(atom)
            rep_arr.append(arr)
            acc.append(float(wi))
    total = math.fsum(acc)
    return FiniteMixedStrategy(tuple(reps), tuple(a / total for a in acc))


def require_in_space(space: StrategySpace, pt: StrategyPoint, label: str) -> None:
    """Raise :class:`DomainError` naming ``pt`` when it is outside ``space``."""
    if not space.contains(pt):
        raise DomainError(f"{label} strategy {pt.coords} lies outside {space}")


def pure_utility(game: GameDefinition, x: StrategyPoint, y: StrategyPoint) -> float:
    """Evaluate ``u(x, y)`` for a pure strategy pair, with domain checks."""
    require_in_space(game.space1, x, "player 1")
    require_in_space(game.space2, y, "player 2")
    return float(game.utility(x.array(), y.array()))


def expected_utility(
    p: FiniteMixedStrategy, q: FiniteMixedStrategy, game: GameDefinition
) -> float:
    """Expected payoff of the mixed profile ``(p, q)``.

    Computed as the bilinear double sum ``sum_x sum_y p(x) q(y) u(x, y)``
    in one vectorized utility call.
    """
    for atom in p.atoms:
        require_in_space(game.space1, atom, "player 1")
    for atom in q.atoms:
        require_in_space(game.space2, atom, "player 2")
    xa = p.atoms_array()
    ya = q.atoms_array()
    table = np.asarray(game.utility(xa[:, None, :], ya[None, :, :]), dtype=float)
    return float(p.weights_array() @ table @ q.weights_array())
