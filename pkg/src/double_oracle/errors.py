"""Exception types shared across the package."""


class GameSolverError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(GameSolverError):
    """A strategy point lies outside its declared strategy space."""


class InvalidStrategyError(GameSolverError):
    """A mixed strategy has no atoms or nonpositive total weight."""


class ParameterError(GameSolverError):
    """A numeric parameter is outside its admissible range."""


class ModelError(GameSolverError):
    """An optimization model is malformed or numerically broken."""


class OracleContractError(GameSolverError):
    """A best-response oracle violated its contract."""


class ResourceLimitError(GameSolverError):
    """A solver or oracle exceeded its configured resource budget.

    Carries the best incumbent and bound known at the time the budget ran
    out so callers can salvage partial progress.
    """

    def __init__(self, message, incumbent=None, bound=None):
        super().__init__(message)
        self.incumbent = incumbent
        self.bound = bound
