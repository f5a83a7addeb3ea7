"""Exception hierarchy shared by the analytic and simulation modules."""


class RuinModelError(Exception):
    """Base class for all errors raised by :mod:`ruinprob`."""


class DomainError(RuinModelError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class UnsupportedModelError(RuinModelError):
    """The method is not defined for the model's distribution families."""


class NoPositiveRootError(RuinModelError):
    """The adjustment-coefficient equation has no positive solution."""


class BracketingError(RuinModelError):
    """The root finder could not bracket a sign change inside the MGF domain."""

    def __init__(self, message: str, grid: list[tuple[float, float]]):
        super().__init__(message)
        self.grid = grid


class ApproximationInapplicableError(RuinModelError):
    """A positivity gate of the moment-matching surrogate failed."""

    def __init__(self, message: str, gate: str):
        super().__init__(message)
        self.gate = gate
