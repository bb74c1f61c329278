"""Exception types shared across the package."""


class HedgeGameError(Exception):
    """Base class for every error raised by this package."""


class ContractViolation(HedgeGameError, ValueError):
    """A matrix argument fails a structural precondition (shape, Hermiticity, PSD, ...)."""


class ParameterError(HedgeGameError, ValueError):
    """A scalar game parameter is out of its allowed range."""


class OutOfHedgingRange(ParameterError):
    """theta lies outside the closed interval where the interpolated strategy exists."""


class DegenerateInstance(HedgeGameError, ValueError):
    """A no-answer instance whose target operator vanishes; its value is undefined."""


class SolverError(HedgeGameError, RuntimeError):
    """The barrier solver failed to reach the requested gap.

    Carries the last certified duality gap in ``gap`` (``nan`` when no
    feasible pair was produced at all).
    """

    def __init__(self, message: str, gap: float = float("nan")):
        super().__init__(message)
        self.gap = gap
