"""Exception types shared across the solver and the tracking engine."""


class PFrontError(Exception):
    """Base class for all package errors."""


class DomainError(PFrontError, ValueError):
    """Argument outside the mathematical domain (e.g. nonpositive density)."""


class VacuumFormation(PFrontError):
    """An operation would produce a density at or below the vacuum floor."""

    def __init__(self, msg: str, rho: float | None = None):
        super().__init__(msg)
        self.rho = rho


class NonConvergence(PFrontError):
    """A root finder exhausted its iteration budget or lost its bracket."""


class InadmissibleOrientation(DomainError):
    """Requested shock data violates the Lax density ordering for the family."""


class HypothesisViolation(PFrontError):
    """A construction's stated hypotheses fail for the given inputs."""

    def __init__(self, msg: str, margin: float | None = None):
        super().__init__(msg)
        self.margin = margin


class ScheduleInfeasible(PFrontError):
    """A staged schedule cannot be realized; message names the constraint."""


class InfeasibleTarget(PFrontError):
    """A scenario target (e.g. amplification factor) is out of reach."""
