"""Exception hierarchy shared across the package."""

from __future__ import annotations


class LoopGraspError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LoopGraspError, ValueError):
    """A physical input violates its stated domain (negative force, radius
    outside the spool range, and so on)."""


class ConfigError(LoopGraspError):
    """Configuration file failed validation.

    Carries the full list of problems so users can fix everything in one
    pass instead of replaying error-by-error.
    """

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class GeometryError(DomainError):
    """Degenerate or ambiguous geometry (point on curve, touching loops,
    self-intersecting closed curve)."""


class PrecisionError(LoopGraspError):
    """A numerically evaluated topological invariant could not be resolved
    to an integer with confidence."""


class ConvergenceError(LoopGraspError):
    """A quasi-static solve failed to converge and the caller asked for an
    exception rather than a flagged result."""
