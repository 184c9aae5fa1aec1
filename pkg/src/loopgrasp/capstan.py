"""Capstan-friction load-capacity models.

Two closed forms are implemented:

* single wrap around a drum (Euler-Eytelwein),

      T_load = T_hold * exp(mu * theta)

* a corrugated clamp whose jaws wrap the belt around a chain of curved
  segments.  Each curve amplifies the holding capacity of the previous
  one, so the chain compounds to

      T_load = mu * F_clamp * exp(mu * (phi_entry + sum(theta_i) + phi_exit))

  where ``mu * F_clamp`` is the bare frictional hold of the clamp and the
  entry/exit bend angles account for the belt kinking onto the flat jaw
  sections at either end of the chain.  With n identical curves of
  central angle theta_c and entry/exit bends of theta_c/2 this reduces to
  ``mu * F_clamp * exp(mu * (n + 1) * theta_c)``.

All quantities are unit-agnostic in the force argument (the exponential
factor is dimensionless), so hold/clamp forces may be supplied in N or
kgf as long as the caller is consistent.  Angles are radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError

__all__ = [
    "CapstanWrap",
    "ClampSpec",
    "capstan_amplify",
    "clamp_capacity",
    "clamp_capacity_nonuniform",
]


@dataclass(frozen=True)
class CapstanWrap:
    """A belt held with force ``hold_force`` and wrapped ``wrap_angle``
    radians around a drum with friction coefficient ``mu``."""

    hold_force: float
    mu: float
    wrap_angle: float

    def __post_init__(self):
        if self.hold_force < 0:
            raise DomainError(f"hold_force must be >= 0, got {self.hold_force}")
        if self.mu < 0:
            raise DomainError(f"mu must be >= 0, got {self.mu}")
        if self.wrap_angle < 0:
            raise DomainError(f"wrap_angle must be >= 0, got {self.wrap_angle}")


@dataclass(frozen=True)
class ClampSpec:
    """Wave-patterned clamp geometry and friction parameters.

    ``n_curves`` is the effective number of curved segments; fillets at
    the chain ends are the caller's responsibility (reduce n before
    constructing the spec).  ``n_curves = 0`` with nonzero entry/exit
    bends models a bare kinked clamp.
    """

    mu: float
    clamp_force: float
    n_curves: int
    theta_c: float
    phi_entry: float
    phi_exit: float

    def __post_init__(self):
        if self.mu < 0:
            raise DomainError(f"mu must be >= 0, got {self.mu}")
        if self.clamp_force < 0:
            raise DomainError(f"clamp_force must be >= 0, got {self.clamp_force}")
        if not isinstance(self.n_curves, int) or self.n_curves < 0:
            raise DomainError(f"n_curves must be a nonnegative integer, got {self.n_curves!r}")
        if not 0 < self.theta_c <= math.pi:
            raise DomainError(f"theta_c must lie in (0, pi], got {self.theta_c}")
        if self.phi_entry < 0 or self.phi_exit < 0:
            raise DomainError("entry/exit bend angles must be >= 0")

    @classmethod
    def uniform(cls, mu: float, clamp_force: float, n_curves: int, theta_c: float) -> "ClampSpec":
        """Uniform design: entry and exit bends are each theta_c / 2."""
        return cls(mu, clamp_force, n_curves, theta_c, theta_c / 2.0, theta_c / 2.0)

    @property
    def total_wrap_angle(self) -> float:
        return self.phi_entry + self.n_curves * self.theta_c + self.phi_exit


def capstan_amplify(wrap: CapstanWrap) -> float:
    """Load capacity of a single friction wrap: ``T_hold * e^(mu*theta)``."""
    return wrap.hold_force * math.exp(wrap.mu * wrap.wrap_angle)


def clamp_capacity(spec: ClampSpec) -> float:
    """Load capacity of the wave-patterned clamp chain.

    The bare hold ``mu * F_clamp`` is amplified over the total wrap angle
    ``phi_entry + n * theta_c + phi_exit``.  A frictionless clamp holds
    nothing since the bare hold itself is frictional.
    """
    return spec.mu * spec.clamp_force * math.exp(spec.mu * spec.total_wrap_angle)


def clamp_capacity_nonuniform(
    mu: float,
    clamp_force: float,
    curve_angles: Sequence[float],
    phi_entry: float = 0.0,
    phi_exit: float = 0.0,
) -> float:
    """Clamp chain with per-curve angles.

    Equivalent to iterating the single-curve amplification curve by curve
    (each curve's hold force is the previous curve's load capacity), which
    collapses to one exponential of the summed angle.
    """
    if mu < 0:
        raise DomainError(f"mu must be >= 0, got {mu}")
    if clamp_force < 0:
        raise DomainError(f"clamp_force must be >= 0, got {clamp_force}")
    if phi_entry < 0 or phi_exit < 0:
        raise DomainError("entry/exit bend angles must be >= 0")
    angles = list(curve_angles)
    if any(a < 0 for a in angles):
        raise DomainError("curve angles must be >= 0")
    total = phi_entry + math.fsum(angles) + phi_exit
    return mu * clamp_force * math.exp(mu * total)
