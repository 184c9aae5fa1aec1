"""Data model for the planar quasi-static rod contact solver."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ..errors import DomainError

__all__ = [
    "RodModel",
    "FixedBothEnds",
    "FixedBaseFreeTip",
    "Boundary",
    "Scene",
    "SolverParams",
    "Equilibrium",
    "PressureProfile",
    "HoldResult",
]


@dataclass(frozen=True)
class RodModel:
    """Discretized planar rod.

    ``axial_stiffness`` is EA [N], ``bending_stiffness`` is EI [N m^2].
    ``bending_stiffness = 0`` is the exact membrane limit: the bending
    term is omitted entirely, not merely made small.  ``width`` is the
    out-of-plane extent used to convert contact line loads to pressures.
    """

    n_nodes: int
    rest_length: float
    axial_stiffness: float
    bending_stiffness: float
    linear_density: float
    width: float

    def __post_init__(self):
        if not isinstance(self.n_nodes, int) or self.n_nodes < 10:
            raise DomainError(f"n_nodes must be an integer >= 10, got {self.n_nodes!r}")
        if self.rest_length <= 0:
            raise DomainError(f"rest_length must be > 0, got {self.rest_length}")
        if self.axial_stiffness <= 0:
            raise DomainError(f"axial_stiffness must be > 0, got {self.axial_stiffness}")
        if self.bending_stiffness < 0:
            raise DomainError(f"bending_stiffness must be >= 0, got {self.bending_stiffness}")
        if self.linear_density < 0:
            raise DomainError(f"linear_density must be >= 0, got {self.linear_density}")
        if self.width <= 0:
            raise DomainError(f"width must be > 0, got {self.width}")


@dataclass(frozen=True)
class FixedBothEnds:
    """Both end nodes pinned (closed-loop scenario)."""

    start: tuple[float, float]
    end: tuple[float, float]


@dataclass(frozen=True)
class FixedBaseFreeTip:
    """Base clamped, tip free (open-loop scenario).

    The base node is pinned at ``position`` and the second node is pinned
    along the initial shape, which clamps the base direction (encastre),
    matching the cantilever picture used for open-loop holding.
    """

    position: tuple[float, float]


Boundary = Union[FixedBothEnds, FixedBaseFreeTip]


@dataclass
class Scene:
    """A rigid circular object, gravity, boundary conditions and loads.

    ``initial_positions`` (n_nodes x 2) defines both the starting guess
    and, via its segment lengths, how the rod's rest length distributes
    over elements.  ``rest_curvature`` sets the stress-free bend state:
    the string ``"initial"`` (default) takes the initial shape as
    stress-free; a float is a uniform natural curvature [1/m], e.g. the
    inverse neutral radius of a pre-curved loop.

    ``object_load`` and ``pull_force`` are both force vectors applied to
    the object and ramped together with gravity; the two fields exist so
    closed-loop payload and open-loop destabilizing pull can be stated
    separately in configs.
    """

    object_center: np.ndarray
    object_radius: float
    gravity: np.ndarray
    boundary: Boundary
    initial_positions: np.ndarray
    object_load: np.ndarray = field(default_factory=lambda: np.zeros(2))
    pull_force: np.ndarray = field(default_factory=lambda: np.zeros(2))
    object_mass: float = 0.0
    rest_curvature: float | str = "initial"

    def __post_init__(self):
        self.object_center = np.asarray(self.object_center, dtype=float).reshape(2)
        self.gravity = np.asarray(self.gravity, dtype=float).reshape(2)
        self.object_load = np.asarray(self.object_load, dtype=float).reshape(2)
        self.pull_force = np.asarray(self.pull_force, dtype=float).reshape(2)
        self.initial_positions = np.asarray(self.initial_positions, dtype=float)
        if self.object_radius <= 0:
            raise DomainError(f"object_radius must be > 0, got {self.object_radius}")
        if self.object_mass < 0:
            raise DomainError(f"object_mass must be >= 0, got {self.object_mass}")
        if self.initial_positions.ndim != 2 or self.initial_positions.shape[1] != 2:
            raise DomainError("initial_positions must have shape (n_nodes, 2)")
        for endpoint in self._boundary_points():
            if np.linalg.norm(np.asarray(endpoint) - self.object_center) <= self.object_radius:
                raise DomainError("boundary endpoints must lie outside the object")

    def _boundary_points(self):
        if isinstance(self.boundary, FixedBothEnds):
            return [self.boundary.start, self.boundary.end]
        return [self.boundary.position]

    @property
    def object_force_total(self) -> np.ndarray:
        """Total non-contact force on the object at full load."""
        return self.object_load + self.pull_force + self.object_mass * self.gravity


@dataclass(frozen=True)
class SolverParams:
    """Newton/ramping knobs.

    The convergence test is on the norm of the free-DOF energy gradient
    (internal forces plus contact reactions minus applied loads).  The
    effective tolerance is ``tol_abs`` when given, otherwise
    ``tol_rel * F_char`` with F_char the characteristic applied force.
    ``penalty_scale`` multiplies EA/element_rest_length to form the
    contact penalty stiffness.  Newton steps are capped at
    ``max_step_factor * object_radius`` per DOF so a step can never jump
    clean across the thin penalty barrier (penalty tunneling).
    """

    tol_rel: float = 1e-8
    tol_abs: float | None = None
    ramp_steps: int = 20
    max_iterations: int = 200
    penalty_scale: float = 1.0
    penetration_tol_factor: float = 1e-4
    escape_displacement_factor: float = 50.0
    max_step_factor: float = 0.5

    def __post_init__(self):
        if self.tol_rel <= 0:
            raise DomainError("tol_rel must be > 0")
        if self.tol_abs is not None and self.tol_abs <= 0:
            raise DomainError("tol_abs must be > 0")
        if self.ramp_steps < 1 or self.max_iterations < 1:
            raise DomainError("ramp_steps and max_iterations must be >= 1")
        if self.penalty_scale <= 0:
            raise DomainError("penalty_scale must be > 0")


@dataclass
class Equilibrium:
    """Solved static state.

    ``contact_force`` holds the force each node receives from the object
    (zero off the contact set, parallel to the object's outward normal on
    it).  ``object_center`` is the solved object position; the object is
    a rigid-body unknown of the problem.
    """

    node_positions: np.ndarray
    axial_tension: np.ndarray
    contact_force: np.ndarray
    converged: bool
    residual_norm: float
    object_center: np.ndarray
    tolerance: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def contact_mask(self) -> np.ndarray:
        return np.linalg.norm(self.contact_force, axis=1) > 0.0


@dataclass
class PressureProfile:
    """Contact samples ordered by angular position on the object.

    ``angle`` is the polar angle of each rod node about the solved object
    center; ``pressure = line_load / rod width`` and both are zero for
    nodes outside the contact arc.
    """

    angle: np.ndarray
    pressure: np.ndarray
    line_load: np.ndarray
    node_index: np.ndarray
    contact: np.ndarray

    @property
    def peak_pressure(self) -> float:
        return float(self.pressure.max(initial=0.0))


@dataclass
class HoldResult:
    """Outcome of an open-loop hold attempt.

    ``outcome`` is "holds", "escapes", or "inconclusive" (ambiguous
    terminal state, e.g. contact lost only on the last increments or a
    non-converged step with contact still present).
    """

    outcome: str
    equilibrium: Equilibrium | None
    diagnostics: dict = field(default_factory=dict)

    @property
    def held(self) -> bool:
        return self.outcome == "holds"

    @property
    def escaped(self) -> bool:
        return self.outcome == "escapes"
