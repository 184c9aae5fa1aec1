"""System-level load-capacity analysis and bottleneck identification.

A single closed-loop strand runs from the base winch, around the object,
into the tip clamp/winch.  Five independent limits cap the force one
strand can carry:

* membrane   - tensile yield of the strand material,
* base_fastening - capstan wrap of the strand onto the base winch core,
* base_winch - base motor stall torque through its transmission,
* tip_clamp  - wave-patterned clamp capacity,
* tip_winch  - tip motor stall torque through its transmission.

With the load suspended between the base and tip fastenings, each strand
end bears half of the payload, so the payload capacity is
``strands_per_loop * min(limit)``.  The weakest limit is the bottleneck.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .capstan import CapstanWrap, ClampSpec, capstan_amplify, clamp_capacity
from .errors import DomainError

__all__ = [
    "MembraneSpec",
    "WinchSpec",
    "SystemSpec",
    "CapacityReport",
    "winch_pull_force",
    "spool_radius",
    "membrane_capacity",
    "system_capacity",
]

LIMIT_NAMES = ("membrane", "base_fastening", "base_winch", "tip_clamp", "tip_winch")


@dataclass(frozen=True)
class MembraneSpec:
    """Tensile capacity of the strand membrane.

    Strength is given either directly per unit width (``strength_per_width``,
    N/m) or as ``yield_stress`` (Pa) times ``thickness`` (m) - exactly one
    of the two parameterizations.  ``load_layers`` counts the material
    layers across the flattened width that carry tension (a flattened tube
    has two).
    """

    flattened_width: float
    load_layers: int
    strength_per_width: float | None = None
    yield_stress: float | None = None
    thickness: float | None = None

    def __post_init__(self):
        has_direct = self.strength_per_width is not None
        has_stress = self.yield_stress is not None or self.thickness is not None
        if has_direct and has_stress:
            raise DomainError("give strength_per_width or yield_stress+thickness, not both")
        if not has_direct and (self.yield_stress is None or self.thickness is None):
            raise DomainError("membrane strength missing: need strength_per_width or yield_stress+thickness")
        if self.flattened_width < 0:
            raise DomainError(f"flattened_width must be >= 0, got {self.flattened_width}")
        if not isinstance(self.load_layers, int) or self.load_layers <= 0:
            raise DomainError(f"load_layers must be a positive integer, got {self.load_layers!r}")
        for name in ("strength_per_width", "yield_stress", "thickness"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise DomainError(f"{name} must be > 0, got {v}")


@dataclass(frozen=True)
class WinchSpec:
    """Motorized winch: stall torque through a gear ratio onto a spool.

    ``max_radius`` is the largest spool radius the device can accommodate
    once the wound material builds up; it sets the worst-case moment arm.
    """

    stall_torque: float
    gear_ratio: float
    core_radius: float
    max_radius: float
    material_thickness: float

    def __post_init__(self):
        if self.stall_torque <= 0:
            raise DomainError(f"stall_torque must be > 0, got {self.stall_torque}")
        if self.gear_ratio < 1:
            raise DomainError(f"gear_ratio must be >= 1, got {self.gear_ratio}")
        if self.core_radius <= 0:
            raise DomainError(f"core_radius must be > 0, got {self.core_radius}")
        if self.max_radius < self.core_radius:
            raise DomainError("max_radius must be >= core_radius")
        if self.material_thickness <= 0:
            raise DomainError(f"material_thickness must be > 0, got {self.material_thickness}")


@dataclass(frozen=True)
class SystemSpec:
    """A complete single-loop grasping system."""

    membrane: MembraneSpec
    base_fastening: CapstanWrap
    base_winch: WinchSpec
    tip_clamp: ClampSpec
    tip_winch: WinchSpec
    strands_per_loop: int = 2

    def __post_init__(self):
        if not isinstance(self.strands_per_loop, int) or self.strands_per_loop < 1:
            raise DomainError(f"strands_per_loop must be an integer >= 1, got {self.strands_per_loop!r}")


@dataclass(frozen=True)
class CapacityReport:
    """Per-limit strand forces [N], total payload capacity [N], and the
    name(s) of the limiting component."""

    per_limit: dict[str, float]
    payload_capacity: float
    bottleneck: list[str] = field(default_factory=list)
    strands_per_loop: int = 2


def winch_pull_force(spec: WinchSpec, effective_radius: float) -> float:
    """Stall pull force at a given spool radius: torque * ratio / radius."""
    if not spec.core_radius <= effective_radius <= spec.max_radius:
        raise DomainError(
            f"effective_radius {effective_radius} outside spool range "
            f"[{spec.core_radius}, {spec.max_radius}]"
        )
    return spec.stall_torque * spec.gear_ratio / effective_radius


def spool_radius(core_radius: float, wound_length: float, material_thickness: float) -> float:
    """Spool radius after winding ``wound_length`` of material.

    Area conservation for an Archimedean wrap: the wound cross-section
    annulus pi*(r^2 - r0^2) equals length * thickness.
    """
    if core_radius <= 0:
        raise DomainError(f"core_radius must be > 0, got {core_radius}")
    if wound_length < 0:
        raise DomainError(f"wound_length must be >= 0, got {wound_length}")
    if material_thickness <= 0:
        raise DomainError(f"material_thickness must be > 0, got {material_thickness}")
    return (core_radius**2 + wound_length * material_thickness / 3.141592653589793) ** 0.5


def membrane_capacity(spec: MembraneSpec) -> float:
    """Tensile capacity of the membrane cross-section [N]."""
    if spec.strength_per_width is not None:
        per_width = spec.strength_per_width
    else:
        per_width = spec.yield_stress * spec.thickness
    return spec.load_layers * spec.flattened_width * per_width


def system_capacity(
    spec: SystemSpec,
    wound_length: float | None = None,
    bottleneck_rtol: float = 1e-9,
) -> CapacityReport:
    """Evaluate all five strand limits and the payload they allow.

    Winch limits default to the worst-case moment arm (``max_radius``).
    Pass ``wound_length`` to evaluate them instead at the spool radius
    after winding that much material.
    """

    def winch_radius(w: WinchSpec) -> float:
        if wound_length is None:
            return w.max_radius
        return spool_radius(w.core_radius, wound_length, w.material_thickness)

    per_limit = {
        "membrane": membrane_capacity(spec.membrane),
        "base_fastening": capstan_amplify(spec.base_fastening),
        "base_winch": winch_pull_force(spec.base_winch, winch_radius(spec.base_winch)),
        "tip_clamp": clamp_capacity(spec.tip_clamp),
        "tip_winch": winch_pull_force(spec.tip_winch, winch_radius(spec.tip_winch)),
    }
    weakest = min(per_limit.values())
    bottleneck = [
        name for name, value in per_limit.items()
        if value <= weakest * (1.0 + bottleneck_rtol)
    ]
    return CapacityReport(
        per_limit=per_limit,
        payload_capacity=spec.strands_per_loop * weakest,
        bottleneck=bottleneck,
        strands_per_loop=spec.strands_per_loop,
    )
