"""Post-processing: pressure recovery, stiffness sweeps, segment balance."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from .model import Equilibrium, PressureProfile, RodModel, Scene, SolverParams
from .solver import solve_closed_loop

__all__ = [
    "segment_balance",
    "pressure_profile",
    "contact_arc",
    "sweep_rigidity",
    "SweepEntry",
]

log = logging.getLogger("loopgrasp.elastica")


def segment_balance(T1, T2, dF, R, dphi, MR1=0.0, MR2=0.0):
    """Force and moment residuals of a differential contact segment.

    A segment subtending ``dphi`` at radius of curvature ``R`` carries
    tensions T1 (base side) and T2 (tip side), a normal contact force dF,
    and bending reaction moments MR1/MR2 at its two cuts.  Axes: x along
    the chord, y along the contact normal; moments are taken about the
    base-side endpoint.  Returns (sum_Fx, sum_Fy, sum_M); a stable
    segment has all three at zero.  With a free tip (T2 = 0) and no
    bending moments the moment residual is -dF * R * sin(dphi/2), which
    cannot vanish under any contact force: the zero-rigidity open loop is
    unstable.
    """
    if R <= 0:
        raise DomainError(f"R must be > 0, got {R}")
    if not 0 < dphi < math.pi:
        raise DomainError(f"dphi must lie in (0, pi), got {dphi}")
    half = dphi / 2.0
    sum_fx = (T2 - T1) * math.cos(half)
    sum_fy = (T1 + T2) * math.sin(half) - dF
    sum_m = MR1 - MR2 + (T2 * math.sin(half)) * (2.0 * R * math.sin(half)) - dF * (R * math.sin(half))
    return sum_fx, sum_fy, sum_m


def pressure_profile(eq: Equilibrium, scene: Scene, rod: RodModel) -> PressureProfile:
    """Convert nodal contact forces into a pressure-vs-angle profile.

    Line load is the nodal contact force over the node's tributary rest
    length; pressure divides by the rod's out-of-plane width.  Samples
    cover every node, ordered by polar angle about the solved object
    center, with zeros off the contact arc.
    """
    if not eq.converged:
        raise DomainError("pressure_profile requires a converged equilibrium")
    tributary = eq.diagnostics.get("tributary_length")
    if tributary is None:
        raise DomainError("equilibrium lacks tributary lengths; re-run the solve")
    force = np.linalg.norm(eq.contact_force, axis=1)
    line_load = force / tributary
    pressure = line_load / rod.width
    rel = eq.node_positions - eq.object_center[None, :]
    angle = np.arctan2(rel[:, 1], rel[:, 0])
    order = np.argsort(angle, kind="stable")
    return PressureProfile(
        angle=angle[order],
        pressure=pressure[order],
        line_load=line_load[order],
        node_index=order,
        contact=force[order] > 0.0,
    )


def contact_arc(profile: PressureProfile) -> float:
    """Angular extent [rad] of the contact set, measured on the circle.

    Computed as the full circle minus the largest angular gap between
    consecutive contact samples, which is robust to the branch cut.
    """
    angles = np.sort(profile.angle[profile.contact])
    if angles.size == 0:
        return 0.0
    if angles.size == 1:
        return 0.0
    gaps = np.diff(angles)
    wrap_gap = 2 * math.pi - (angles[-1] - angles[0])
    return float(2 * math.pi - max(gaps.max(), wrap_gap))


@dataclass
class SweepEntry:
    """One member of a flexural-rigidity sweep."""

    stiffness: float
    profile: PressureProfile | None
    peak_pressure: float
    contact_arc: float
    converged: bool
    equilibrium: Equilibrium
    rod: RodModel


def sweep_rigidity(
    rod_template: RodModel,
    scene: Scene,
    stiffness_values,
    *,
    section_thickness: float = 0.005,
    params: SolverParams | None = None,
    density_scaling: bool = False,
) -> list[SweepEntry]:
    """Solve the closed-loop scene across a Young's-modulus sweep.

    Each swept modulus E maps to a bending stiffness through a fixed
    rectangular cross-section, EI = E * width * t^3 / 12 with
    t = ``section_thickness``; the axial stiffness is held at the
    template value so the sweep isolates flexural rigidity (the membrane
    stays effectively inextensible at every member).  With
    ``density_scaling`` the rod linear density scales with E relative to
    the first member.  Members solve independently; a non-converged
    member is flagged and the sweep continues.
    """
    values = [float(v) for v in stiffness_values]
    if any(v <= 0 for v in values):
        raise DomainError("stiffness values must be > 0")
    if sorted(values) != values:
        raise DomainError("stiffness_values must be sorted ascending")
    second_moment = rod_template.width * section_thickness**3 / 12.0
    entries = []
    for E in values:
        density = rod_template.linear_density
        if density_scaling and values[0] > 0:
            density = rod_template.linear_density * (E / values[0])
        rod = RodModel(
            n_nodes=rod_template.n_nodes,
            rest_length=rod_template.rest_length,
            axial_stiffness=rod_template.axial_stiffness,
            bending_stiffness=E * second_moment,
            linear_density=density,
            width=rod_template.width,
        )
        eq = solve_closed_loop(rod, scene, params)
        if eq.converged:
            profile = pressure_profile(eq, scene, rod)
            entry = SweepEntry(
                stiffness=E,
                profile=profile,
                peak_pressure=profile.peak_pressure,
                contact_arc=contact_arc(profile),
                converged=True,
                equilibrium=eq,
                rod=rod,
            )
        else:
            log.warning("sweep member E=%.3e Pa did not converge; flagged", E)
            entry = SweepEntry(
                stiffness=E,
                profile=None,
                peak_pressure=float("nan"),
                contact_arc=float("nan"),
                converged=False,
                equilibrium=eq,
                rod=rod,
            )
        entries.append(entry)
    return entries
