"""Quasi-static equilibrium solves with load ramping.

Each ramp increment minimizes the total potential energy with a modified
Newton method: the free-DOF Hessian is factorized with a Cholesky
decomposition, adding a diagonal shift when it is not positive definite
(EI = 0 rods and opening contact sets make indefinite or singular
Hessians routine), and steps are globalized with Armijo backtracking on
the energy.  Convergence is declared on the norm of the free-DOF
gradient.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from ..errors import DomainError
from .energy import DiscreteSystem
from .model import (
    Equilibrium,
    FixedBaseFreeTip,
    FixedBothEnds,
    HoldResult,
    RodModel,
    Scene,
    SolverParams,
)

__all__ = ["solve_closed_loop", "solve_open_loop_hold"]

log = logging.getLogger("loopgrasp.elastica")

_ARMIJO_C1 = 1e-4
_MIN_STEP = 1e-14


def _newton_increment(system: DiscreteSystem, z: np.ndarray, lam: float, stop_early=None):
    """Minimize at fixed load factor.  Returns (z, info dict)."""
    params = system.params
    free = system.free_dofs
    tol = system.tolerance
    max_step = params.max_step_factor * system.object_radius
    energy = system.energy(z, lam)
    residual = np.inf
    status = "max_iterations"
    iterations = 0

    for iterations in range(1, params.max_iterations + 1):
        g = system.gradient(z, lam)
        gf = g[free]
        residual = float(np.linalg.norm(gf))
        if residual <= tol:
            status = "converged"
            iterations -= 1
            break
        if stop_early is not None and stop_early(z):
            status = "stopped_early"
            iterations -= 1
            break

        H = system.hessian(z, lam)
        Hf = H[np.ix_(free, free)]
        step = _solve_direction(Hf, gf)
        slope = float(gf @ step)
        if not np.isfinite(slope) or slope >= 0:
            step = -gf
            slope = -float(gf @ gf)
        # Cap the step so it cannot tunnel through the penalty barrier.
        biggest = float(np.abs(step).max())
        if biggest > max_step:
            step = step * (max_step / biggest)
            slope = float(gf @ step)

        if -slope <= 1e-12 * max(abs(energy), 1.0):
            # The predicted decrease is below the energy's float resolution,
            # so a line search cannot measure progress.  Take the full step:
            # this is Newton's local phase and one step collapses the
            # residual to the gradient noise floor.
            z = z.copy()
            z[free] += step
            energy = system.energy(z, lam)
            continue

        alpha = 1.0
        while True:
            z_try = z.copy()
            z_try[free] += alpha * step
            e_try = system.energy(z_try, lam)
            if np.isfinite(e_try) and e_try <= energy + _ARMIJO_C1 * alpha * slope:
                z, energy = z_try, e_try
                break
            alpha *= 0.5
            if alpha < _MIN_STEP:
                status = "line_search_stalled"
                break
        if status == "line_search_stalled":
            break

    if status != "converged":
        g = system.gradient(z, lam)
        residual = float(np.linalg.norm(g[free]))
        if residual <= tol:
            status = "converged"
    return z, {
        "status": status,
        "converged": status == "converged",
        "iterations": iterations,
        "residual": residual,
        "energy": energy,
    }


def _solve_direction(Hf: np.ndarray, gf: np.ndarray) -> np.ndarray:
    """Newton direction with a diagonal shift fallback for non-PD Hessians."""
    scale = max(float(np.abs(np.diag(Hf)).max()), 1.0)
    shift = 0.0
    for _ in range(30):
        try:
            A = Hf if shift == 0.0 else Hf + shift * np.eye(Hf.shape[0])
            factor = cho_factor(A, lower=True, check_finite=False)
            return -cho_solve(factor, gf, check_finite=False)
        except LinAlgError:
            shift = max(shift * 10.0, 1e-10 * scale)
    return -gf


def _ramp(system: DiscreteSystem, on_increment=None, stop_early=None):
    """Run the load ramp; returns (z, increment record list)."""
    params = system.params
    z = system.initial_state()
    records = []
    for k in range(1, params.ramp_steps + 1):
        lam = k / params.ramp_steps
        z, info = _newton_increment(system, z, lam, stop_early=stop_early)
        info["lambda"] = lam
        info["contact_nodes"] = system.contact_count(z)
        records.append(info)
        if on_increment is not None and on_increment(z, info):
            break
    return z, records


def _equilibrium_from_state(system: DiscreteSystem, z: np.ndarray, records, warn=True) -> Equilibrium:
    final = records[-1]
    converged = all(r["converged"] for r in records)
    max_pen = system.max_penetration(z)
    if warn and max_pen > system.penetration_tol:
        log.warning(
            "max penetration %.3e exceeds tolerance %.3e", max_pen, system.penetration_tol
        )
    if warn and not converged:
        bad = [r["lambda"] for r in records if not r["converged"]]
        log.warning(
            "solve did not converge at load factors %s (final residual %.3e, tol %.3e)",
            bad, final["residual"], system.tolerance,
        )
    return Equilibrium(
        node_positions=system.positions(z).copy(),
        axial_tension=system.axial_tension(z),
        contact_force=system.contact_forces(z),
        converged=converged,
        residual_norm=final["residual"],
        object_center=system.object_center(z).copy(),
        tolerance=system.tolerance,
        diagnostics={
            "increments": records,
            "max_penetration": max_pen,
            "penetration_tol": system.penetration_tol,
            "penetration_ok": max_pen <= system.penetration_tol,
            "tributary_length": system.voronoi.copy(),
            "characteristic_force": system.characteristic_force,
        },
    )


def solve_closed_loop(rod: RodModel, scene: Scene, params: SolverParams | None = None) -> Equilibrium:
    """Equilibrium of a closed loop (both ends fixed) around the object.

    Loads ramp linearly over ``params.ramp_steps`` increments.  A
    non-converged result is returned flagged, never silently.
    """
    if not isinstance(scene.boundary, FixedBothEnds):
        raise DomainError("solve_closed_loop requires a FixedBothEnds boundary")
    params = params or SolverParams()
    system = DiscreteSystem(rod, scene, params)
    z, records = _ramp(system)
    return _equilibrium_from_state(system, z, records)


def solve_open_loop_hold(rod: RodModel, scene: Scene, params: SolverParams | None = None) -> HoldResult:
    """Ramp a pull on an object hooked by an open-loop (free-tip) rod.

    Escape is declared when the contact set stays empty for three
    consecutive ramp increments, or when the tip crosses the plane
    through the object center normal to the pull direction (the hook no
    longer reaches behind the object).  A terminal state that is neither
    a clean hold nor a detected escape (contact lost only on the final
    increments, or a non-converged step with contact still present) is
    reported as inconclusive.
    """
    if not isinstance(scene.boundary, FixedBaseFreeTip):
        raise DomainError("solve_open_loop_hold requires a FixedBaseFreeTip boundary")
    params = params or SolverParams()
    system = DiscreteSystem(rod, scene, params)

    pull = np.linalg.norm(scene.pull_force)
    u_pull = scene.pull_force / pull if pull > 0 else None
    c0 = scene.object_center
    escape_radius = params.escape_displacement_factor * scene.object_radius

    def tip_side(z):
        tip = system.positions(z)[-1]
        c = system.object_center(z)
        return float((tip - c) @ u_pull) if u_pull is not None else np.inf

    def runaway(z):
        return float(np.linalg.norm(system.object_center(z) - c0)) > escape_radius

    def stop_early(z):
        # Bail out of a hopeless increment: the object has already left the
        # hook.  The official escape criteria are evaluated per increment.
        return runaway(z) or (system.contact_count(z) == 0 and tip_side(z) < 0.0)

    empty_streak = 0
    escape_reason = None

    def on_increment(z, info):
        nonlocal empty_streak, escape_reason
        if info["contact_nodes"] == 0:
            empty_streak += 1
        else:
            empty_streak = 0
        tip_passed = u_pull is not None and tip_side(z) <= 0.0
        if empty_streak >= 3:
            escape_reason = "contact lost for 3 consecutive ramp increments"
        elif tip_passed:
            escape_reason = "tip passed the object-center plane on the pull side"
        elif runaway(z):
            escape_reason = (
                f"object displaced beyond {params.escape_displacement_factor:g} radii"
            )
        return escape_reason is not None

    z, records = _ramp(system, on_increment=on_increment, stop_early=stop_early)
    eq = _equilibrium_from_state(system, z, records, warn=escape_reason is None)
    diag = {
        "increments": records,
        "empty_streak": empty_streak,
        "object_displacement": float(np.linalg.norm(system.object_center(z) - c0)),
        "tip_side": tip_side(z),
    }

    if escape_reason is not None:
        diag["reason"] = escape_reason
        return HoldResult("escapes", None, diag)

    all_converged = all(r["converged"] for r in records)
    final_contact = records[-1]["contact_nodes"] > 0
    if all_converged and (pull == 0 or final_contact):
        return HoldResult("holds", eq, diag)

    if all_converged and not final_contact:
        diag["reason"] = "contact lost on the final increments without a full escape"
    else:
        diag["reason"] = "non-converged increment with contact still present"
    return HoldResult("inconclusive", eq, diag)
