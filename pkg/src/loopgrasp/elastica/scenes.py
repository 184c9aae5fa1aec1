"""Scene builders for the two canonical grasp-holding studies.

``build_sling`` sets up the closed-loop study: a rod hung between two
fixed anchors as a semicircular loop with a rigid circle resting in it
and a downward load ramped onto the circle.  Defaults follow the
reference geometry (0.5 m loop, 0.45 m object).

``build_hook`` sets up the open-loop study: a rod clamped at its base,
reaching over the object and hooking down behind its far side, with a
pull force dragging the object away from the base.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from .model import FixedBaseFreeTip, FixedBothEnds, RodModel, Scene

__all__ = ["build_sling", "build_hook"]

# Nylon ripstop fabric values: 119.7 mm flattened width, 170 g/m^2.
DEFAULT_WIDTH = 0.1197
DEFAULT_LINEAR_DENSITY = 0.0203
DEFAULT_EA = 7.5e4


def _taut_wrap_depth(a: float, R: float, length: float) -> tuple[float, float] | None:
    """Sink depth d of a circle of radius R hanging in an inextensible
    string of the given length anchored at (+-a, 0).

    The taut path is tangent line + contact arc + tangent line; its length
    grows monotonically with d, so bisection recovers d.  Returns
    (d, tangent-point polar angle) or None when the string is too short
    to sag below the touching position (pre-tensioned loop).
    """

    def geometry(d):
        dist = math.hypot(a, d)
        alpha = math.acos(R / dist)
        beta = math.atan2(d, -a)  # polar angle of the (-a, 0) anchor about the center
        theta_a = beta + alpha    # left tangent point, below the horizontal
        arc = 3 * math.pi - 2 * theta_a
        tangent = math.sqrt(dist * dist - R * R)
        return 2 * tangent + R * arc, theta_a

    lo = a - R
    if geometry(lo)[0] >= length:
        return None
    hi = lo + 2 * a
    while geometry(hi)[0] < length:
        hi += 2 * a
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if geometry(mid)[0] < length:
            lo = mid
        else:
            hi = mid
    d = 0.5 * (lo + hi)
    return d, geometry(d)[1]


def _wrapped_sling_path(a: float, R: float, d: float, theta_a: float, n: int) -> np.ndarray:
    """Node positions along tangent line, contact arc, tangent line."""
    center = np.array([0.0, -d])
    p_a = center + R * np.array([math.cos(theta_a), math.sin(theta_a)])
    anchor = np.array([-a, 0.0])
    tangent = float(np.linalg.norm(p_a - anchor))
    arc = 3 * math.pi - 2 * theta_a
    total = 2 * tangent + R * arc
    s = np.linspace(0.0, total, n)
    X = np.empty((n, 2))
    for i, si in enumerate(s):
        if si <= tangent:
            X[i] = anchor + (si / tangent) * (p_a - anchor)
        elif si <= tangent + R * arc:
            theta = theta_a + (si - tangent) / R
            X[i] = center + R * np.array([math.cos(theta), math.sin(theta)])
        else:
            frac = (si - tangent - R * arc) / tangent
            p_b = center + R * np.array(
                [math.cos(theta_a + arc), math.sin(theta_a + arc)]
            )
            X[i] = p_b + frac * (np.array([a, 0.0]) - p_b)
    return X


def build_sling(
    n_nodes: int = 200,
    *,
    loop_radius: float = 0.5,
    object_radius: float = 0.45,
    load: float = 100.0,
    axial_stiffness: float = DEFAULT_EA,
    bending_stiffness: float = 0.0,
    linear_density: float = DEFAULT_LINEAR_DENSITY,
    width: float = DEFAULT_WIDTH,
    gravity: float = 9.80665,
    object_mass: float = 0.0,
    rest_length: float | None = None,
    neutral_radius: float | None = None,
) -> tuple[RodModel, Scene]:
    """Closed-loop sling around a circular object.

    The rod is the lower semicircle of ``loop_radius`` between anchors at
    (+-loop_radius, 0); its rest length defaults to that semicircular arc
    and its stress-free curvature to 1/``loop_radius`` (override with
    ``neutral_radius``).  ``load`` newtons are ramped straight down onto
    the object.  The initial guess handed to the solver is the analytic
    taut-wrap configuration (tangent lines plus contact arc at matching
    length), which removes the large sink-and-wrap rearrangement from the
    first ramp increment.
    """
    if loop_radius <= object_radius:
        raise DomainError("loop_radius must exceed object_radius")
    a, R = loop_radius, object_radius
    if rest_length is None:
        rest_length = math.pi * a

    taut = _taut_wrap_depth(a, R, rest_length)
    if taut is None:
        # Pre-tensioned loop: fall back to the semicircle, object touching.
        t = np.linspace(math.pi, 2 * math.pi, n_nodes)
        X0 = np.column_stack([a * np.cos(t), a * np.sin(t)])
        center0 = np.array([0.0, -(a - R)])
    else:
        d, theta_a = taut
        X0 = _wrapped_sling_path(a, R, d, theta_a, n_nodes)
        center0 = np.array([0.0, -d])

    rod = RodModel(
        n_nodes=n_nodes,
        rest_length=rest_length,
        axial_stiffness=axial_stiffness,
        bending_stiffness=bending_stiffness,
        linear_density=linear_density,
        width=width,
    )
    scene = Scene(
        object_center=center0,
        object_radius=R,
        gravity=np.array([0.0, -abs(gravity)]),
        boundary=FixedBothEnds(start=(-a, 0.0), end=(a, 0.0)),
        initial_positions=X0,
        object_load=np.array([0.0, -abs(load)]),
        object_mass=object_mass,
        rest_curvature=1.0 / (neutral_radius if neutral_radius is not None else a),
    )
    return rod, scene


def build_hook(
    n_nodes: int = 150,
    *,
    object_distance: float = 1.0,
    object_radius: float = 0.2,
    pull: float = 30.0,
    pull_direction: tuple[float, float] = (1.0, 0.0),
    tip_angle: float = -math.pi / 3,
    axial_stiffness: float = DEFAULT_EA,
    bending_stiffness: float = 0.0,
    linear_density: float = 0.0,
    width: float = DEFAULT_WIDTH,
    gravity: float = 0.0,
    object_mass: float = 0.0,
) -> tuple[RodModel, Scene]:
    """Open-loop hook behind a circular object, pulled quasi-statically.

    The rod runs from a clamped base at the origin, straight to the upper
    tangent point of the object (centered at ``(object_distance, 0)``),
    then wraps the far side of the circle down to the polar angle
    ``tip_angle``.  The wrap covers the pull side, so the initial state
    hooks the object against a pull along ``pull_direction`` (default
    +x, away from the base).
    """
    d = object_distance
    R = object_radius
    if d <= R:
        raise DomainError("object must lie outside the base (object_distance > object_radius)")
    center = np.array([d, 0.0])
    alpha = math.acos(R / d)
    theta_t = math.pi - alpha  # polar angle of the upper tangent point
    if tip_angle >= theta_t:
        raise DomainError("tip_angle must be below the tangent-point angle")
    tangent_point = center + R * np.array([math.cos(theta_t), math.sin(theta_t)])
    lead_in = float(np.linalg.norm(tangent_point))
    sweep = theta_t - tip_angle
    total = lead_in + R * sweep

    s = np.linspace(0.0, total, n_nodes)
    X0 = np.empty((n_nodes, 2))
    on_lead = s <= lead_in
    frac = s[on_lead] / lead_in
    X0[on_lead] = frac[:, None] * tangent_point[None, :]
    theta = theta_t - (s[~on_lead] - lead_in) / R
    X0[~on_lead] = center + R * np.column_stack([np.cos(theta), np.sin(theta)])

    rod = RodModel(
        n_nodes=n_nodes,
        rest_length=float(np.linalg.norm(np.diff(X0, axis=0), axis=1).sum()),
        axial_stiffness=axial_stiffness,
        bending_stiffness=bending_stiffness,
        linear_density=linear_density,
        width=width,
    )
    u = np.asarray(pull_direction, dtype=float)
    norm = np.linalg.norm(u)
    if norm == 0 and pull > 0:
        raise DomainError("pull_direction must be nonzero when pull > 0")
    scene = Scene(
        object_center=center,
        object_radius=R,
        gravity=np.array([0.0, -abs(gravity)]),
        boundary=FixedBaseFreeTip(position=(0.0, 0.0)),
        initial_positions=X0,
        pull_force=(pull / norm) * u if pull > 0 else np.zeros(2),
        object_mass=object_mass,
        rest_curvature="initial",
    )
    return rod, scene
