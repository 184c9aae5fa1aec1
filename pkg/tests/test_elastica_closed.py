"""Closed-loop solve: membrane limit, balance, symmetry, refinement.

The membrane-limit oracle is analytic: a frictionless zero-rigidity
string wrapping a circle carries uniform tension T, and the contact line
load on the interior of the arc is q = T / R (the mu = 0 capstan normal
load), so the pressure is T / (width * R).
"""

from __future__ import annotations

import numpy as np
import pytest

from loopgrasp.elastica import (
    FixedBothEnds,
    RodModel,
    Scene,
    SolverParams,
    build_sling,
    contact_arc,
    pressure_profile,
    solve_closed_loop,
)
from loopgrasp.errors import DomainError


@pytest.fixture(scope="module")
def membrane_solution():
    rod, scene = build_sling(n_nodes=200, load=100.0, bending_stiffness=0.0)
    eq = solve_closed_loop(rod, scene)
    return rod, scene, eq


def interior_contact_nodes(mask, margin=3):
    idx = np.flatnonzero(mask)
    return [
        i for i in idx
        if i - margin >= 0 and i + margin < len(mask) and mask[i - margin:i + margin + 1].all()
    ]


class TestMembraneLimit:
    def test_converges_within_tolerance(self, membrane_solution):
        _, _, eq = membrane_solution
        assert eq.converged
        assert eq.residual_norm < eq.tolerance
        assert eq.diagnostics["penetration_ok"]

    def test_tension_uniform_along_contact_arc(self, membrane_solution):
        _, _, eq = membrane_solution
        mask = eq.contact_mask
        contact_elems = mask[:-1] & mask[1:]
        T = eq.axial_tension[contact_elems]
        assert (T.max() - T.min()) / T.mean() < 0.01

    def test_interior_pressure_matches_capstan_oracle(self, membrane_solution):
        rod, scene, eq = membrane_solution
        mask = eq.contact_mask
        T = eq.axial_tension[mask[:-1] & mask[1:]].mean()
        oracle = T / (rod.width * scene.object_radius)
        interior = interior_contact_nodes(mask)
        assert len(interior) > 50
        force = np.linalg.norm(eq.contact_force, axis=1)
        pressure = force[interior] / eq.diagnostics["tributary_length"][interior] / rod.width
        assert np.abs(pressure - oracle).max() / oracle < 0.02

    def test_global_vertical_balance(self, membrane_solution):
        _, scene, eq = membrane_solution
        total = np.linalg.norm(scene.object_force_total)
        lift = -eq.contact_force[:, 1].sum()  # reaction on the object is -f
        assert abs(lift - (-scene.object_force_total[1])) / total < 0.005

    def test_contact_forces_frictionless(self, membrane_solution):
        _, _, eq = membrane_solution
        mask = eq.contact_mask
        rel = eq.node_positions[mask] - eq.object_center
        n_hat = rel / np.linalg.norm(rel, axis=1)[:, None]
        f = eq.contact_force[mask]
        f_hat = f / np.linalg.norm(f, axis=1)[:, None]
        cross = n_hat[:, 0] * f_hat[:, 1] - n_hat[:, 1] * f_hat[:, 0]
        assert np.abs(cross).max() < 1e-10

    def test_profile_symmetric_about_vertical_axis(self, membrane_solution):
        _, _, eq = membrane_solution
        force = np.linalg.norm(eq.contact_force, axis=1)
        q = force / eq.diagnostics["tributary_length"]
        assert np.abs(q - q[::-1]).max() / q.max() < 1e-6
        assert abs(eq.object_center[0]) < 1e-9


class TestPressureProfile:
    def test_samples_ordered_and_zero_off_arc(self, membrane_solution):
        rod, scene, eq = membrane_solution
        profile = pressure_profile(eq, scene, rod)
        assert (np.diff(profile.angle) >= 0).all()
        assert profile.pressure[~profile.contact].max(initial=0.0) == 0.0
        assert profile.pressure[profile.contact].min() > 0.0
        assert profile.peak_pressure > 0

    def test_contact_arc_measure(self, membrane_solution):
        rod, scene, eq = membrane_solution
        profile = pressure_profile(eq, scene, rod)
        arc = contact_arc(profile)
        assert 2.0 < arc < 3.0  # the taut-wrap geometry gives ~2.47 rad

    def test_no_contact_gives_empty_profile(self):
        # straight taut rod pinned far away from the object, nothing loaded
        n = 20
        X0 = np.column_stack([np.linspace(0, 1, n), np.zeros(n)])
        rod = RodModel(n, 1.0, 1e4, 0.0, 0.0, 0.1)
        scene = Scene(
            object_center=np.array([0.5, 2.0]),
            object_radius=0.5,
            gravity=np.zeros(2),
            boundary=FixedBothEnds((0.0, 0.0), (1.0, 0.0)),
            initial_positions=X0,
        )
        eq = solve_closed_loop(rod, scene)
        assert eq.converged
        profile = pressure_profile(eq, scene, rod)
        assert not profile.contact.any()
        assert profile.pressure.max(initial=0.0) == 0.0

    def test_requires_converged_equilibrium(self, membrane_solution):
        rod, scene, eq = membrane_solution
        bad = type(eq)(
            node_positions=eq.node_positions,
            axial_tension=eq.axial_tension,
            contact_force=eq.contact_force,
            converged=False,
            residual_norm=1.0,
            object_center=eq.object_center,
            tolerance=eq.tolerance,
            diagnostics=eq.diagnostics,
        )
        with pytest.raises(DomainError):
            pressure_profile(bad, scene, rod)


class TestMeshRefinement:
    def test_membrane_peak_stable_under_refinement(self):
        # In the membrane limit the pressure profile is a genuine function,
        # so the discrete peak converges with the mesh.  (At finite EI the
        # touch-down force is a concentrated point load and the discrete
        # peak grows as the tributary length shrinks.)
        peaks = []
        for n in (100, 200, 400):
            rod, scene = build_sling(n_nodes=n, load=100.0, bending_stiffness=0.0)
            eq = solve_closed_loop(rod, scene)
            assert eq.converged
            peaks.append(pressure_profile(eq, scene, rod).peak_pressure)
        assert abs(peaks[2] - peaks[1]) / peaks[2] < 0.05
        assert abs(peaks[1] - peaks[0]) / peaks[1] < 0.05


class TestSceneVariants:
    def test_pretensioned_loop_falls_back_to_semicircle_start(self):
        # rest length shorter than the semicircular arc: the taut-wrap
        # construction has no sag solution and the builder starts from the
        # touching semicircle with uniform pre-strain
        rod, scene = build_sling(n_nodes=100, load=50.0, rest_length=1.50)
        assert rod.rest_length == 1.50
        eq = solve_closed_loop(rod, scene)
        assert eq.converged
        assert eq.contact_mask.any()
        assert eq.axial_tension.min() > 0  # pre-tension everywhere

    def test_neutral_radius_mode_converges(self):
        rod, scene = build_sling(
            n_nodes=100, load=50.0, bending_stiffness=0.05, neutral_radius=0.51
        )
        assert scene.rest_curvature == pytest.approx(1.0 / 0.51)
        eq = solve_closed_loop(rod, scene)
        assert eq.converged


class TestBoundaryHandling:
    def test_requires_fixed_both_ends(self):
        from loopgrasp.elastica import build_hook

        rod, scene = build_hook(n_nodes=20)
        with pytest.raises(DomainError):
            solve_closed_loop(rod, scene)

    def test_non_convergence_is_flagged_not_silent(self):
        rod, scene = build_sling(n_nodes=50, load=100.0)
        params = SolverParams(max_iterations=2, ramp_steps=2)
        eq = solve_closed_loop(rod, scene, params)
        assert not eq.converged
        assert eq.residual_norm > eq.tolerance
        assert "increments" in eq.diagnostics
