"""Finite-difference checks of the discrete energy gradient and Hessian.

The solver's correctness hangs on these derivatives, so they are checked
against central differences on randomly perturbed configurations of both
canonical scenes, with and without bending.
"""

from __future__ import annotations

import numpy as np
import pytest

from loopgrasp.elastica import SolverParams, build_hook, build_sling
from loopgrasp.elastica.energy import DiscreteSystem


def _perturbed_state(system, rng, scale=0.01):
    z = system.initial_state()
    z += scale * rng.standard_normal(z.shape)
    z[system.fixed_dofs] = system.fixed_values
    return z


def _fd_gradient(system, z, lam, h=1e-7):
    g = np.zeros_like(z)
    for i in range(z.size):
        zp, zm = z.copy(), z.copy()
        zp[i] += h
        zm[i] -= h
        g[i] = (system.energy(zp, lam) - system.energy(zm, lam)) / (2 * h)
    return g


def _fd_hessian_column(system, z, lam, i, h=1e-7):
    zp, zm = z.copy(), z.copy()
    zp[i] += h
    zm[i] -= h
    return (system.gradient(zp, lam) - system.gradient(zm, lam)) / (2 * h)


def _scenarios():
    rod_s, scene_s = build_sling(n_nodes=16, load=40.0, bending_stiffness=0.0)
    rod_b, scene_b = build_sling(n_nodes=16, load=40.0, bending_stiffness=0.5)
    rod_h, scene_h = build_hook(n_nodes=14, pull=10.0, bending_stiffness=2.0)
    rod_n, scene_n = build_sling(n_nodes=16, load=40.0, bending_stiffness=0.5,
                                 neutral_radius=0.51)
    return {
        "sling_membrane": (rod_s, scene_s),
        "sling_bending": (rod_b, scene_b),
        "hook_bending": (rod_h, scene_h),
        "sling_neutral_radius": (rod_n, scene_n),
    }


@pytest.mark.parametrize("name", sorted(_scenarios()))
def test_gradient_matches_finite_differences(name):
    rod, scene = _scenarios()[name]
    system = DiscreteSystem(rod, scene, SolverParams())
    rng = np.random.default_rng(3)
    for lam in (0.3, 1.0):
        z = _perturbed_state(system, rng)
        g = system.gradient(z, lam)
        g_fd = _fd_gradient(system, z, lam)
        scale = max(np.abs(g_fd).max(), 1.0)
        assert np.abs(g - g_fd).max() / scale < 5e-6


@pytest.mark.parametrize("name", sorted(_scenarios()))
def test_hessian_matches_finite_differences(name):
    rod, scene = _scenarios()[name]
    system = DiscreteSystem(rod, scene, SolverParams())
    rng = np.random.default_rng(7)
    z = _perturbed_state(system, rng)
    H = system.hessian(z, 1.0)
    assert np.abs(H - H.T).max() < 1e-6 * max(np.abs(H).max(), 1.0)
    cols = rng.choice(z.size, size=12, replace=False)
    for i in cols:
        col_fd = _fd_hessian_column(system, z, 1.0, i)
        scale = max(np.abs(col_fd).max(), 1.0)
        assert np.abs(H[:, i] - col_fd).max() / scale < 5e-5


def test_contact_forces_outward_normal():
    rod, scene = build_sling(n_nodes=30, load=50.0)
    system = DiscreteSystem(rod, scene, SolverParams())
    rng = np.random.default_rng(11)
    z = _perturbed_state(system, rng, scale=0.002)
    z[system._object_slice] += np.array([0.0, -0.02])  # press into the rod
    f = system.contact_forces(z)
    X = system.positions(z)
    c = system.object_center(z)
    active = np.linalg.norm(f, axis=1) > 0
    assert active.any()
    n_hat = (X[active] - c) / np.linalg.norm(X[active] - c, axis=1)[:, None]
    f_hat = f[active] / np.linalg.norm(f[active], axis=1)[:, None]
    cross = n_hat[:, 0] * f_hat[:, 1] - n_hat[:, 1] * f_hat[:, 0]
    assert np.abs(cross).max() < 1e-10
    assert (np.einsum("ij,ij->i", n_hat, f_hat) > 0).all()
