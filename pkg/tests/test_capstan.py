"""Capstan and wave-clamp load capacity tests.

The independent oracle for the clamp chain is the per-curve recursion:
each curve's hold force is the previous curve's load capacity, so the
chain is a product of single-curve amplifications.
"""

from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from loopgrasp.capstan import (
    CapstanWrap,
    ClampSpec,
    capstan_amplify,
    clamp_capacity,
    clamp_capacity_nonuniform,
)
from loopgrasp.errors import DomainError

KGF = 9.80665


def chain_recursion(mu, hold, angles):
    """Per-curve amplification oracle: iterate T <- T * e^(mu * theta)."""
    T = hold
    for theta in angles:
        T = T * math.exp(mu * theta)
    return T


class TestCapstanAmplify:
    def test_base_fastening_published_value(self):
        # 27.2 kgf held at mu=0.2 over 16 rad -> 667.3 kgf
        load = capstan_amplify(CapstanWrap(27.2, 0.2, 16.0))
        assert load == pytest.approx(667.3, rel=1e-3)

    def test_zero_wrap_angle_is_identity(self):
        assert capstan_amplify(CapstanWrap(123.4, 0.7, 0.0)) == 123.4

    def test_full_turn_half_friction(self):
        # 100 N * e^pi
        load = capstan_amplify(CapstanWrap(100.0, 0.5, 2 * math.pi))
        assert load == pytest.approx(100.0 * math.exp(math.pi), rel=1e-15)
        assert load == pytest.approx(2314.07, rel=1e-5)

    @pytest.mark.parametrize("bad", [
        dict(hold_force=-1.0, mu=0.2, wrap_angle=1.0),
        dict(hold_force=1.0, mu=-0.2, wrap_angle=1.0),
        dict(hold_force=1.0, mu=0.2, wrap_angle=-1.0),
    ])
    def test_negative_inputs_rejected(self, bad):
        with pytest.raises(DomainError):
            CapstanWrap(**bad)

    @given(
        hold=st.floats(0.1, 1e4),
        mu=st.floats(0.01, 1.5),
        theta=st.floats(0.0, 20.0),
        k=st.floats(0.1, 50.0),
    )
    def test_unit_scaling_is_pure(self, hold, mu, theta, k):
        # expressing the force in another unit scales the output by exactly
        # the conversion constant
        a = capstan_amplify(CapstanWrap(hold, mu, theta))
        b = capstan_amplify(CapstanWrap(hold * k, mu, theta))
        assert b == pytest.approx(a * k, rel=1e-12)

    @given(
        hold=st.floats(0.1, 1e4),
        mu=st.floats(0.01, 1.5),
        theta=st.floats(0.01, 20.0),
        bump=st.floats(0.01, 0.5),
    )
    def test_monotone_in_friction_and_angle(self, hold, mu, theta, bump):
        base = capstan_amplify(CapstanWrap(hold, mu, theta))
        assert capstan_amplify(CapstanWrap(hold, mu + bump, theta)) > base
        assert capstan_amplify(CapstanWrap(hold, mu, theta + bump)) > base
        assert capstan_amplify(CapstanWrap(hold * (1 + bump), mu, theta)) > base


class TestClampCapacity:
    def test_published_clamp_value(self):
        # mu=0.49, F=299.4 kgf, n=8 quarter-circle curves, phi = theta_c/2
        spec = ClampSpec.uniform(0.49, 299.4, 8, math.pi / 2)
        assert clamp_capacity(spec) == pytest.approx(149_574.0, rel=5e-3)

    def test_frictionless_clamp_holds_nothing(self):
        spec = ClampSpec.uniform(0.0, 500.0, 8, math.pi / 2)
        assert clamp_capacity(spec) == 0.0

    def test_uniform_matches_per_curve_recursion(self):
        spec = ClampSpec(0.3, 100.0, 3, math.pi / 3, math.pi / 6, math.pi / 6)
        oracle = chain_recursion(
            0.3, 0.3 * 100.0, [math.pi / 6] + [math.pi / 3] * 3 + [math.pi / 6]
        )
        assert clamp_capacity(spec) == pytest.approx(oracle, rel=1e-12)

    def test_theta_c_domain(self):
        with pytest.raises(DomainError):
            ClampSpec.uniform(0.3, 100.0, 3, 0.0)
        with pytest.raises(DomainError):
            ClampSpec.uniform(0.3, 100.0, 3, math.pi + 0.1)
        with pytest.raises(DomainError):
            ClampSpec(0.3, 100.0, -1, 1.0, 0.0, 0.0)

    def test_bare_bend_with_zero_curves(self):
        spec = ClampSpec(0.4, 50.0, 0, 1.0, 0.3, 0.2)
        assert clamp_capacity(spec) == pytest.approx(
            0.4 * 50.0 * math.exp(0.4 * 0.5), rel=1e-14
        )


class TestClampNonuniform:
    def test_uniform_reduction_bit_for_bit(self):
        theta = math.pi / 2
        spec = ClampSpec.uniform(0.49, 299.4, 8, theta)
        nonuniform = clamp_capacity_nonuniform(
            0.49, 299.4, [theta] * 8, theta / 2, theta / 2
        )
        assert nonuniform == clamp_capacity(spec)

    def test_empty_curve_list_bare_friction(self):
        assert clamp_capacity_nonuniform(0.37, 200.0, [], 0.0, 0.0) == 0.37 * 200.0

    def test_mixed_angles_match_recursion(self):
        angles = [math.pi / 4, math.pi / 2, math.pi / 3]
        value = clamp_capacity_nonuniform(0.4, 50.0, angles, 0.0, 0.0)
        oracle = chain_recursion(0.4, 0.4 * 50.0, angles)
        assert value == pytest.approx(oracle, rel=1e-12)

    @given(
        mu=st.floats(0.01, 1.2),
        force=st.floats(0.1, 1e4),
        angles=st.lists(st.floats(0.0, math.pi), min_size=0, max_size=10),
        phi_h=st.floats(0.0, 1.5),
        phi_l=st.floats(0.0, 1.5),
    )
    def test_recursion_equivalence_property(self, mu, force, angles, phi_h, phi_l):
        value = clamp_capacity_nonuniform(mu, force, angles, phi_h, phi_l)
        oracle = chain_recursion(mu, mu * force, [phi_h] + angles + [phi_l])
        assert value == pytest.approx(oracle, rel=1e-12)

    @given(
        mu=st.floats(0.01, 1.2),
        force=st.floats(0.1, 1e4),
        a=st.lists(st.floats(0.0, math.pi), min_size=1, max_size=5),
        b=st.lists(st.floats(0.0, math.pi), min_size=1, max_size=5),
    )
    def test_composition_of_concatenated_chains(self, mu, force, a, b):
        # running chain B on the output of chain A equals the joined chain,
        # with the end bends applied once at each end
        joined = clamp_capacity_nonuniform(mu, force, a + b, 0.0, 0.0)
        stage_a = clamp_capacity_nonuniform(mu, force, a, 0.0, 0.0)
        staged = chain_recursion(mu, stage_a, b)
        assert staged == pytest.approx(joined, rel=1e-12)

    def test_negative_angle_rejected(self):
        with pytest.raises(DomainError):
            clamp_capacity_nonuniform(0.4, 50.0, [0.5, -0.1], 0.0, 0.0)
