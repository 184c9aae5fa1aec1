"""Quantity parsing and unit conversion tests."""

from __future__ import annotations

import math

import pytest

from loopgrasp.errors import ConfigError
from loopgrasp.units import format_force, parse_quantity, to_kgf, to_newtons


@pytest.mark.parametrize("text,dimension,expected", [
    ("27.2 kgf", "force", 27.2 * 9.80665),
    ("1608.6 N", "force", 1608.6),
    ("1.31e4 N/mm", "force_per_width", 1.31e7),
    ("60.3 mm", "length", 0.0603),
    ("90 deg", "angle", math.pi / 2),
    ("16 rad", "angle", 16.0),
    ("0.97 N*m", "torque", 0.97),
    ("10 MPa", "pressure", 1e7),
    ("0.15mm", "length", 1.5e-4),
    ("9.80665 m/s^2", "acceleration", 9.80665),
    ("0.0203 kg/m", "linear_density", 0.0203),
    ("5 N*m^2", "bending_stiffness", 5.0),
])
def test_parse_known_quantities(text, dimension, expected):
    assert parse_quantity(text, dimension) == pytest.approx(expected, rel=1e-12)


def test_unitless_number_rejected():
    with pytest.raises(ConfigError, match="explicit units"):
        parse_quantity(27.2, "force", "hold_force")


def test_unknown_unit_rejected():
    with pytest.raises(ConfigError, match="unknown force unit"):
        parse_quantity("12 stone", "force")


def test_garbage_rejected():
    with pytest.raises(ConfigError):
        parse_quantity("fast", "force")
    with pytest.raises(ConfigError):
        parse_quantity([1, 2], "force")


def test_kgf_round_trip():
    assert to_kgf(to_newtons(27.2)) == pytest.approx(27.2, rel=1e-15)
    assert to_newtons(1.0) == 9.80665


def test_format_force():
    assert format_force(9.80665, "kgf") == "1 kgf"
    assert format_force(100.0, "N") == "100 N"
