"""Unit handling for config values and reports.

All internal computation is in SI (newtons, metres, radians, pascals).
Loads are reported both in newtons and kilogram-force; the conversion
constant is standard gravity, 1 kgf = 9.80665 N.

Config files must attach a unit to every physical quantity ("27.2 kgf",
"60.3 mm").  A bare number where a unit is required is rejected: the
source material mixes kgf, N, mm and m, and silent unit errors are the
main hazard this schema guards against.
"""

from __future__ import annotations

import re

from .errors import ConfigError

G_STANDARD = 9.80665  # m/s^2, exact by definition of kgf
N_PER_KGF = G_STANDARD

# Conversion factor to the SI base unit of each dimension.
_UNIT_TABLES: dict[str, dict[str, float]] = {
    "force": {"N": 1.0, "kN": 1e3, "MN": 1e6, "kgf": N_PER_KGF, "gf": N_PER_KGF * 1e-3},
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "km": 1e3},
    "angle": {"rad": 1.0, "deg": 3.141592653589793 / 180.0, "rev": 2 * 3.141592653589793},
    "torque": {"N*m": 1.0, "N·m": 1.0, "Nm": 1.0, "kgf*m": N_PER_KGF},
    "pressure": {"Pa": 1.0, "kPa": 1e3, "MPa": 1e6, "GPa": 1e9, "N/m^2": 1.0},
    "force_per_width": {"N/m": 1.0, "kN/m": 1e3, "N/mm": 1e3, "kN/mm": 1e6},
    "linear_density": {"kg/m": 1.0, "g/m": 1e-3},
    "mass": {"kg": 1.0, "g": 1e-3},
    "acceleration": {"m/s^2": 1.0, "m/s2": 1.0},
    "bending_stiffness": {"N*m^2": 1.0, "N·m^2": 1.0, "N*m2": 1.0},
}

_QUANTITY_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*(\S+)\s*$")


def to_kgf(newtons: float) -> float:
    return newtons / N_PER_KGF


def to_newtons(kgf: float) -> float:
    return kgf * N_PER_KGF


def parse_quantity(value, dimension: str, field: str = "value") -> float:
    """Parse a quantity string like ``"60.3 mm"`` into SI units.

    ``dimension`` selects the unit table; ``field`` names the config key in
    error messages.  Dimensionless fields must be plain numbers and should
    not come through here.
    """
    table = _UNIT_TABLES.get(dimension)
    if table is None:
        raise KeyError(f"unknown dimension {dimension!r}")
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise ConfigError([f"{field}: expected a quantity string with units, got {value!r}"])
    if isinstance(value, (int, float)):
        raise ConfigError(
            [f"{field}: physical quantities need explicit units, e.g. \"{value} {_example_unit(dimension)}\""]
        )
    m = _QUANTITY_RE.match(value)
    if m is None:
        raise ConfigError([f"{field}: cannot parse quantity {value!r}"])
    number, unit = m.groups()
    try:
        magnitude = float(number)
    except ValueError:
        raise ConfigError([f"{field}: bad number in {value!r}"]) from None
    if unit not in table:
        known = ", ".join(sorted(table))
        raise ConfigError([f"{field}: unknown {dimension} unit {unit!r} (known: {known})"])
    return magnitude * table[unit]


def _example_unit(dimension: str) -> str:
    return next(iter(_UNIT_TABLES[dimension]))


def format_force(newtons: float, units: str = "N") -> str:
    """Render a force for human-readable output in the preferred unit."""
    if units == "kgf":
        return f"{to_kgf(newtons):.4g} kgf"
    return f"{newtons:.4g} N"
