"""Config loading and strict schema validation for the CLI.

Configs are YAML with explicit units on every physical quantity
("0.0603 m", "27.2 kgf").  Validation is strict both ways: unknown keys
are rejected, and all problems are collected into one ConfigError rather
than failing on the first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .capacity import MembraneSpec, SystemSpec, WinchSpec
from .capstan import CapstanWrap, ClampSpec
from .errors import ConfigError
from .units import parse_quantity

__all__ = ["RunConfig", "load_config", "SUBCOMMANDS"]

SUBCOMMANDS = ("capstan", "clamp", "capacity", "simulate", "sweep", "topology")


@dataclass(frozen=True)
class Field:
    kind: str  # quantity | number | integer | boolean | string | vector | quantity_list | section | vertex_list
    dimension: str | None = None
    required: bool = False
    default: Any = None
    choices: tuple | None = None
    schema: dict | None = None
    length: int | None = None


def _winch_schema() -> dict:
    return {
        "stall_torque": Field("quantity", "torque", required=True),
        "gear_ratio": Field("number", required=True),
        "core_radius": Field("quantity", "length", required=True),
        "max_radius": Field("quantity", "length", required=True),
        "material_thickness": Field("quantity", "length", required=True),
    }


def _capstan_schema() -> dict:
    return {
        "hold_force": Field("quantity", "force", required=True),
        "mu": Field("number", required=True),
        "wrap_angle": Field("quantity", "angle", required=True),
    }


def _clamp_schema() -> dict:
    return {
        "mu": Field("number", required=True),
        "clamp_force": Field("quantity", "force", required=True),
        "n_curves": Field("integer"),
        "theta_c": Field("quantity", "angle"),
        "phi_entry": Field("quantity", "angle"),
        "phi_exit": Field("quantity", "angle"),
        "curve_angles": Field("quantity_list", "angle"),
    }


def _membrane_schema() -> dict:
    return {
        "strength_per_width": Field("quantity", "force_per_width"),
        "yield_stress": Field("quantity", "pressure"),
        "thickness": Field("quantity", "length"),
        "flattened_width": Field("quantity", "length", required=True),
        "load_layers": Field("integer", required=True),
    }


def _rod_schema() -> dict:
    return {
        "n_nodes": Field("integer", default=200),
        "axial_stiffness": Field("quantity", "force", default=7.5e4),
        "bending_stiffness": Field("quantity", "bending_stiffness", default=0.0),
        "linear_density": Field("quantity", "linear_density", default=0.0203),
        "width": Field("quantity", "length", default=0.1197),
    }


def _solver_schema() -> dict:
    return {
        "tol": Field("number"),
        "ramp_steps": Field("integer"),
        "max_iterations": Field("integer"),
        "penalty_scale": Field("number"),
    }


def _closed_scene_schema() -> dict:
    return {
        "loop_radius": Field("quantity", "length", default=0.5),
        "object_radius": Field("quantity", "length", default=0.45),
        "object_load": Field("quantity", "force", default=100.0),
        "object_mass": Field("quantity", "mass", default=0.0),
        "gravity": Field("quantity", "acceleration", default=9.80665),
        "rest_length": Field("quantity", "length"),
        "neutral_radius": Field("quantity", "length"),
    }


def _open_scene_schema() -> dict:
    return {
        "object_distance": Field("quantity", "length", default=1.0),
        "object_radius": Field("quantity", "length", default=0.2),
        "pull_force": Field("quantity", "force", default=30.0),
        "pull_direction": Field("vector", length=2, default=(1.0, 0.0)),
        "tip_angle": Field("quantity", "angle", default=-math.pi / 3),
        "gravity": Field("quantity", "acceleration", default=0.0),
    }


SCHEMAS: dict[str, dict] = {
    "capstan": _capstan_schema(),
    "clamp": _clamp_schema(),
    "capacity": {
        "strands_per_loop": Field("integer", default=2),
        "wound_length": Field("quantity", "length"),
        "membrane": Field("section", schema=_membrane_schema(), required=True),
        "base_fastening": Field("section", schema=_capstan_schema(), required=True),
        "base_winch": Field("section", schema=_winch_schema(), required=True),
        "tip_clamp": Field("section", schema=_clamp_schema(), required=True),
        "tip_winch": Field("section", schema=_winch_schema(), required=True),
    },
    "simulate": {
        "mode": Field("string", required=True, choices=("closed_loop", "open_loop_hold")),
        "rod": Field("section", schema=_rod_schema(), default={}),
        "scene": Field("raw", default={}),  # schema chosen by mode, validated second
        "solver": Field("section", schema=_solver_schema(), default={}),
    },
    "sweep": {
        "rod": Field("section", schema=_rod_schema(), default={}),
        "scene": Field("section", schema=_closed_scene_schema(), default={}),
        "solver": Field("section", schema=_solver_schema(), default={}),
        "sweep": Field(
            "section",
            required=True,
            schema={
                "stiffness": Field("quantity_list", "pressure", required=True),
                "section_thickness": Field("quantity", "length", default=0.005),
                "density_scaling": Field("boolean", default=False),
            },
        ),
    },
    "topology": {
        "path": Field(
            "section",
            required=True,
            schema={
                "vertices": Field("vertex_list"),
                "vertices_csv": Field("string"),
                "tip_grounded": Field("boolean", required=True),
                "base_grounded": Field("boolean", default=True),
                "ground_closure": Field("vertex_list"),
                "ground_closure_csv": Field("string"),
            },
        ),
        "object": Field(
            "section",
            required=True,
            schema={
                "kind": Field("string", required=True, choices=("disk", "polygon", "loop")),
                "center": Field("vector", length=2),
                "radius": Field("quantity", "length"),
                "vertices": Field("vertex_list"),
                "vertices_csv": Field("string"),
            },
        ),
        "seed": Field("integer", default=0),
    },
}


@dataclass
class RunConfig:
    """A validated run: the subcommand, parsed SI values, and raw echo."""

    subcommand: str
    parsed: dict
    raw: dict
    config_dir: Path
    out_dir: Path = field(default_factory=lambda: Path("out"))
    units: str = "N"
    plot: bool = True


def load_config(path: str | Path, subcommand: str) -> RunConfig:
    """Load and fully validate a config file for a subcommand.

    All validation problems are collected and raised together.
    """
    if subcommand not in SUBCOMMANDS:
        raise ConfigError([f"unknown subcommand {subcommand!r}"])
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError([f"cannot read config file {path}: {exc}"]) from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError([f"invalid YAML in {path}: {exc}"]) from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError([f"config root must be a mapping, got {type(raw).__name__}"])

    problems: list[str] = []
    parsed = _validate_section(raw, SCHEMAS[subcommand], "", problems)
    if subcommand == "simulate" and parsed.get("mode") in ("closed_loop", "open_loop_hold"):
        scene_schema = (
            _closed_scene_schema() if parsed["mode"] == "closed_loop" else _open_scene_schema()
        )
        parsed["scene"] = _validate_section(raw.get("scene", {}), scene_schema, "scene", problems)
    if not problems:
        _cross_validate(subcommand, parsed, problems)
    if problems:
        raise ConfigError(problems)
    return RunConfig(subcommand=subcommand, parsed=parsed, raw=raw, config_dir=path.parent)


def _validate_section(data: Any, schema: dict, prefix: str, problems: list[str]) -> dict:
    if data is None:
        data = {}
    if not isinstance(data, dict):
        problems.append(f"{prefix or 'config'}: expected a mapping")
        return {}
    out: dict = {}
    for key in data:
        if key not in schema:
            problems.append(f"{_join(prefix, key)}: unknown key")
    for key, spec in schema.items():
        label = _join(prefix, key)
        if key not in data:
            if spec.required:
                problems.append(f"{label}: missing required key")
            elif spec.kind == "section" and spec.schema is not None and spec.default is not None:
                out[key] = _validate_section({}, spec.schema, label, problems)
            else:
                out[key] = spec.default
            continue
        out[key] = _validate_value(data[key], spec, label, problems)
    return out


def _validate_value(value: Any, spec: Field, label: str, problems: list[str]) -> Any:
    try:
        if spec.kind == "quantity":
            return parse_quantity(value, spec.dimension, label)
        if spec.kind == "quantity_list":
            if not isinstance(value, list):
                raise ConfigError([f"{label}: expected a list of quantities"])
            return [parse_quantity(v, spec.dimension, f"{label}[{i}]") for i, v in enumerate(value)]
        if spec.kind == "number":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError([f"{label}: expected a number, got {value!r}"])
            return float(value)
        if spec.kind == "integer":
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError([f"{label}: expected an integer, got {value!r}"])
            return value
        if spec.kind == "boolean":
            if not isinstance(value, bool):
                raise ConfigError([f"{label}: expected true/false, got {value!r}"])
            return value
        if spec.kind == "string":
            if not isinstance(value, str):
                raise ConfigError([f"{label}: expected a string, got {value!r}"])
            if spec.choices and value not in spec.choices:
                raise ConfigError([f"{label}: must be one of {spec.choices}, got {value!r}"])
            return value
        if spec.kind == "vector":
            if (
                not isinstance(value, list)
                or (spec.length is not None and len(value) != spec.length)
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
            ):
                raise ConfigError([f"{label}: expected a list of {spec.length} numbers"])
            return tuple(float(v) for v in value)
        if spec.kind == "vertex_list":
            arr = np.asarray(value, dtype=float)
            if arr.ndim != 2 or arr.shape[1] not in (2, 3):
                raise ConfigError([f"{label}: expected rows of [x, y] or [x, y, z] (metres)"])
            return arr
        if spec.kind == "section":
            return _validate_section(value, spec.schema or {}, label, problems)
        if spec.kind == "raw":
            if value is not None and not isinstance(value, dict):
                raise ConfigError([f"{label}: expected a mapping"])
            return value or {}
    except ConfigError as exc:
        problems.extend(exc.problems)
        return None
    except (TypeError, ValueError) as exc:
        problems.append(f"{label}: {exc}")
        return None
    raise AssertionError(f"unhandled field kind {spec.kind}")


def _cross_validate(subcommand: str, parsed: dict, problems: list[str]) -> None:
    if subcommand == "clamp":
        _check_clamp(parsed, "", problems)
    elif subcommand == "capacity":
        _check_clamp(parsed["tip_clamp"], "tip_clamp.", problems)
        _check_membrane(parsed["membrane"], problems)
    elif subcommand == "topology":
        p = parsed["path"]
        if (p["vertices"] is None) == (p["vertices_csv"] is None):
            problems.append("path: give exactly one of vertices, vertices_csv")
        obj = parsed["object"]
        if obj["kind"] == "disk":
            if obj["center"] is None or obj["radius"] is None:
                problems.append("object: disk needs center and radius")
        elif (obj["vertices"] is None) == (obj["vertices_csv"] is None):
            problems.append("object: give exactly one of vertices, vertices_csv")


def _check_clamp(clamp: dict, prefix: str, problems: list[str]) -> None:
    uniform = clamp.get("n_curves") is not None or clamp.get("theta_c") is not None
    nonuniform = clamp.get("curve_angles") is not None
    if uniform and nonuniform:
        problems.append(f"{prefix}n_curves/theta_c and curve_angles are mutually exclusive")
    elif uniform and (clamp.get("n_curves") is None or clamp.get("theta_c") is None):
        problems.append(f"{prefix}uniform clamp needs both n_curves and theta_c")
    elif not uniform and not nonuniform:
        problems.append(f"{prefix}give n_curves+theta_c or curve_angles")


def _check_membrane(mem: dict, problems: list[str]) -> None:
    direct = mem.get("strength_per_width") is not None
    stress = mem.get("yield_stress") is not None and mem.get("thickness") is not None
    partial = (mem.get("yield_stress") is None) != (mem.get("thickness") is None)
    if direct and (stress or partial):
        problems.append("membrane: strength_per_width and yield_stress/thickness are mutually exclusive")
    elif not direct and not stress:
        problems.append("membrane: need strength_per_width or yield_stress+thickness")


# ---------------------------------------------------------------------------
# converting parsed configs to domain objects


def capstan_from_config(parsed: dict) -> CapstanWrap:
    return CapstanWrap(
        hold_force=parsed["hold_force"], mu=parsed["mu"], wrap_angle=parsed["wrap_angle"]
    )


def clamp_args_from_config(parsed: dict):
    """Return ("uniform", ClampSpec) or ("nonuniform", kwargs)."""
    if parsed.get("curve_angles") is not None:
        return "nonuniform", {
            "mu": parsed["mu"],
            "clamp_force": parsed["clamp_force"],
            "curve_angles": parsed["curve_angles"],
            "phi_entry": parsed.get("phi_entry") or 0.0,
            "phi_exit": parsed.get("phi_exit") or 0.0,
        }
    theta_c = parsed["theta_c"]
    phi_entry = parsed.get("phi_entry")
    phi_exit = parsed.get("phi_exit")
    return "uniform", ClampSpec(
        mu=parsed["mu"],
        clamp_force=parsed["clamp_force"],
        n_curves=parsed["n_curves"],
        theta_c=theta_c,
        phi_entry=theta_c / 2.0 if phi_entry is None else phi_entry,
        phi_exit=theta_c / 2.0 if phi_exit is None else phi_exit,
    )


def clamp_spec_from_config(parsed: dict) -> ClampSpec:
    kind, value = clamp_args_from_config(parsed)
    if kind != "uniform":
        raise ConfigError(["tip_clamp: the system model needs a uniform clamp (n_curves + theta_c)"])
    return value


def membrane_from_config(parsed: dict) -> MembraneSpec:
    return MembraneSpec(
        flattened_width=parsed["flattened_width"],
        load_layers=parsed["load_layers"],
        strength_per_width=parsed.get("strength_per_width"),
        yield_stress=parsed.get("yield_stress"),
        thickness=parsed.get("thickness"),
    )


def winch_from_config(parsed: dict) -> WinchSpec:
    return WinchSpec(
        stall_torque=parsed["stall_torque"],
        gear_ratio=parsed["gear_ratio"],
        core_radius=parsed["core_radius"],
        max_radius=parsed["max_radius"],
        material_thickness=parsed["material_thickness"],
    )


def system_from_config(parsed: dict) -> SystemSpec:
    return SystemSpec(
        membrane=membrane_from_config(parsed["membrane"]),
        base_fastening=capstan_from_config(parsed["base_fastening"]),
        base_winch=winch_from_config(parsed["base_winch"]),
        tip_clamp=clamp_spec_from_config(parsed["tip_clamp"]),
        tip_winch=winch_from_config(parsed["tip_winch"]),
        strands_per_loop=parsed["strands_per_loop"],
    )


def load_vertices(section: dict, key: str, config_dir: Path) -> np.ndarray:
    """Inline vertex list or CSV file (x,y[,z] per row, metres)."""
    if section.get(key) is not None:
        return section[key]
    csv_path = Path(section[f"{key}_csv"])
    if not csv_path.is_absolute():
        csv_path = config_dir / csv_path
    try:
        arr = np.loadtxt(csv_path, delimiter=",", ndmin=2)
    except OSError as exc:
        raise ConfigError([f"cannot read vertex CSV {csv_path}: {exc}"]) from exc
    except ValueError as exc:
        raise ConfigError([f"bad vertex CSV {csv_path}: {exc}"]) from exc
    if arr.shape[1] not in (2, 3):
        raise ConfigError([f"{csv_path}: expected 2 or 3 columns, got {arr.shape[1]}"])
    return arr


def _join(prefix: str, key: str) -> str:
    return f"{prefix}.{key}" if prefix else key
