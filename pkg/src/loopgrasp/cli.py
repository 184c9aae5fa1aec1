"""Command-line interface: config ingestion, dispatch, serialization.

Subcommands: capstan, clamp, capacity, simulate, sweep, topology.
Exit codes: 0 success, 1 domain/config error, 2 non-convergence.
A summary.json is always written to the output directory, including on
errors; CSVs and figures land next to it.  ``LOOPGRASP_LOG`` sets the
log level.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .capacity import system_capacity
from .capstan import capstan_amplify, clamp_capacity, clamp_capacity_nonuniform
from .config import (
    RunConfig,
    capstan_from_config,
    clamp_args_from_config,
    load_config,
    load_vertices,
    system_from_config,
)
from .elastica import (
    SolverParams,
    build_hook,
    build_sling,
    contact_arc,
    pressure_profile,
    solve_closed_loop,
    solve_open_loop_hold,
    sweep_rigidity,
)
from .errors import ConfigError, LoopGraspError
from .topology import Disk, MechanismPath, classify_grasp
from .units import format_force
from . import report

log = logging.getLogger("loopgrasp")

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_NO_CONVERGENCE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopgrasp",
        description="Load-capacity, contact, and topology analysis for loop-closure grasping",
    )
    parser.add_argument("--version", action="version", version=f"loopgrasp {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in (
        ("capstan", "single-wrap capstan load capacity"),
        ("clamp", "wave-patterned clamp chain load capacity"),
        ("capacity", "system-level limits and bottleneck"),
        ("simulate", "planar rod contact solve (closed loop or open-loop hold)"),
        ("sweep", "flexural-rigidity sweep of the closed-loop solve"),
        ("topology", "grasp topology classification"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="YAML config file")
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--units", choices=("N", "kgf"), default="N",
                       help="force unit for console output")
        p.add_argument("--tol", type=float, default=None,
                       help="relative solver tolerance override")
        p.add_argument("--nodes", type=int, default=None, help="rod node count override")
        p.add_argument("--ramp-steps", type=int, default=None, help="load ramp steps override")
        p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    return parser


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    out_dir = Path(args.out)
    try:
        cfg = load_config(args.config, args.subcommand)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        report.write_summary(out_dir, {
            "subcommand": args.subcommand,
            "status": "error",
            "errors": exc.problems,
            "version": __version__,
        })
        return EXIT_DOMAIN_ERROR
    cfg.out_dir = out_dir
    cfg.units = args.units
    cfg.plot = not args.no_plot
    _apply_overrides(cfg, args)
    return run(cfg)


def run(cfg: RunConfig) -> int:
    """Execute a validated run and write its artifacts."""
    handler = _HANDLERS[cfg.subcommand]
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    payload = {
        "subcommand": cfg.subcommand,
        "status": "ok",
        "errors": [],
        "config": cfg.raw,
        "version": __version__,
    }
    try:
        result, artifacts, code = handler(cfg)
    except LoopGraspError as exc:
        problems = exc.problems if isinstance(exc, ConfigError) else [str(exc)]
        payload["status"] = "error"
        payload["errors"] = problems
        path = report.write_summary(cfg.out_dir, payload)
        for problem in problems:
            print(f"error: {problem}", file=sys.stderr)
        print(f"summary written to {path}")
        return EXIT_DOMAIN_ERROR
    payload["result"] = result
    payload["artifacts"] = artifacts
    if code == EXIT_NO_CONVERGENCE:
        payload["status"] = "error"
        payload["errors"] = ["solve did not converge"]
    path = report.write_summary(cfg.out_dir, payload)
    print(f"summary written to {path}")
    return code


def _apply_overrides(cfg: RunConfig, args) -> None:
    if cfg.subcommand not in ("simulate", "sweep"):
        return
    if args.nodes is not None:
        cfg.parsed.setdefault("rod", {})["n_nodes"] = args.nodes
    if args.tol is not None:
        cfg.parsed.setdefault("solver", {})["tol"] = args.tol
    if args.ramp_steps is not None:
        cfg.parsed.setdefault("solver", {})["ramp_steps"] = args.ramp_steps


# ---------------------------------------------------------------------------
# subcommand handlers: return (result dict, artifacts dict, exit code)


def _run_capstan(cfg: RunConfig):
    wrap = capstan_from_config(cfg.parsed)
    load = capstan_amplify(wrap)
    print(f"capstan load capacity: {format_force(load, cfg.units)}")
    result = {
        "hold_force_N": wrap.hold_force,
        "mu": wrap.mu,
        "wrap_angle_rad": wrap.wrap_angle,
        "load_capacity_N": load,
        "load_capacity_kgf": load / 9.80665,
    }
    return result, {}, EXIT_OK


def _run_clamp(cfg: RunConfig):
    kind, value = clamp_args_from_config(cfg.parsed)
    if kind == "uniform":
        load = clamp_capacity(value)
        total_angle = value.total_wrap_angle
    else:
        load = clamp_capacity_nonuniform(**value)
        total_angle = value["phi_entry"] + sum(value["curve_angles"]) + value["phi_exit"]
    print(f"clamp load capacity: {format_force(load, cfg.units)}")
    result = {
        "kind": kind,
        "total_wrap_angle_rad": total_angle,
        "load_capacity_N": load,
        "load_capacity_kgf": load / 9.80665,
    }
    return result, {}, EXIT_OK


def _run_capacity(cfg: RunConfig):
    spec = system_from_config(cfg.parsed)
    rep = system_capacity(spec, wound_length=cfg.parsed.get("wound_length"))
    print(
        f"payload capacity: {format_force(rep.payload_capacity, cfg.units)} "
        f"(bottleneck: {', '.join(rep.bottleneck)})"
    )
    result = {
        "per_limit": rep.per_limit,
        "payload_capacity_N": rep.payload_capacity,
        "payload_capacity_kgf": rep.payload_capacity / 9.80665,
        "bottleneck": rep.bottleneck,
    }
    artifacts = {}
    if cfg.plot:
        fig = report.capacity_figure(rep, cfg.out_dir / "capacity.png")
        artifacts["figure"] = fig.name
    return result, artifacts, EXIT_OK


def _solver_params(cfg: RunConfig) -> SolverParams:
    s = cfg.parsed.get("solver", {})
    kwargs = {}
    if s.get("tol") is not None:
        kwargs["tol_rel"] = s["tol"]
    if s.get("ramp_steps") is not None:
        kwargs["ramp_steps"] = s["ramp_steps"]
    if s.get("max_iterations") is not None:
        kwargs["max_iterations"] = s["max_iterations"]
    if s.get("penalty_scale") is not None:
        kwargs["penalty_scale"] = s["penalty_scale"]
    return SolverParams(**kwargs)


def _build_closed_scene(cfg: RunConfig):
    rod_cfg = cfg.parsed["rod"]
    scene_cfg = cfg.parsed["scene"]
    return build_sling(
        n_nodes=rod_cfg["n_nodes"],
        loop_radius=scene_cfg["loop_radius"],
        object_radius=scene_cfg["object_radius"],
        load=scene_cfg["object_load"],
        axial_stiffness=rod_cfg["axial_stiffness"],
        bending_stiffness=rod_cfg["bending_stiffness"],
        linear_density=rod_cfg["linear_density"],
        width=rod_cfg["width"],
        gravity=scene_cfg["gravity"],
        object_mass=scene_cfg["object_mass"],
        rest_length=scene_cfg.get("rest_length"),
        neutral_radius=scene_cfg.get("neutral_radius"),
    )


def _run_simulate(cfg: RunConfig):
    params = _solver_params(cfg)
    if cfg.parsed["mode"] == "closed_loop":
        rod, scene = _build_closed_scene(cfg)
        eq = solve_closed_loop(rod, scene, params)
        result = {
            "mode": "closed_loop",
            "converged": eq.converged,
            "residual_norm_N": eq.residual_norm,
            "tolerance_N": eq.tolerance,
            "object_center_m": eq.object_center,
            "max_penetration_m": eq.diagnostics["max_penetration"],
        }
        artifacts = {}
        if eq.converged:
            profile = pressure_profile(eq, scene, rod)
            result["peak_pressure_Pa"] = profile.peak_pressure
            result["contact_arc_rad"] = contact_arc(profile)
            result["contact_nodes"] = int(eq.contact_mask.sum())
            csv_path = report.write_solve_csv(cfg.out_dir / "profile.csv", eq, rod, profile)
            artifacts["profile_csv"] = csv_path.name
            if cfg.plot:
                fig = report.solve_figure(eq, scene, rod, profile, cfg.out_dir / "solve.png")
                artifacts["figure"] = fig.name
            print(
                f"closed-loop solve converged; peak pressure "
                f"{profile.peak_pressure:.4g} Pa over {result['contact_arc_rad']:.3f} rad"
            )
        return result, artifacts, EXIT_OK if eq.converged else EXIT_NO_CONVERGENCE

    rod_cfg = cfg.parsed["rod"]
    scene_cfg = cfg.parsed["scene"]
    rod, scene = build_hook(
        n_nodes=rod_cfg["n_nodes"],
        object_distance=scene_cfg["object_distance"],
        object_radius=scene_cfg["object_radius"],
        pull=scene_cfg["pull_force"],
        pull_direction=scene_cfg["pull_direction"],
        tip_angle=scene_cfg["tip_angle"],
        axial_stiffness=rod_cfg["axial_stiffness"],
        bending_stiffness=rod_cfg["bending_stiffness"],
        linear_density=rod_cfg["linear_density"],
        width=rod_cfg["width"],
        gravity=scene_cfg["gravity"],
    )
    hold = solve_open_loop_hold(rod, scene, params)
    print(f"open-loop hold: {hold.outcome} ({hold.diagnostics.get('reason', 'clean hold')})")
    result = {
        "mode": "open_loop_hold",
        "outcome": hold.outcome,
        "reason": hold.diagnostics.get("reason", ""),
        "object_displacement_m": hold.diagnostics.get("object_displacement"),
    }
    artifacts = {}
    if hold.equilibrium is not None and hold.equilibrium.converged:
        profile = pressure_profile(hold.equilibrium, scene, rod)
        csv_path = report.write_solve_csv(
            cfg.out_dir / "profile.csv", hold.equilibrium, rod, profile
        )
        artifacts["profile_csv"] = csv_path.name
        if cfg.plot:
            fig = report.solve_figure(
                hold.equilibrium, scene, rod, profile, cfg.out_dir / "solve.png"
            )
            artifacts["figure"] = fig.name
    code = EXIT_OK if hold.outcome in ("holds", "escapes") else EXIT_NO_CONVERGENCE
    return result, artifacts, code


def _run_sweep(cfg: RunConfig):
    params = _solver_params(cfg)
    rod, scene = _build_closed_scene(cfg)
    sweep_cfg = cfg.parsed["sweep"]
    entries = sweep_rigidity(
        rod,
        scene,
        sweep_cfg["stiffness"],
        section_thickness=sweep_cfg["section_thickness"],
        params=params,
        density_scaling=sweep_cfg["density_scaling"],
    )
    artifacts = {}
    for i, entry in enumerate(entries):
        if entry.profile is None:
            continue
        csv_path = report.write_solve_csv(
            cfg.out_dir / f"profile_{i}.csv", entry.equilibrium, entry.rod, entry.profile
        )
        artifacts[f"profile_csv_{i}"] = csv_path.name
    summary_csv = report.write_sweep_csv(cfg.out_dir / "sweep_summary.csv", entries)
    artifacts["sweep_summary_csv"] = summary_csv.name
    if cfg.plot:
        fig = report.sweep_figure(entries, cfg.out_dir / "sweep.png")
        artifacts["figure"] = fig.name
    result = {
        "members": [
            {
                "stiffness_Pa": e.stiffness,
                "bending_stiffness_Nm2": e.rod.bending_stiffness,
                "peak_pressure_Pa": e.peak_pressure,
                "contact_arc_rad": e.contact_arc,
                "converged": e.converged,
            }
            for e in entries
        ],
    }
    all_ok = all(e.converged for e in entries)
    print(
        f"sweep finished: {sum(e.converged for e in entries)}/{len(entries)} members converged"
    )
    return result, artifacts, EXIT_OK if all_ok else EXIT_NO_CONVERGENCE


def _run_topology(cfg: RunConfig):
    path_cfg = cfg.parsed["path"]
    vertices = load_vertices(path_cfg, "vertices", cfg.config_dir)
    closure = None
    if path_cfg.get("ground_closure") is not None or path_cfg.get("ground_closure_csv"):
        closure = load_vertices(path_cfg, "ground_closure", cfg.config_dir)
    mech = MechanismPath(
        vertices=vertices,
        tip_grounded=path_cfg["tip_grounded"],
        base_grounded=path_cfg["base_grounded"],
        ground_closure=closure,
    )
    obj_cfg = cfg.parsed["object"]
    if obj_cfg["kind"] == "disk":
        obj = Disk(center=tuple(obj_cfg["center"]), radius=obj_cfg["radius"])
    else:
        obj = load_vertices(obj_cfg, "vertices", cfg.config_dir)
    topo = classify_grasp(mech, obj, seed=cfg.parsed["seed"])
    print(
        f"grasp topology: {topo.classification.value}"
        + (f" (winding {topo.winding})" if topo.winding is not None else "")
        + (f" (linking {topo.linking})" if topo.linking is not None else "")
    )
    result = {
        "classification": topo.classification.value,
        "winding": topo.winding,
        "linking": topo.linking,
    }
    return result, {}, EXIT_OK


_HANDLERS = {
    "capstan": _run_capstan,
    "clamp": _run_clamp,
    "capacity": _run_capacity,
    "simulate": _run_simulate,
    "sweep": _run_sweep,
    "topology": _run_topology,
}


def _configure_logging() -> None:
    level = os.environ.get("LOOPGRASP_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


if __name__ == "__main__":
    sys.exit(main())
