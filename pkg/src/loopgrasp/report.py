"""Result serialization: deterministic JSON summaries, CSVs, and figures.

Summaries carry no timestamps and are serialized with sorted keys, so an
identical config produces byte-identical output.  CSV floats use a fixed
%.10g format for the same reason.  Figures are rendered alongside the
delimited output with the Agg backend.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .capacity import CapacityReport
from .units import to_kgf

__all__ = [
    "sanitize",
    "write_summary",
    "write_solve_csv",
    "write_sweep_csv",
    "capacity_figure",
    "solve_figure",
    "sweep_figure",
]

_FLOAT_FMT = "%.10g"


def sanitize(obj):
    """Recursively convert numpy scalars/arrays for JSON serialization."""
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return sanitize(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def write_summary(out_dir: Path, payload: dict) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "summary.json"
    text = json.dumps(sanitize(payload), indent=2, sort_keys=True) + "\n"
    path.write_text(text)
    return path


def _write_csv(path: Path, header: list[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [_FLOAT_FMT % v if isinstance(v, (float, np.floating)) else v for v in row]
            )
    return path


def write_solve_csv(path: Path, eq, rod, profile) -> Path:
    """Per-node solve output: geometry, tension, contact line load, pressure."""
    n = len(eq.node_positions)
    seg = np.linalg.norm(np.diff(eq.node_positions, axis=0), axis=1)
    arc = np.concatenate([[0.0], np.cumsum(seg)])
    tension_node = np.empty(n)
    tension_node[0] = eq.axial_tension[0]
    tension_node[-1] = eq.axial_tension[-1]
    tension_node[1:-1] = 0.5 * (eq.axial_tension[:-1] + eq.axial_tension[1:])
    line_load = np.zeros(n)
    pressure = np.zeros(n)
    line_load[profile.node_index] = profile.line_load
    pressure[profile.node_index] = profile.pressure
    rows = [
        (
            i,
            arc[i],
            eq.node_positions[i, 0],
            eq.node_positions[i, 1],
            tension_node[i],
            line_load[i],
            pressure[i],
        )
        for i in range(n)
    ]
    return _write_csv(
        path,
        ["node_index", "arc_length_m", "x_m", "y_m", "tension_N",
         "contact_line_load_N_per_m", "pressure_Pa"],
        rows,
    )


def write_sweep_csv(path: Path, entries) -> Path:
    rows = [(e.stiffness, e.peak_pressure, e.contact_arc) for e in entries]
    return _write_csv(path, ["stiffness_Pa", "peak_pressure_Pa", "contact_arc_rad"], rows)


def capacity_figure(report: CapacityReport, path: Path) -> Path:
    names = list(report.per_limit)
    values = [to_kgf(report.per_limit[n]) for n in names]
    colors = ["#c44" if n in report.bottleneck else "#46a" for n in names]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(names, values, color=colors)
    ax.set_yscale("log")
    ax.set_ylabel("strand limit [kgf]")
    ax.set_title(
        f"payload {to_kgf(report.payload_capacity):.1f} kgf "
        f"(bottleneck: {', '.join(report.bottleneck)})"
    )
    ax.tick_params(axis="x", rotation=20)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def solve_figure(eq, scene, rod, profile, path: Path) -> Path:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))
    X = eq.node_positions
    ax1.plot(X[:, 0], X[:, 1], "-", lw=1.2, color="#333", label="rod")
    contact = eq.contact_mask
    if contact.any():
        ax1.plot(X[contact, 0], X[contact, 1], ".", ms=3, color="#c44", label="contact")
    circle = plt.Circle(eq.object_center, scene.object_radius, fill=False, color="#46a")
    ax1.add_patch(circle)
    ax1.set_aspect("equal")
    ax1.set_xlabel("x [m]")
    ax1.set_ylabel("y [m]")
    ax1.legend(loc="upper right", fontsize=8)
    ax1.set_title("equilibrium configuration")

    ax2.plot(profile.angle, profile.pressure, "-", lw=1.0, color="#46a")
    ax2.set_xlabel("angle on object [rad]")
    ax2.set_ylabel("contact pressure [Pa]")
    ax2.set_title("pressure distribution")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def sweep_figure(entries, path: Path) -> Path:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))
    ok = [e for e in entries if e.converged]
    ax1.loglog([e.stiffness for e in ok], [e.peak_pressure for e in ok], "o-", color="#46a")
    ax1.set_xlabel("Young's modulus [Pa]")
    ax1.set_ylabel("peak pressure [Pa]")
    ax1.set_title("peak touch-down pressure vs stiffness")

    cmap = plt.colormaps["viridis"]
    for i, e in enumerate(ok):
        mask = e.profile.contact
        ax2.plot(
            e.profile.angle[mask],
            e.profile.pressure[mask],
            "-",
            color=cmap(i / max(len(ok) - 1, 1)),
            label=f"E = {e.stiffness:.3g} Pa",
        )
    ax2.set_xlabel("angle on object [rad]")
    ax2.set_ylabel("pressure [Pa]")
    ax2.legend(fontsize=7)
    ax2.set_title("pressure profiles")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
