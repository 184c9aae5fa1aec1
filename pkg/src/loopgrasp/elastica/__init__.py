"""Planar quasi-static rod contact simulation."""

from .analysis import (
    SweepEntry,
    contact_arc,
    pressure_profile,
    segment_balance,
    sweep_rigidity,
)
from .model import (
    Equilibrium,
    FixedBaseFreeTip,
    FixedBothEnds,
    HoldResult,
    PressureProfile,
    RodModel,
    Scene,
    SolverParams,
)
from .scenes import build_hook, build_sling
from .solver import solve_closed_loop, solve_open_loop_hold

__all__ = [
    "RodModel",
    "Scene",
    "SolverParams",
    "Equilibrium",
    "PressureProfile",
    "HoldResult",
    "FixedBothEnds",
    "FixedBaseFreeTip",
    "solve_closed_loop",
    "solve_open_loop_hold",
    "segment_balance",
    "pressure_profile",
    "contact_arc",
    "sweep_rigidity",
    "SweepEntry",
    "build_sling",
    "build_hook",
]
