"""Mechanics and topology of loop-closure grasping.

Capstan-friction load capacities, system bottleneck analysis, a planar
quasi-static rod contact solver, and topological grasp classification.
"""

from .capacity import (
    CapacityReport,
    MembraneSpec,
    SystemSpec,
    WinchSpec,
    membrane_capacity,
    spool_radius,
    system_capacity,
    winch_pull_force,
)
from .capstan import (
    CapstanWrap,
    ClampSpec,
    capstan_amplify,
    clamp_capacity,
    clamp_capacity_nonuniform,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    GeometryError,
    LoopGraspError,
    PrecisionError,
)

__version__ = "0.1.0"
