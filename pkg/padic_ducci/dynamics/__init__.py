"""
Ducci dynamics

The classical four-number map and the p-adic Ducci operator under its norm
and linear iteration semantics, with exact orbit classification.
"""

from .orbit import (
    DucciInstance,
    IterationMode,
    OrbitLimits,
    OrbitReport,
    Outcome,
    classical_step,
    linear_step,
    norm_step,
    run_classical,
    run_orbit,
)

__all__ = [
    "DucciInstance",
    "IterationMode",
    "OrbitLimits",
    "OrbitReport",
    "Outcome",
    "classical_step",
    "linear_step",
    "norm_step",
    "run_classical",
    "run_orbit",
]
