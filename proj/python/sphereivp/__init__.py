"""Geometric integrators for initial value problems on the unit sphere.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._core import (
    AntipodalError,
    Field,
    IntegrationError,
    NewtonDivergenceError,
    StepTooLargeError,
    Trajectory,
    default_start,
    exp_map,
    geodesic_midpoint,
    hamiltonian_trace,
    integrate,
    make_field,
    make_problem,
    methods,
    problems,
    project,
    slerp,
    step,
)

__all__ = [
    "AntipodalError",
    "Field",
    "IntegrationError",
    "NewtonDivergenceError",
    "StepTooLargeError",
    "Trajectory",
    "default_start",
    "exp_map",
    "geodesic_midpoint",
    "hamiltonian_trace",
    "integrate",
    "make_field",
    "make_problem",
    "methods",
    "problems",
    "project",
    "slerp",
    "step",
]
