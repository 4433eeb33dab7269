"""
Iteration Engine Package

Operator-level iterations and the checks run on their limits.

Components:
- IterationConfig / IterationMode: stopping rules and scheme selection
- ConvergenceMonitor: deltas, quiet streak, cycle window, divergence guard
- engine: function iteration, powers, Cesaro means, conjugation
- subspaces: fixed spaces and their intersections
- checks: limit properties, stabilization, Riesz product identity, boundary separation
"""

from services.iteration.config import IterationConfig, IterationMode
from services.iteration.monitor import ConvergenceMonitor
from services.iteration.engine import (
    cesaro_projection,
    conjugation_cycle,
    hold_unit,
    hold_unit_dense,
    iterate_operator,
    power_limit,
)
from services.iteration.subspaces import angle_between, fixed_space, joint_fixed_space, range_space
from services.iteration.checks import (
    boundary_separation_check,
    check_limit_properties,
    riesz_product_identity,
    stage_omega_check,
)

__all__ = [
    # Config
    'IterationConfig',
    'IterationMode',
    'ConvergenceMonitor',

    # Engine
    'iterate_operator',
    'power_limit',
    'cesaro_projection',
    'conjugation_cycle',
    'hold_unit',
    'hold_unit_dense',

    # Subspaces
    'fixed_space',
    'joint_fixed_space',
    'range_space',
    'angle_between',

    # Checks
    'check_limit_properties',
    'stage_omega_check',
    'riesz_product_identity',
    'boundary_separation_check',
]
