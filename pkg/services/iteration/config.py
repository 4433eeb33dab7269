"""
Iteration Configuration

Mode selection and stopping rules for one operator iteration run.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from core.config import settings
from core.errors import ParamOutOfRangeError, SingularConjugatorError

CONJUGATOR_MAX_CONDITION = 1e8


class IterationMode(str, Enum):
    """Operator-level iteration schemes"""
    FUNCTION = "function"
    POWER = "power"
    CESARO = "cesaro"
    CONJUGATION = "conjugation"


@dataclass(frozen=True, eq=False)
class IterationConfig:
    """
    Stopping rules of an iteration run

    Attributes:
        mode: iteration scheme
        tol: Frobenius delta threshold
        max_stages: stage budget (Cesaro: largest averaging length is 2^min(max_stages, 40))
        cycle_window: longest period searched for
        conjugator: S for the conjugation scheme X -> S X S^-1
    """

    mode: IterationMode = IterationMode.FUNCTION
    tol: float = settings.operator_tol
    max_stages: int = settings.max_stages
    cycle_window: int = settings.cycle_window
    cycle_tol: float = settings.cycle_tol
    streak: int = settings.convergence_streak
    divergence_bound: float = settings.divergence_bound
    conjugator: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.tol <= 0:
            raise ParamOutOfRangeError(f"tol must be positive, got {self.tol}")
        if self.cycle_window < 2:
            raise ParamOutOfRangeError(f"cycle_window must be >= 2, got {self.cycle_window}")
        if self.max_stages < 1:
            raise ParamOutOfRangeError(f"max_stages must be >= 1, got {self.max_stages}")
        object.__setattr__(self, "mode", IterationMode(self.mode))

        if self.conjugator is not None:
            S = np.asarray(self.conjugator, dtype=complex)
            if S.ndim != 2 or S.shape[0] != S.shape[1]:
                raise SingularConjugatorError(f"conjugator must be square, got shape {S.shape}")
            condition = np.linalg.cond(S)
            if not np.isfinite(condition) or condition >= CONJUGATOR_MAX_CONDITION:
                raise SingularConjugatorError(
                    f"conjugator condition number {condition:.3e} is too large",
                    condition=condition,
                )
            object.__setattr__(self, "conjugator", S)
