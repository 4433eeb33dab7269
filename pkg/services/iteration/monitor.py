"""
Convergence Monitor

Stage-by-stage bookkeeping shared by every iteration scheme: Frobenius
deltas, the quiet streak, the cycle window and the divergence guard.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from core.numerics import frobenius
from schemas.reports import ConvergenceReport, IterationStatus
from services.iteration.config import IterationConfig

logger = logging.getLogger(__name__)


@dataclass
class ConvergenceMonitor:
    """
    Feed stage matrices with observe(); a report is returned once a
    stopping rule fires.

    Stage m is the matrix after m updates; trajectory[0] is the input.
    """

    config: IterationConfig
    trajectory: list = field(default_factory=list)
    history: list = field(default_factory=list)
    quiet: int = 0

    def start(self, initial: np.ndarray) -> Optional[ConvergenceReport]:
        self.trajectory = [np.array(initial, dtype=complex)]
        self.history = []
        self.quiet = 0
        return self._diverged(self.trajectory[0])

    @property
    def stage(self) -> int:
        return len(self.trajectory) - 1

    def observe(self, matrix: np.ndarray) -> Optional[ConvergenceReport]:
        matrix = np.array(matrix, dtype=complex)
        previous = self.trajectory[-1]
        self.trajectory.append(matrix)

        diverged = self._diverged(matrix)
        if diverged is not None:
            self.history.append(float("inf") if not np.all(np.isfinite(matrix)) else frobenius(matrix - previous))
            return diverged

        delta = frobenius(matrix - previous)
        self.history.append(delta)
        m = self.stage

        self.quiet = self.quiet + 1 if delta < self.config.tol else 0
        if self.quiet >= self.config.streak:
            first = m - self.config.streak
            logger.debug("converged: stable from stage %d (checked at %d)", first, m)
            return self._report(IterationStatus.CONVERGED, first, limit=matrix)

        if delta > 10 * self.config.cycle_tol:
            period = self._period(matrix)
            if period is not None:
                logger.debug("cycle of period %d detected at stage %d", period, m)
                return self._report(IterationStatus.CYCLE, m - period, period=period)

        if m >= self.config.max_stages:
            return self._report(IterationStatus.BUDGET_EXHAUSTED, m)
        return None

    def _period(self, matrix: np.ndarray) -> Optional[int]:
        m = self.stage
        for k in range(2, min(self.config.cycle_window, m) + 1):
            if frobenius(matrix - self.trajectory[m - k]) < self.config.cycle_tol:
                return k
        return None

    def _diverged(self, matrix: np.ndarray) -> Optional[ConvergenceReport]:
        if not np.all(np.isfinite(matrix)) or frobenius(matrix) > self.config.divergence_bound:
            logger.debug("divergence guard tripped at stage %d", self.stage)
            return self._report(IterationStatus.DIVERGED, self.stage)
        return None

    def _report(self, status: IterationStatus, stage: int, limit=None, period=None) -> ConvergenceReport:
        return ConvergenceReport(
            status=status,
            period=period,
            stage=max(stage, 0),
            limit=limit,
            residual_history=list(self.history),
            trajectory=list(self.trajectory),
        )
