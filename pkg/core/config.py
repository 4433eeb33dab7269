"""
Toolkit Configuration

Central configuration management.
Loads settings from environment variables; every default lives in one table.
"""
from dataclasses import dataclass, replace
import os
from dotenv import load_dotenv

load_dotenv()


ENV_PREFIX = "SPECTRAL_CASCADE_"


@dataclass(frozen=True)
class ToolkitConfig:
    """
    Spectral Cascade configuration container

    All tolerances, grid resolutions and budgets are managed here.
    Read from environment variables, defaults provided.
    """

    # Scalar dynamics
    scalar_tol: float = 1e-12
    max_iter: int = 10_000
    scalar_cycle_window: int = 8
    pole_tol: float = 1e-14

    # Schur-bound and peripheral grids
    schur_radial: int = 32
    schur_angular: int = 128
    schur_bound_slack: float = 1e-9
    fpp_angular: int = 256
    fpp_tol: float = 1e-9

    # Operator iteration
    operator_tol: float = 1e-10
    max_stages: int = 5000
    cycle_window: int = 8
    cycle_tol: float = 1e-10
    convergence_streak: int = 3
    divergence_bound: float = 1e6

    # Functional calculus
    cluster_radius: float = 1e-8
    gap_tol: float = 1e-6
    contour_nodes: int = 64
    contour_max_nodes: int = 4096
    quadrature_tol: float = 1e-10
    contour_retries: int = 4
    rank_tol: float = 1e-8

    # Norms and spectral diagnostics
    norm_iterations: int = 200
    norm_tol: float = 1e-10
    ritt_radial: int = 16
    ritt_angular: int = 64
    ritt_bound: float = 1e3
    power_overflow: float = 1e12

    # CLI
    out_dir: str = "./out"
    log_level: str = "INFO"
    workers: int = 1

    @classmethod
    def from_env(cls) -> "ToolkitConfig":
        """
        Load configuration from environment variables

        Returns:
            ToolkitConfig: configured instance
        """
        defaults = cls()
        return cls(
            operator_tol=float(os.getenv(f"{ENV_PREFIX}TOL", str(defaults.operator_tol))),
            max_stages=int(os.getenv(f"{ENV_PREFIX}MAX_STAGES", str(defaults.max_stages))),
            cycle_window=int(os.getenv(f"{ENV_PREFIX}CYCLE_WINDOW", str(defaults.cycle_window))),
            out_dir=os.getenv(f"{ENV_PREFIX}OUT", defaults.out_dir),
            log_level=os.getenv(f"{ENV_PREFIX}LOG_LEVEL", defaults.log_level).upper(),
            workers=max(1, int(os.getenv(f"{ENV_PREFIX}WORKERS", str(defaults.workers)))),
        )

    def with_overrides(self, **changes) -> "ToolkitConfig":
        """Copy with CLI overrides applied (None values are ignored)"""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def __str__(self) -> str:
        return (
            f"ToolkitConfig("
            f"tol={self.operator_tol:g}, "
            f"max_stages={self.max_stages}, "
            f"cycle_window={self.cycle_window}, "
            f"out={self.out_dir})"
        )


# Process-wide settings (defaults of every public operation)
settings = ToolkitConfig.from_env()
