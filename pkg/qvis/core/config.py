from typing import Optional

from pydantic import model_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # App
    PROJECT_NAME: str = "qvis"
    LOG_LEVEL: str = "INFO"

    # Numerical tolerances (double precision, 4x4 problems)
    VALIDATION_TOLERANCE: float = 1e-10
    HERMITIAN_TOLERANCE: float = 1e-12
    SOLVER_TOLERANCE: float = 1e-12
    JACOBI_MAX_SWEEPS: int = 100

    # Largest deviation of ||amplitudes|| from 1 that is silently renormalized
    NORMALIZATION_TOLERANCE: float = 1e-6

    # Schmidt coefficients below this are treated as exactly zero
    SEPARABLE_CUTOFF: float = 1e-14

    # Agreement required between equivalent closed forms
    CROSS_CHECK_TOLERANCE: float = 1e-10
    CROSS_CHECK_TOLERANCE_STRICT: float = 1e-12

    # Optimizer defaults (OptimizerConfig reads these)
    OPTIMIZER_RESTARTS: int = 8
    OPTIMIZER_MAX_ITERATIONS: int = 2000
    OPTIMIZER_F_TOLERANCE: float = 1e-10
    OPTIMIZER_SIMPLEX_SCALE: float = 0.5
    OPTIMIZER_SEED: int = 0
    OPTIMIZER_WORKERS: int = 1
    OPTIMIZER_POLISH_ROUNDS: int = 3
    # Restarts within this distance of the best value count as agreeing
    OPTIMIZER_AGREEMENT_TOLERANCE: float = 1e-6

    # Sweep CSV
    CSV_SIGNIFICANT_DIGITS: int = 12

    # Optional default output directory for sweeps given as bare file names
    SWEEP_OUTPUT_DIR: Optional[str] = None

    @model_validator(mode="after")
    def check_tolerances(self) -> "Settings":
        for name in (
            "VALIDATION_TOLERANCE",
            "HERMITIAN_TOLERANCE",
            "SOLVER_TOLERANCE",
            "NORMALIZATION_TOLERANCE",
            "CROSS_CHECK_TOLERANCE",
            "CROSS_CHECK_TOLERANCE_STRICT",
            "OPTIMIZER_F_TOLERANCE",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.JACOBI_MAX_SWEEPS < 1:
            raise ValueError("JACOBI_MAX_SWEEPS must be at least 1")
        return self

    @property
    def csv_float_format(self) -> str:
        """printf-style format for sweep values."""
        return f"%.{self.CSV_SIGNIFICANT_DIGITS}g"

    class Config:
        env_file = ".env"
        env_prefix = "QVIS_"
        case_sensitive = True


settings = Settings()
