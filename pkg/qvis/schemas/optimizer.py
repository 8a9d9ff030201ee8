import math
from typing import List

from pydantic import BaseModel, Field, field_validator, model_validator

from qvis.core.config import settings


class OptimizerConfig(BaseModel):
    restarts: int = Field(default_factory=lambda: settings.OPTIMIZER_RESTARTS)
    max_iterations: int = Field(default_factory=lambda: settings.OPTIMIZER_MAX_ITERATIONS)
    f_tolerance: float = Field(default_factory=lambda: settings.OPTIMIZER_F_TOLERANCE)
    simplex_scale: float = Field(default_factory=lambda: settings.OPTIMIZER_SIMPLEX_SCALE)
    seed: int = Field(default_factory=lambda: settings.OPTIMIZER_SEED)
    # Thread pool size for restarts; results do not depend on it
    workers: int = Field(default_factory=lambda: settings.OPTIMIZER_WORKERS)
    # Simplex re-starts from the incumbent after each run
    polish_rounds: int = Field(default_factory=lambda: settings.OPTIMIZER_POLISH_ROUNDS)

    @field_validator("restarts", "max_iterations", "workers")
    @classmethod
    def must_be_positive_int(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @field_validator("f_tolerance", "simplex_scale")
    @classmethod
    def must_be_positive(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("must be positive")
        return value

    @field_validator("polish_rounds")
    @classmethod
    def must_be_non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError("must not be negative")
        return value

    class Config:
        frozen = True


class UnitaryParametrization(BaseModel):
    """Coefficients of H = sum_k theta_k G_k; the unitary is exp(iH).

    Generator order for dimension d: the d diagonal units E_jj, then for each
    pair j < k the symmetric E_jk + E_kj followed by the antisymmetric
    -i E_jk + i E_kj.
    """
    dimension: int
    params: List[float]

    @field_validator("dimension")
    @classmethod
    def supported_dimension(cls, value: int) -> int:
        if value not in (2, 4):
            raise ValueError("dimension must be 2 or 4")
        return value

    @field_validator("params")
    @classmethod
    def finite_params(cls, value: List[float]) -> List[float]:
        if not all(math.isfinite(p) for p in value):
            raise ValueError("params must be finite")
        return value

    @model_validator(mode="after")
    def params_match_dimension(self) -> "UnitaryParametrization":
        if len(self.params) != self.dimension ** 2:
            raise ValueError(
                f"dimension {self.dimension} needs {self.dimension ** 2} params, got {len(self.params)}"
            )
        return self

    @classmethod
    def zeros(cls, dimension: int) -> "UnitaryParametrization":
        return cls(dimension=dimension, params=[0.0] * dimension ** 2)


class OptimizationResult(BaseModel):
    value: float
    params_at_optimum: List[float]
    iterations_used: int
    restarts_agreeing: int = Field(ge=1)
    converged_restarts: int = 0
