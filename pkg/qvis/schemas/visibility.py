from enum import Enum
from typing import Optional

from pydantic import BaseModel, model_validator

_RANGE_SLACK = 1e-12
_RESIDUAL_SLACK = 1e-9


class VisibilityMethod(str, Enum):
    CLOSED_FORM = "closed_form"
    NUMERIC = "numeric"


class VisibilityReport(BaseModel):
    """One- and two-body visibilities of a state.

    Residuals are value minus bound: residual_tilde = v1^2 + w12_tilde^2 - 1 is
    nonnegative and residual_w = v1^2 + w12^2 - 1 is nonpositive. Closed-form
    reports are validated against both signs; numeric ones carry optimizer noise
    and are not.
    """
    v1: float
    v12: float
    w12_tilde: float
    w12: float
    residual_tilde: float
    residual_w: float
    method: VisibilityMethod
    lambda0: Optional[float] = None
    concurrence: Optional[float] = None
    # beam splitter + phase family, only when requested
    v1_restricted: Optional[float] = None
    v12_restricted: Optional[float] = None

    @model_validator(mode="after")
    def check_closed_form_bounds(self) -> "VisibilityReport":
        if self.method != VisibilityMethod.CLOSED_FORM:
            return self
        for name in ("v1", "v12", "w12_tilde", "w12"):
            value = getattr(self, name)
            if not -_RANGE_SLACK <= value <= 1.0 + _RANGE_SLACK:
                raise ValueError(f"{name}={value} outside [0, 1]")
        if self.residual_tilde < -_RESIDUAL_SLACK:
            raise ValueError(f"residual_tilde={self.residual_tilde} is negative")
        if self.residual_w > _RESIDUAL_SLACK:
            raise ValueError(f"residual_w={self.residual_w} is positive")
        return self


class VisibilityDeviation(BaseModel):
    """|closed - numeric| per measure."""
    v1: float
    v12: float
    w12_tilde: float
    w12: float

    @property
    def worst(self) -> float:
        return max(self.v1, self.v12, self.w12_tilde, self.w12)


class SweepRow(BaseModel):
    lambda0: float
    v1: float
    v12: float
    w12_tilde: float
    w12: float
    sum_sq_tilde: float
    sum_sq_w: float

    @classmethod
    def from_report(cls, lambda0: float, report: VisibilityReport) -> "SweepRow":
        return cls(
            lambda0=lambda0,
            v1=report.v1,
            v12=report.v12,
            w12_tilde=report.w12_tilde,
            w12=report.w12,
            sum_sq_tilde=report.v1 ** 2 + report.w12_tilde ** 2,
            sum_sq_w=report.v1 ** 2 + report.w12 ** 2,
        )
