from typing import Dict, List

from pydantic import BaseModel, Field


class CheckOutcome(BaseModel):
    name: str
    passed: int = 0
    failed: int = 0
    # largest violation seen (0 when every state satisfies the check with margin)
    worst_residual: float = 0.0


class FailingState(BaseModel):
    index: int
    check: str
    residual: float
    amplitudes: List[List[float]]


class VerificationSummary(BaseModel):
    seed: int
    count: int
    numeric: bool
    checks: Dict[str, CheckOutcome] = Field(default_factory=dict)
    failures: List[FailingState] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and all(c.failed == 0 for c in self.checks.values())

    @property
    def total_passed(self) -> int:
        return sum(c.passed for c in self.checks.values())

    @property
    def total_failed(self) -> int:
        return sum(c.failed for c in self.checks.values())
