"""Domain exceptions and their mapping onto CLI exit codes.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 numeric failure.
"""
import functools
import json
import logging
import sys
from typing import Any, Callable, Dict, Optional

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2
EXIT_NUMERIC = 3


class QvisError(Exception):
    exit_code: int = EXIT_USAGE

    def __init__(self, message: str, detail: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, "detail": self.detail}


class UsageError(QvisError):
    exit_code = EXIT_USAGE


class OutputError(QvisError):
    """Result file could not be written; detail carries the path."""

    exit_code = EXIT_USAGE


class ValidationError(QvisError):
    exit_code = EXIT_USAGE


class DimensionMismatchError(ValidationError):
    pass


class NotHermitianError(ValidationError):
    pass


class NotUnitaryError(ValidationError):
    pass


class InvalidDensityMatrixError(ValidationError):
    """Raised with the violated property (hermitian, trace, positivity, shape) in detail."""


class InvalidStateError(ValidationError):
    pass


class InvalidDistributionError(ValidationError):
    pass


class NumericFailure(QvisError):
    exit_code = EXIT_NUMERIC


class ConvergenceError(NumericFailure):
    def __init__(self, message: str, residual: float, detail: Optional[Dict[str, Any]] = None):
        super().__init__(message, {**(detail or {}), "residual": residual})
        self.residual = residual


class ConsistencyError(NumericFailure):
    """Two expressions of the same quantity disagree beyond tolerance."""


class OptimizationError(NumericFailure):
    def __init__(self, message: str, best: Any = None, detail: Optional[Dict[str, Any]] = None):
        payload = dict(detail or {})
        if best is not None:
            payload["best_so_far"] = best.model_dump() if hasattr(best, "model_dump") else best
        super().__init__(message, payload)
        self.best = best


class VerificationFailed(QvisError):
    exit_code = EXIT_VERIFICATION


def check_agreement(name: str, values: Dict[str, float], tol: float) -> None:
    """Raise ConsistencyError when any two of the named values differ by more than tol."""
    items = list(values.items())
    ref_name, ref = items[0]
    for other_name, other in items[1:]:
        if abs(other - ref) > tol:
            raise ConsistencyError(
                f"{name}: {ref_name}={ref!r} and {other_name}={other!r} differ by "
                f"{abs(other - ref):.3e} (tolerance {tol:.1e})",
                {"quantity": name, "values": values, "tolerance": tol},
            )


def handle_cli_errors(func: Callable[..., int]) -> Callable[..., int]:
    """Turn domain exceptions raised by a command into exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            return func(*args, **kwargs)
        except QvisError as exc:
            if exc.exit_code == EXIT_NUMERIC:
                logger.error(f"Numeric failure: {exc.message}")
            elif exc.exit_code == EXIT_VERIFICATION:
                logger.warning(f"Verification failed: {exc.message}")
            else:
                logger.error(f"Usage error: {exc.message}")
            print(json.dumps(exc.to_dict(), default=str), file=sys.stderr)
            return exc.exit_code

    return wrapper
