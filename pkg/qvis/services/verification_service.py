"""
Property checks over Haar-random states.

Every check reduces to a nonnegative violation `r` that passes when r <= tol:
    complementarity_identity  |v1^2 + C^2 - 1|                      tol 1e-10
    residual_tilde_sign       max(0, -(v1^2 + w12_tilde^2 - 1))     tol 1e-10
    residual_w_sign           max(0, v1^2 + w12^2 - 1)              tol 1e-10
    spectrum                  max |eig(rho - rho1 (x) rho2) - closed| tol 1e-9
    bounds                    max(0, C - w12_tilde, w12 - C)        tol 1e-10
    cross_forms               spread of disagreeing closed forms    (any = fail)
    closed_vs_numeric         max |closed - numeric| per measure    tol 1e-4
"""
import logging
from typing import Dict, Optional

import numpy as np

from qvis.core.errors import ConsistencyError
from qvis.schemas.optimizer import OptimizerConfig
from qvis.schemas.verification import CheckOutcome, FailingState, VerificationSummary
from qvis.schemas.visibility import VisibilityDeviation, VisibilityReport
from qvis.services import optimize, states, visibilities
from qvis.services.states import TwoQubitPureState
from qvis.utils import linalg

logger = logging.getLogger(__name__)

CHECK_TOLERANCES: Dict[str, float] = {
    "complementarity_identity": 1e-10,
    "residual_tilde_sign": 1e-10,
    "residual_w_sign": 1e-10,
    "spectrum": 1e-9,
    "bounds": 1e-10,
    "cross_forms": 0.0,
}
NUMERIC_TOLERANCE = 1e-4


class _Recorder:
    def __init__(self, summary: VerificationSummary):
        self.summary = summary

    def record(self, index: int, state: TwoQubitPureState, check: str, residual: float, tol: float) -> None:
        outcome = self.summary.checks.setdefault(check, CheckOutcome(name=check))
        outcome.worst_residual = max(outcome.worst_residual, float(residual))
        if residual <= tol:
            outcome.passed += 1
            return
        outcome.failed += 1
        self.summary.failures.append(
            FailingState(index=index, check=check, residual=float(residual), amplitudes=state.as_pairs())
        )
        logger.warning(f"State {index} failed {check}: residual {residual:.3e} > {tol:.1e}")


def spectrum_residual(state: TwoQubitPureState) -> float:
    """max |numeric - closed| over the sorted spectrum of rho - rho1 (x) rho2."""
    diff = states.density(state) - states.separable_reference(state)
    numeric = linalg.eig_hermitian(0.5 * (diff + diff.conj().T)).eigenvalues
    closed = visibilities.eigenvalues_diff(states.schmidt(state))
    return float(np.max(np.abs(numeric - closed)))


def deviation(closed: VisibilityReport, numeric: VisibilityReport) -> VisibilityDeviation:
    return VisibilityDeviation(
        v1=abs(closed.v1 - numeric.v1),
        v12=abs(closed.v12 - numeric.v12),
        w12_tilde=abs(closed.w12_tilde - numeric.w12_tilde),
        w12=abs(closed.w12 - numeric.w12),
    )


def _spread(exc: ConsistencyError) -> float:
    values = [float(v) for v in exc.detail.get("values", {}).values()]
    return max(values) - min(values) if values else float("nan")


def check_state(
    recorder: _Recorder,
    index: int,
    state: TwoQubitPureState,
    cfg: Optional[OptimizerConfig] = None,
) -> None:
    try:
        report = visibilities.report_closed(state)
    except ConsistencyError as exc:
        recorder.record(index, state, "cross_forms", _spread(exc), CHECK_TOLERANCES["cross_forms"])
        return
    recorder.record(index, state, "cross_forms", 0.0, CHECK_TOLERANCES["cross_forms"])

    c = report.concurrence
    recorder.record(
        index, state, "complementarity_identity", abs(report.v1 ** 2 + c ** 2 - 1.0),
        CHECK_TOLERANCES["complementarity_identity"],
    )
    recorder.record(
        index, state, "residual_tilde_sign", max(0.0, -report.residual_tilde),
        CHECK_TOLERANCES["residual_tilde_sign"],
    )
    recorder.record(
        index, state, "residual_w_sign", max(0.0, report.residual_w), CHECK_TOLERANCES["residual_w_sign"]
    )
    recorder.record(index, state, "spectrum", spectrum_residual(state), CHECK_TOLERANCES["spectrum"])
    recorder.record(
        index, state, "bounds", max(0.0, c - report.w12_tilde, report.w12 - c), CHECK_TOLERANCES["bounds"]
    )

    if cfg is not None:
        numeric = optimize.report_numeric(state, cfg)
        recorder.record(index, state, "closed_vs_numeric", deviation(report, numeric).worst, NUMERIC_TOLERANCE)


def verify_states(
    seed: int,
    count: int,
    numeric: bool = False,
    cfg: Optional[OptimizerConfig] = None,
) -> VerificationSummary:
    """Run every check on `count` Haar-random states drawn with `seed`.

    With `numeric`, each state is also optimized and compared with its closed form.
    """
    sample = states.sample_haar(seed, count)
    summary = VerificationSummary(seed=seed, count=count, numeric=numeric)
    recorder = _Recorder(summary)
    numeric_cfg = (cfg or OptimizerConfig()) if numeric else None
    for index, state in enumerate(sample):
        check_state(recorder, index, state, numeric_cfg)
    logger.info(
        f"Verification finished: {summary.total_passed} passed, {summary.total_failed} failed "
        f"(seed={seed}, count={count}, numeric={numeric})"
    )
    return summary
