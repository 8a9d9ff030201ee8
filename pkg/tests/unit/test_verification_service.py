"""
Unit tests for the Haar-random verification suite.
Run: pytest tests/unit/test_verification_service.py -v
"""
import pytest

from qvis.core.errors import ConsistencyError, UsageError
from qvis.schemas.visibility import VisibilityMethod, VisibilityReport
from qvis.services import verification_service, visibilities


def test_closed_checks_pass_on_random_states():
    summary = verification_service.verify_states(seed=1, count=30)
    assert summary.passed
    assert summary.total_failed == 0
    assert set(summary.checks) == set(verification_service.CHECK_TOLERANCES)
    for outcome in summary.checks.values():
        assert outcome.passed == 30
    assert summary.checks["spectrum"].worst_residual < 1e-9


def test_count_zero_is_usage_error():
    with pytest.raises(UsageError):
        verification_service.verify_states(seed=1, count=0)


def test_failure_is_recorded_with_amplitudes(monkeypatch):
    monkeypatch.setattr(verification_service, "spectrum_residual", lambda state: 0.5)
    summary = verification_service.verify_states(seed=2, count=3)
    assert not summary.passed
    assert summary.checks["spectrum"].failed == 3
    assert summary.checks["spectrum"].worst_residual == 0.5
    assert [f.index for f in summary.failures] == [0, 1, 2]
    assert len(summary.failures[0].amplitudes) == 4


def test_cross_form_disagreement_counts_as_failure(monkeypatch):
    def broken(state):
        raise ConsistencyError("w12 forms disagree", {"quantity": "w12", "values": {"a": 0.5, "b": 0.6}})

    monkeypatch.setattr(visibilities, "report_closed", broken)
    summary = verification_service.verify_states(seed=2, count=2)
    assert summary.checks["cross_forms"].failed == 2
    assert summary.checks["cross_forms"].worst_residual == pytest.approx(0.1)


def test_deviation_worst():
    closed = VisibilityReport(
        v1=0.5, v12=0.8, w12_tilde=0.9, w12=0.7, residual_tilde=0.06, residual_w=-0.26,
        method=VisibilityMethod.CLOSED_FORM,
    )
    numeric = closed.model_copy(update={"w12": 0.69, "method": VisibilityMethod.NUMERIC})
    dev = verification_service.deviation(closed, numeric)
    assert dev.worst == pytest.approx(0.01)
