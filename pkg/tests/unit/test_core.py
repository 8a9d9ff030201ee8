"""
Unit tests for settings, the error hierarchy and the pydantic schemas.
Run: pytest tests/unit/test_core.py -v
"""
import json

import pytest
from pydantic import ValidationError

from qvis.core.config import Settings
from qvis.core.errors import (
    EXIT_NUMERIC,
    EXIT_USAGE,
    EXIT_VERIFICATION,
    ConsistencyError,
    ConvergenceError,
    InvalidDensityMatrixError,
    OutputError,
    VerificationFailed,
    check_agreement,
    handle_cli_errors,
)
from qvis.schemas.optimizer import OptimizerConfig
from qvis.schemas.state import StateSpec
from qvis.schemas.visibility import SweepRow, VisibilityMethod, VisibilityReport


def test_settings_defaults():
    s = Settings()
    assert s.OPTIMIZER_RESTARTS == 8
    assert s.OPTIMIZER_F_TOLERANCE == 1e-10
    assert s.csv_float_format == "%.12g"


def test_settings_read_prefixed_environment(monkeypatch):
    monkeypatch.setenv("QVIS_OPTIMIZER_RESTARTS", "5")
    monkeypatch.setenv("QVIS_LOG_LEVEL", "DEBUG")
    s = Settings()
    assert s.OPTIMIZER_RESTARTS == 5
    assert s.LOG_LEVEL == "DEBUG"


def test_settings_reject_non_positive_tolerance(monkeypatch):
    monkeypatch.setenv("QVIS_SOLVER_TOLERANCE", "0")
    with pytest.raises(ValidationError):
        Settings()


@pytest.mark.parametrize(
    "exc,code",
    [
        (InvalidDensityMatrixError("x"), EXIT_USAGE),
        (OutputError("x"), EXIT_USAGE),
        (ConvergenceError("x", residual=1e-3), EXIT_NUMERIC),
        (ConsistencyError("x"), EXIT_NUMERIC),
        (VerificationFailed("x"), EXIT_VERIFICATION),
    ],
)
def test_exit_codes(exc, code):
    assert exc.exit_code == code


def test_check_agreement():
    check_agreement("q", {"a": 1.0, "b": 1.0 + 1e-13}, 1e-12)
    with pytest.raises(ConsistencyError) as exc:
        check_agreement("q", {"a": 1.0, "b": 1.0, "c": 1.1}, 1e-12)
    assert exc.value.detail["quantity"] == "q"
    assert "c" in exc.value.message


def test_handle_cli_errors_prints_json(capsys):
    @handle_cli_errors
    def command():
        raise ConvergenceError("no luck", residual=0.5)

    assert command() == EXIT_NUMERIC
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err == {"error": "ConvergenceError", "message": "no luck", "detail": {"residual": 0.5}}


def test_optimizer_config_validation():
    assert OptimizerConfig(restarts=3).restarts == 3
    for bad in ({"restarts": 0}, {"f_tolerance": 0.0}, {"polish_rounds": -1}, {"workers": 0}):
        with pytest.raises(ValidationError):
            OptimizerConfig(**bad)


def test_state_spec_round_trip_of_pairs():
    spec = StateSpec(amplitudes=[[0.6, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.8]])
    assert spec.complex_amplitudes() == [0.6, 0, 0, 0.8j]
    with pytest.raises(ValidationError):
        StateSpec()
    with pytest.raises(ValidationError):
        StateSpec(amplitudes=[[float("nan"), 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
    with pytest.raises(ValidationError):
        StateSpec(schmidt_lambda0=float("inf"))


def test_closed_report_rejects_wrong_residual_sign():
    with pytest.raises(ValidationError):
        VisibilityReport(
            v1=0.5, v12=0.5, w12_tilde=0.5, w12=0.5, residual_tilde=-0.5, residual_w=-0.5,
            method=VisibilityMethod.CLOSED_FORM,
        )
    # numeric reports carry optimizer noise and are not range-checked
    VisibilityReport(
        v1=0.5, v12=0.5, w12_tilde=0.5, w12=0.5, residual_tilde=-0.5, residual_w=-0.5,
        method=VisibilityMethod.NUMERIC,
    )


def test_sweep_row_sums():
    report = VisibilityReport(
        v1=0.6, v12=0.8, w12_tilde=0.9, w12=0.7, residual_tilde=0.17, residual_w=-0.15,
        method=VisibilityMethod.CLOSED_FORM,
    )
    row = SweepRow.from_report(0.8, report)
    assert row.sum_sq_tilde == pytest.approx(0.36 + 0.81)
    assert row.sum_sq_w == pytest.approx(0.36 + 0.49)
