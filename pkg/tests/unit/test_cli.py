"""
Unit tests for the command-line front end.
Run: pytest tests/unit/test_cli.py -v
"""
import io
import json
from unittest.mock import patch

import pytest

from qvis import cli
from qvis.core.errors import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION, ConsistencyError
from qvis.schemas.verification import CheckOutcome, FailingState, VerificationSummary


def _stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


def test_report_closed_for_maximally_entangled(capsys):
    assert cli.main(["report", "--lambda0", "0.5"]) == EXIT_OK
    out = _stdout_json(capsys)
    assert out["closed"]["v1"] == pytest.approx(0.0, abs=1e-12)
    assert out["closed"]["w12_tilde"] == pytest.approx(1.0)
    assert out["closed"]["w12"] == pytest.approx(1.0)
    assert out["closed"]["method"] == "closed_form"
    assert "numeric" not in out


def test_report_from_state_file(tmp_path, capsys):
    doc = tmp_path / "state.json"
    doc.write_text(json.dumps({"amplitudes": [[1, 0], [0, 0], [0, 0], [0, 0]]}))
    assert cli.main(["report", "--state", str(doc)]) == EXIT_OK
    out = _stdout_json(capsys)
    assert out["closed"]["v1"] == pytest.approx(1.0)
    assert out["closed"]["v12"] == pytest.approx(0.0, abs=1e-12)
    assert out["closed"]["w12"] == pytest.approx(0.0, abs=1e-12)


def test_report_from_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO('{"schmidt_lambda0": 0.75}'))
    assert cli.main(["report", "--state", "-"]) == EXIT_OK
    assert _stdout_json(capsys)["closed"]["v1"] == pytest.approx(0.5)


@pytest.mark.parametrize(
    "document,field",
    [
        ({"amplitudes": [[1, 0], [0, 0], [0, 0]]}, "amplitudes"),
        ({"schmidt_lambda0": 0.2}, "schmidt_lambda0"),
        ({"amplitudes": [[1, 0], [0, 0], [0, 0], [0, 0]], "schmidt_lambda0": 0.7}, "exactly one"),
        ({"lambda": 0.7}, "lambda"),
    ],
)
def test_malformed_state_is_usage_error(tmp_path, capsys, document, field):
    doc = tmp_path / "state.json"
    doc.write_text(json.dumps(document))
    assert cli.main(["report", "--state", str(doc)]) == EXIT_USAGE
    assert field in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["report"],
        ["report", "--lambda0", "0.7", "--state", "x.json"],
        ["report", "--lambda0", "0.7", "--mode", "sideways"],
        ["report", "--lambda0", "0.7", "--phase-grid", "32"],
        ["report", "--state", "/nonexistent/state.json"],
        ["sweep", "--points", "1", "--out", "x.csv"],
        ["verify", "--count", "0"],
        ["verify", "--mode", "numeric", "--restarts", "0"],
    ],
)
def test_usage_errors_exit_1(argv):
    assert cli.main(argv) == EXIT_USAGE


def test_sweep_writes_csv(tmp_path, capsys):
    out = tmp_path / "fig.csv"
    assert cli.main(["sweep", "--points", "5", "--out", str(out)]) == EXIT_OK
    assert out.read_text().splitlines()[0] == "lambda0,v1,v12,w12_tilde,w12,sum_sq_tilde,sum_sq_w"
    assert _stdout_json(capsys)["rows"] == 5


def test_sweep_io_failure_echoes_path(tmp_path, capsys):
    out = tmp_path / "fig.csv"
    with patch("pandas.DataFrame.to_csv", side_effect=PermissionError(13, "Permission denied")):
        assert cli.main(["sweep", "--points", "3", "--out", str(out)]) == EXIT_USAGE
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["error"] == "OutputError"
    assert err["detail"]["path"] == str(out)


def test_verify_closed_passes(capsys):
    assert cli.main(["verify", "--seed", "1", "--count", "20"]) == EXIT_OK
    out = _stdout_json(capsys)
    assert out["passed"] is True
    assert out["count"] == 20


def test_verify_failure_exits_2(capsys):
    failing = VerificationSummary(
        seed=1,
        count=1,
        numeric=False,
        checks={"bounds": CheckOutcome(name="bounds", failed=1, worst_residual=0.2)},
        failures=[FailingState(index=0, check="bounds", residual=0.2, amplitudes=[[1, 0], [0, 0], [0, 0], [0, 0]])],
    )
    with patch("qvis.services.verification_service.verify_states", return_value=failing):
        assert cli.main(["verify", "--seed", "1", "--count", "1"]) == EXIT_VERIFICATION
    out = _stdout_json(capsys)
    assert out["passed"] is False
    assert out["failures"][0]["amplitudes"][0] == [1.0, 0.0]


def test_numeric_failure_exits_3(capsys):
    with patch("qvis.services.visibilities.report_closed", side_effect=ConsistencyError("forms disagree")):
        assert cli.main(["report", "--lambda0", "0.6"]) == EXIT_NUMERIC
    assert "ConsistencyError" in capsys.readouterr().err


def test_log_level_flag_is_case_insensitive(capsys):
    assert cli.main(["--log-level", "debug", "report", "--lambda0", "1"]) == EXIT_OK


@pytest.mark.parametrize(
    "document",
    ['{"amplitudes": [[NaN, 0], [0, 0], [0, 0], [1, 0]]}', '{"schmidt_lambda0": NaN}'],
)
def test_non_finite_state_is_usage_error(monkeypatch, document):
    monkeypatch.setattr("sys.stdin", io.StringIO(document))
    assert cli.main(["report", "--state", "-"]) == EXIT_USAGE


def test_nan_lambda0_flag_is_usage_error():
    assert cli.main(["report", "--lambda0", "nan"]) == EXIT_USAGE
