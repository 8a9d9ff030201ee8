"""
Unit tests for the lambda0 sweep and its CSV output.
Run: pytest tests/unit/test_sweep_service.py -v
"""
import numpy as np
import pandas as pd
import pytest

from qvis.core.config import settings
from qvis.core.errors import OutputError, UsageError
from qvis.services import sweep_service

HEADER = "lambda0,v1,v12,w12_tilde,w12,sum_sq_tilde,sum_sq_w"


def test_two_point_sweep_hits_endpoints():
    first, last = sweep_service.build_sweep(2)
    assert first.lambda0 == 0.5 and last.lambda0 == 1.0
    assert (first.v1, first.w12_tilde, first.w12) == pytest.approx((0.0, 1.0, 1.0), abs=1e-12)
    assert (last.v1, last.w12_tilde, last.w12) == pytest.approx((1.0, 0.0, 0.0), abs=1e-12)


@pytest.mark.parametrize("n_points", [0, 1, -3])
def test_sweep_needs_two_points(n_points):
    with pytest.raises(UsageError):
        sweep_service.build_sweep(n_points)


def test_sweep_rejects_unknown_mode():
    with pytest.raises(UsageError):
        sweep_service.build_sweep(3, mode="both")


def test_sweep_shape_of_curves():
    rows = sweep_service.build_sweep(101)
    v1 = np.array([r.v1 for r in rows])
    w_tilde = np.array([r.w12_tilde for r in rows])
    w = np.array([r.w12 for r in rows])
    assert np.all(np.diff(v1) > 0)
    assert np.all(np.diff(w_tilde) < 0)
    assert np.all(np.diff(w) < 0)
    for row in rows:
        assert row.sum_sq_tilde >= 1.0 - 1e-10
        assert row.sum_sq_w <= 1.0 + 1e-10
    # equality only at the two ends
    inner = rows[1:-1]
    assert all(r.sum_sq_tilde > 1.0 + 1e-10 for r in inner)
    assert all(r.sum_sq_w < 1.0 - 1e-10 for r in inner)


def test_csv_header_format_and_reproducibility(tmp_path):
    rows = sweep_service.build_sweep(11)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    sweep_service.write_sweep_csv(rows, str(a))
    sweep_service.write_sweep_csv(sweep_service.build_sweep(11), str(b))
    text = a.read_text()
    assert text.splitlines()[0] == HEADER
    assert text.endswith("\n")
    assert len(text.splitlines()) == 12
    assert a.read_bytes() == b.read_bytes()
    frame = pd.read_csv(a)
    assert frame["lambda0"].tolist() == pytest.approx(np.linspace(0.5, 1.0, 11).tolist(), abs=1e-12)
    # 12 significant digits
    assert all(len(cell.replace("-", "").replace(".", "").lstrip("0")) <= 12 for cell in text.splitlines()[3].split(","))


def test_unwritable_path_echoes_path(tmp_path):
    target = tmp_path / "missing" / "sweep.csv"
    with pytest.raises(OutputError) as exc:
        sweep_service.write_sweep_csv(sweep_service.build_sweep(2), str(target))
    assert exc.value.detail["path"] == str(target)
    assert str(target) in exc.value.message


def test_bare_file_name_goes_to_output_dir(tmp_path, monkeypatch):
    monkeypatch.setattr(settings, "SWEEP_OUTPUT_DIR", str(tmp_path))
    written = sweep_service.write_sweep_csv(sweep_service.build_sweep(2), "fig.csv")
    assert written == str(tmp_path / "fig.csv")
    assert (tmp_path / "fig.csv").exists()
