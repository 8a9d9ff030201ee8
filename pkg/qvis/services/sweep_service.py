"""
Visibilities along the Schmidt coefficient: a uniform lambda0 grid over [0.5, 1]
with one SweepRow per point, written as CSV.
"""
import logging
import os
from typing import List, Optional

import numpy as np
import pandas as pd

from qvis.core.config import settings
from qvis.core.errors import OutputError, UsageError
from qvis.schemas.optimizer import OptimizerConfig
from qvis.schemas.visibility import SweepRow
from qvis.services import optimize, states, visibilities

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["lambda0", "v1", "v12", "w12_tilde", "w12", "sum_sq_tilde", "sum_sq_w"]
SWEEP_MODES = ("closed", "numeric")


def lambda_grid(n_points: int) -> np.ndarray:
    if n_points < 2:
        raise UsageError(f"--points must be at least 2, got {n_points}", {"n_points": n_points})
    return np.linspace(0.5, 1.0, n_points)


def build_sweep(n_points: int, mode: str = "closed", cfg: Optional[OptimizerConfig] = None) -> List[SweepRow]:
    if mode not in SWEEP_MODES:
        raise UsageError(f"sweep mode must be one of {SWEEP_MODES}, got {mode!r}", {"mode": mode})
    grid = lambda_grid(n_points)
    rows: List[SweepRow] = []
    for lambda0 in grid:
        state = states.from_schmidt_value(float(lambda0))
        if mode == "closed":
            report = visibilities.report_closed(state)
        else:
            report = optimize.report_numeric(state, cfg or OptimizerConfig())
        rows.append(SweepRow.from_report(float(lambda0), report))
    logger.info(f"Sweep built: {n_points} points, mode={mode}")
    return rows


def sweep_frame(rows: List[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump() for row in rows], columns=SWEEP_COLUMNS)


def resolve_output_path(path: str) -> str:
    """Bare file names go to SWEEP_OUTPUT_DIR when it is set."""
    if settings.SWEEP_OUTPUT_DIR and os.path.basename(path) == path:
        return os.path.join(settings.SWEEP_OUTPUT_DIR, path)
    return path


def write_sweep_csv(rows: List[SweepRow], path: str) -> str:
    target = resolve_output_path(path)
    try:
        sweep_frame(rows).to_csv(
            target,
            index=False,
            float_format=settings.csv_float_format,
            lineterminator="\n",
        )
    except OSError as exc:
        raise OutputError(f"cannot write sweep to {target}: {exc.strerror or exc}", {"path": target}) from exc
    logger.info(f"Sweep written to {target} ({len(rows)} rows)")
    return target
