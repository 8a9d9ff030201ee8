"""
Closed-form visibilities of a pure two-qubit state.

Where several equivalent expressions exist (Schmidt coefficient, purity,
concurrence, fidelity, spectrum), all of them are evaluated and must agree;
a disagreement raises ConsistencyError.
"""
import logging
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from qvis.core.config import settings
from qvis.core.errors import check_agreement
from qvis.schemas.visibility import VisibilityMethod, VisibilityReport
from qvis.services import correlators, states
from qvis.services.states import SchmidtData, TwoQubitPureState

logger = logging.getLogger(__name__)


def concurrence_from_schmidt(sd: SchmidtData) -> float:
    return float(2.0 * np.sqrt(sd.product))


def fidelity_to_mixed(sd: SchmidtData) -> float:
    """F(rho_1, I/2) = sum_j sqrt(lambda_j / 2)."""
    return float(np.sqrt(sd.lambda0 / 2.0) + np.sqrt(sd.lambda1 / 2.0))


def v1_closed(sd: SchmidtData) -> float:
    value = 2.0 * sd.lambda0 - 1.0
    purity = states.purity(sd.reduced_first())
    c = concurrence_from_schmidt(sd)
    # compared as squares: the square roots amplify rounding near v1 = 0
    check_agreement(
        "v1^2",
        {"schmidt": value * value, "purity": 2.0 * purity - 1.0, "concurrence": 1.0 - c * c},
        settings.CROSS_CHECK_TOLERANCE,
    )
    return float(value)


def v12_closed(state: TwoQubitPureState) -> float:
    return states.concurrence(state)


def w12_tilde_closed(sd: SchmidtData) -> float:
    s = np.sqrt(sd.product)
    by_lambda = 2.0 * s / (2.0 * sd.product + 0.5)
    c = concurrence_from_schmidt(sd)
    by_concurrence = 2.0 * c / (c * c + 1.0)
    check_agreement(
        "w12_tilde",
        {"lambda": by_lambda, "concurrence": by_concurrence},
        settings.CROSS_CHECK_TOLERANCE_STRICT,
    )
    return float(by_lambda)


def w12_closed(sd: SchmidtData) -> float:
    s = np.sqrt(sd.product)
    by_lambda = (4.0 / 3.0) * (sd.product + s)
    f = fidelity_to_mixed(sd)
    by_fidelity = (4.0 / 3.0) * (f ** 4 - 0.25)
    c = concurrence_from_schmidt(sd)
    by_concurrence = (c * c + 2.0 * c) / 3.0
    check_agreement(
        "w12",
        {"lambda": by_lambda, "fidelity": by_fidelity, "concurrence": by_concurrence},
        settings.CROSS_CHECK_TOLERANCE_STRICT,
    )
    uhlmann = states.fidelity(sd.reduced_first(), states.maximally_mixed())
    check_agreement("fidelity", {"closed": f, "uhlmann": uhlmann}, settings.CROSS_CHECK_TOLERANCE)
    return float(by_lambda)


def eigenvalues_diff(sd: SchmidtData) -> NDArray[np.float64]:
    """Spectrum of rho - rho_1 (x) rho_2, descending."""
    prod = sd.product
    s = np.sqrt(prod)
    values = np.array([-prod, -prod, prod + s, prod - s])
    return np.sort(values)[::-1].copy()


def w12_from_spectrum(eigenvalues: Sequence[float]) -> float:
    """(2/3) sum_j |alpha_j|."""
    return float((2.0 / 3.0) * np.sum(np.abs(np.asarray(eigenvalues, dtype=np.float64))))


def v1_distance_form(state: TwoQubitPureState, u1: ArrayLike) -> float:
    """2 D(P_1, P_1^mix) for the first qubit after U1."""
    p1 = correlators.one_body_probs(state, u1)
    return 2.0 * correlators.kolmogorov(p1, correlators.MIXED_ONE_QUBIT)


def report_closed(state: TwoQubitPureState) -> VisibilityReport:
    sd = states.schmidt(state)
    v1 = v1_closed(sd)
    v12 = v12_closed(state)
    w_tilde = w12_tilde_closed(sd)
    w = w12_closed(sd)
    return VisibilityReport(
        v1=v1,
        v12=v12,
        w12_tilde=w_tilde,
        w12=w,
        residual_tilde=v1 * v1 + w_tilde * w_tilde - 1.0,
        residual_w=v1 * v1 + w * w - 1.0,
        method=VisibilityMethod.CLOSED_FORM,
        lambda0=sd.lambda0,
        concurrence=v12,
    )
