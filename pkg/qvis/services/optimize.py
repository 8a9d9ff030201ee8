"""
Numerical extremization over U(2), U(2) (x) U(2) and U(4).

Unitaries are charted by the exponential map U = exp(iH), H = sum_k theta_k G_k,
so the search space is unconstrained R^(d^2). Each restart runs a Nelder-Mead
simplex from a seeded uniform start in [-pi, pi]^(d^2) and is then polished by
re-starting the simplex at the incumbent. Minimization is maximization of the
negated objective.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import logm
from scipy.optimize import minimize, minimize_scalar

from qvis.core.config import settings
from qvis.core.errors import ConsistencyError, OptimizationError, UsageError, check_agreement
from qvis.schemas.optimizer import OptimizationResult, OptimizerConfig, UnitaryParametrization
from qvis.schemas.visibility import VisibilityMethod, VisibilityReport
from qvis.services import correlators, states
from qvis.services.states import TwoQubitPureState
from qvis.utils import linalg
from qvis.utils.linalg import ComplexMatrix

logger = logging.getLogger(__name__)

Objective = Callable[[ComplexMatrix], float]
LocalObjective = Callable[[ComplexMatrix, ComplexMatrix], float]

# Balanced beam splitter, equal transmittivity and reflectivity
BEAM_SPLITTER = np.array([[1.0, 1.0j], [1.0j, 1.0]], dtype=np.complex128) / np.sqrt(2.0)

_PHASE_TOLERANCE = 1e-8
_MIN_PHASE_GRID = 16


def _generator_basis(dim: int) -> NDArray[np.complex128]:
    gens = []
    for j in range(dim):
        g = np.zeros((dim, dim), dtype=np.complex128)
        g[j, j] = 1.0
        gens.append(g)
    for j in range(dim):
        for k in range(j + 1, dim):
            sym = np.zeros((dim, dim), dtype=np.complex128)
            sym[j, k] = sym[k, j] = 1.0
            anti = np.zeros((dim, dim), dtype=np.complex128)
            anti[j, k] = -1.0j
            anti[k, j] = 1.0j
            gens.extend((sym, anti))
    return np.array(gens)


_GENERATORS = {2: _generator_basis(2), 4: _generator_basis(4)}


def _realize_params(params: NDArray[np.float64], dim: int) -> ComplexMatrix:
    h = np.tensordot(params, _GENERATORS[dim], axes=1)
    # numpy's LAPACK eigh here: this runs once per objective evaluation
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def realize(p: UnitaryParametrization) -> ComplexMatrix:
    return _realize_params(np.asarray(p.params, dtype=np.float64), p.dimension)


def unitary_params(u: ArrayLike) -> UnitaryParametrization:
    """Inverse chart through the principal matrix logarithm: realize(unitary_params(U)) == U."""
    u = linalg.ensure_unitary(u)
    dim = u.shape[0]
    if dim not in _GENERATORS:
        raise UsageError(f"unitaries must be 2x2 or 4x4, got {u.shape}")
    h = -1.0j * logm(u)
    h = 0.5 * (h + h.conj().T)
    params: List[float] = [float(h[j, j].real) for j in range(dim)]
    for j in range(dim):
        for k in range(j + 1, dim):
            params.append(float(h[j, k].real))
            params.append(float(-h[j, k].imag))
    return UnitaryParametrization(dimension=dim, params=params)


@dataclass
class _RestartOutcome:
    index: int
    value: float
    x: NDArray[np.float64]
    iterations: int
    converged: bool


def _simplex(x0: NDArray[np.float64], scale: float) -> NDArray[np.float64]:
    return np.vstack([x0, x0 + scale * np.eye(x0.size)])


def _run_restart(
    index: int,
    fun: Callable[[NDArray[np.float64]], float],
    x0: NDArray[np.float64],
    cfg: OptimizerConfig,
) -> _RestartOutcome:
    x = np.array(x0, dtype=np.float64)
    value = fun(x)
    scale = cfg.simplex_scale
    iterations = 0
    converged = False
    for _ in range(1 + cfg.polish_rounds):
        res = minimize(
            lambda y: -fun(y),
            x,
            method="Nelder-Mead",
            options={
                "maxiter": cfg.max_iterations,
                # flat along phase directions of U, so only the value spread ends a run
                "xatol": np.inf,
                "fatol": cfg.f_tolerance,
                "adaptive": True,
                "initial_simplex": _simplex(x, scale),
            },
        )
        iterations += int(res.nit)
        spread = float(np.ptp(res.final_simplex[1]))
        run_converged = res.status == 0 or spread <= cfg.f_tolerance
        improvement = -float(res.fun) - value
        if improvement > 0:
            value, x = -float(res.fun), np.array(res.x)
        converged = run_converged
        if improvement <= cfg.f_tolerance:
            break
        scale *= 0.2
    return _RestartOutcome(index=index, value=value, x=x, iterations=iterations, converged=converged)


def _maximize_params(
    fun: Callable[[NDArray[np.float64]], float],
    n_params: int,
    cfg: OptimizerConfig,
    initial: Optional[Sequence[float]] = None,
) -> OptimizationResult:
    rng = np.random.default_rng(cfg.seed)
    starts = rng.uniform(-np.pi, np.pi, size=(cfg.restarts, n_params))
    if initial is not None:
        starts[0] = np.asarray(initial, dtype=np.float64)

    jobs = [(i, starts[i]) for i in range(cfg.restarts)]
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(lambda job: _run_restart(job[0], fun, job[1], cfg), jobs))
    else:
        outcomes = [_run_restart(i, fun, x0, cfg) for i, x0 in jobs]

    # highest value wins, ties go to the lowest restart index
    best = outcomes[0]
    for outcome in outcomes[1:]:
        if outcome.value > best.value:
            best = outcome
    agreeing = sum(1 for o in outcomes if abs(o.value - best.value) <= settings.OPTIMIZER_AGREEMENT_TOLERANCE)
    converged = sum(1 for o in outcomes if o.converged)
    result = OptimizationResult(
        value=best.value,
        params_at_optimum=best.x.tolist(),
        iterations_used=best.iterations,
        restarts_agreeing=agreeing,
        converged_restarts=converged,
    )
    logger.debug(
        f"maximize: best={best.value:.12g} restart={best.index} agreeing={agreeing}/{cfg.restarts} "
        f"converged={converged}"
    )
    if converged == 0:
        raise OptimizationError(
            f"none of {cfg.restarts} restarts converged within {cfg.max_iterations} iterations",
            best=result,
        )
    if agreeing < cfg.restarts / 2:
        logger.warning(f"only {agreeing} of {cfg.restarts} restarts reached the best value {best.value:.12g}")
    return result


def maximize(
    objective: Objective,
    dim: int,
    cfg: Optional[OptimizerConfig] = None,
    initial: Optional[Sequence[float]] = None,
) -> OptimizationResult:
    """Multi-start simplex maximization of objective(U) over U(dim).

    `initial` replaces the first restart's start point (warm start).
    """
    if dim not in _GENERATORS:
        raise UsageError(f"dim must be 2 or 4, got {dim}")
    cfg = cfg or OptimizerConfig()
    return _maximize_params(lambda x: float(objective(_realize_params(x, dim))), dim * dim, cfg, initial)


def minimize_unitary(
    objective: Objective,
    dim: int,
    cfg: Optional[OptimizerConfig] = None,
    initial: Optional[Sequence[float]] = None,
) -> OptimizationResult:
    result = maximize(lambda u: -objective(u), dim, cfg, initial)
    return result.model_copy(update={"value": -result.value})


def maximize_local(
    objective: LocalObjective,
    cfg: Optional[OptimizerConfig] = None,
) -> OptimizationResult:
    """Maximization over U1 (x) U2; params are U1's four followed by U2's four."""
    cfg = cfg or OptimizerConfig()

    def fun(x: NDArray[np.float64]) -> float:
        return float(objective(_realize_params(x[:4], 2), _realize_params(x[4:], 2)))

    return _maximize_params(fun, 8, cfg)


def _contrast(high: float, low: float) -> float:
    """(max - min) / (max + min)."""
    return (high - low) / (high + low)


def _extremes(objective: Objective, dim: int, cfg: OptimizerConfig) -> Tuple[float, float]:
    high = maximize(objective, dim, cfg).value
    low = minimize_unitary(objective, dim, cfg).value
    return high, low


# objectives

def p1_objective(state: TwoQubitPureState) -> Objective:
    """U1 -> p1(0), probability of |0> on qubit 1 after U1."""
    rho1 = states.reduced(state, 1)
    return lambda u: float(correlators.diagonal_after(rho1, u)[0])


def one_body_distance_objective(state: TwoQubitPureState) -> Objective:
    """U1 -> 2 D(P_1, P_1^mix)."""
    rho1 = states.reduced(state, 1)
    return lambda u: float(np.sum(np.abs(correlators.diagonal_after(rho1, u) - 0.5)))


def pbar00_local_objective(state: TwoQubitPureState) -> LocalObjective:
    psi = state.amplitudes

    def objective(u1: ComplexMatrix, u2: ComplexMatrix) -> float:
        p = np.abs(np.kron(u1, u2) @ psi) ** 2
        return float(p[0] - (p[0] + p[1]) * (p[0] + p[2]) + 0.25)

    return objective


def pbar00_global_objective(state: TwoQubitPureState) -> Objective:
    """U -> pbar(0,0) with U acting on both qubits jointly."""
    psi = state.amplitudes

    def objective(u: ComplexMatrix) -> float:
        p = np.abs(u @ psi) ** 2
        return float(p[0] - (p[0] + p[1]) * (p[0] + p[2]) + 0.25)

    return objective


def cbar00_objective(state: TwoQubitPureState) -> Objective:
    psi = state.amplitudes
    rho_sep = states.separable_reference(state)

    def objective(u: ComplexMatrix) -> float:
        row = u[0]
        p_sep = (row @ rho_sep @ row.conj()).real
        return float(abs(row @ psi) ** 2 - p_sep + 0.25)

    return objective


def w12_objective(state: TwoQubitPureState) -> Objective:
    """U -> (4/3) D(Cbar, Cbar_sep), checked against (4/3) D(P, P_sep) at every call."""
    psi = state.amplitudes
    rho_sep = states.separable_reference(state)
    tol = settings.CROSS_CHECK_TOLERANCE

    def objective(u: ComplexMatrix) -> float:
        p = np.abs(u @ psi) ** 2
        p_sep = correlators.diagonal_after(rho_sep, u)
        c = p - p_sep + 0.25
        by_correlator = 0.5 * float(np.sum(np.abs(c - 0.25)))
        by_probability = 0.5 * float(np.sum(np.abs(p - p_sep)))
        if abs(by_correlator - by_probability) > tol:
            raise ConsistencyError(
                f"D(Cbar, Cbar_sep)={by_correlator!r} differs from D(P, P_sep)={by_probability!r}",
                {"correlator": by_correlator, "probability": by_probability},
            )
        return (4.0 / 3.0) * by_correlator

    return objective


# visibilities

def v1_numeric(state: TwoQubitPureState, cfg: Optional[OptimizerConfig] = None) -> float:
    cfg = cfg or OptimizerConfig()
    p_max, p_min = _extremes(p1_objective(state), 2, cfg)
    ratio = _contrast(p_max, p_min)
    check_agreement("v1_numeric", {"contrast": ratio, "from_max": 2.0 * p_max - 1.0}, 1e-6)
    return float(ratio)


def v1_distance_numeric(state: TwoQubitPureState, cfg: Optional[OptimizerConfig] = None) -> float:
    """max over U1 of 2 D(P_1, P_1^mix)."""
    cfg = cfg or OptimizerConfig()
    return float(maximize(one_body_distance_objective(state), 2, cfg).value)


def v12_numeric_local(state: TwoQubitPureState, cfg: Optional[OptimizerConfig] = None) -> float:
    cfg = cfg or OptimizerConfig()
    objective = pbar00_local_objective(state)
    high = maximize_local(objective, cfg).value
    low = -maximize_local(lambda u1, u2: -objective(u1, u2), cfg).value
    return float(_contrast(high, low))


def v12_numeric_global(state: TwoQubitPureState, cfg: Optional[OptimizerConfig] = None) -> float:
    cfg = cfg or OptimizerConfig()
    return float(_contrast(*_extremes(pbar00_global_objective(state), 4, cfg)))


def w12_tilde_numeric(state: TwoQubitPureState, cfg: Optional[OptimizerConfig] = None) -> float:
    cfg = cfg or OptimizerConfig()
    return float(_contrast(*_extremes(cbar00_objective(state), 4, cfg)))


def w12_numeric(state: TwoQubitPureState, cfg: Optional[OptimizerConfig] = None) -> float:
    cfg = cfg or OptimizerConfig()
    return float(maximize(w12_objective(state), 4, cfg).value)


def eigenbasis_aligned_unitary(state: TwoQubitPureState) -> ComplexMatrix:
    """U with U^dag |jk> = j-th eigenvector of rho - rho_1 (x) rho_2 (descending order)."""
    diff = states.density(state) - states.separable_reference(state)
    dec = linalg.eig_hermitian(0.5 * (diff + diff.conj().T))
    return linalg.adjoint(dec.eigenvectors)


def schmidt_aligned_unitary(state: TwoQubitPureState) -> ComplexMatrix:
    """U1 with U1^dag |j> = |eta_j>, so that p1(0) = lambda0."""
    return linalg.adjoint(states.schmidt(state).basis_eta)


# beam splitter + phase family

def phase_unitary(phi: float) -> ComplexMatrix:
    """B P(phi) with P(phi) = diag(exp(i phi), 1)."""
    return BEAM_SPLITTER @ np.diag([np.exp(1j * phi), 1.0])


def _refine_phase(f: Callable[[float], float], phi: float, step: float, sign: float) -> Tuple[float, float]:
    res = minimize_scalar(
        lambda t: -sign * f(t),
        bounds=(phi - step, phi + step),
        method="bounded",
        options={"xatol": _PHASE_TOLERANCE},
    )
    value = -sign * float(res.fun)
    if sign * value >= sign * f(phi):
        return float(res.x), value
    return phi, f(phi)


def _extremize_1d(f: Callable[[float], float], grid: NDArray[np.float64], sign: float) -> float:
    values = np.array([f(t) for t in grid])
    i = int(np.argmax(sign * values))
    _, value = _refine_phase(f, float(grid[i]), float(grid[1] - grid[0]), sign)
    return value


def _extremize_2d(f: Callable[[float, float], float], grid: NDArray[np.float64], sign: float) -> float:
    values = np.array([[f(a, b) for b in grid] for a in grid])
    i, j = np.unravel_index(int(np.argmax(sign * values)), values.shape)
    a, b = float(grid[i]), float(grid[j])
    value = float(values[i, j])
    step = float(grid[1] - grid[0])
    # coordinate-wise golden-section refinement
    for _ in range(20):
        a, _ = _refine_phase(lambda t: f(t, b), a, step, sign)
        b, new_value = _refine_phase(lambda t: f(a, t), b, step, sign)
        gain = sign * (new_value - value)
        if gain > 0:
            value = new_value
        if gain <= _PHASE_TOLERANCE ** 2:
            break
    return value


def restricted_visibilities(state: TwoQubitPureState, phase_grid: int = 64) -> Tuple[float, float]:
    """(v1, v12) with U_i restricted to the beam splitter + phase family B P(phi_i)."""
    if phase_grid < _MIN_PHASE_GRID:
        raise UsageError(f"phase_grid must be at least {_MIN_PHASE_GRID}, got {phase_grid}")
    grid = np.linspace(0.0, 2.0 * np.pi, phase_grid, endpoint=False)
    rho1 = states.reduced(state, 1)
    psi = state.amplitudes

    def p1(phi: float) -> float:
        return float(correlators.diagonal_after(rho1, phase_unitary(phi))[0])

    def pbar00(phi1: float, phi2: float) -> float:
        p = np.abs(np.kron(phase_unitary(phi1), phase_unitary(phi2)) @ psi) ** 2
        return float(p[0] - (p[0] + p[1]) * (p[0] + p[2]) + 0.25)

    v1 = _contrast(_extremize_1d(p1, grid, 1.0), _extremize_1d(p1, grid, -1.0))
    v12 = _contrast(_extremize_2d(pbar00, grid, 1.0), _extremize_2d(pbar00, grid, -1.0))
    return float(v1), float(v12)


def report_numeric(
    state: TwoQubitPureState,
    cfg: Optional[OptimizerConfig] = None,
    phase_grid: Optional[int] = None,
) -> VisibilityReport:
    cfg = cfg or OptimizerConfig()
    v1 = v1_numeric(state, cfg)
    v12 = v12_numeric_local(state, cfg)
    w_tilde = w12_tilde_numeric(state, cfg)
    w = w12_numeric(state, cfg)
    restricted: Union[Tuple[float, float], Tuple[None, None]] = (None, None)
    if phase_grid is not None:
        restricted = restricted_visibilities(state, phase_grid)
    return VisibilityReport(
        v1=v1,
        v12=v12,
        w12_tilde=w_tilde,
        w12=w,
        residual_tilde=v1 * v1 + w_tilde * w_tilde - 1.0,
        residual_w=v1 * v1 + w * w - 1.0,
        method=VisibilityMethod.NUMERIC,
        v1_restricted=restricted[0],
        v12_restricted=restricted[1],
    )
