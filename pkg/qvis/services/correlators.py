"""
Outcome distributions after local or global unitaries, the correlator families

    pbar(j,k) = p(j,k) - p1(j) p2(k) + 1/4        (local U1 (x) U2)
    cbar(j,k) = p(j,k) - p_sep(j,k) + 1/4         (global U, p_sep from rho1 (x) rho2)

and the Kolmogorov distance. Outcomes are indexed 00, 01, 10, 11.
"""
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from qvis.core.config import settings
from qvis.core.errors import DimensionMismatchError, InvalidDistributionError
from qvis.services import states
from qvis.services.states import TwoQubitPureState
from qvis.utils import linalg
from qvis.utils.linalg import ComplexMatrix

_ENTRY_SLACK = 1e-12


@dataclass(frozen=True)
class _Distribution:
    values: NDArray[np.float64]

    size = 0

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64).reshape(-1)
        if vals.shape != (self.size,):
            raise InvalidDistributionError(
                f"{type(self).__name__} needs {self.size} entries, got {vals.size}"
            )
        if np.any(vals < -_ENTRY_SLACK) or np.any(vals > 1.0 + _ENTRY_SLACK):
            raise InvalidDistributionError(
                f"{type(self).__name__} has entries outside [0, 1]: {vals.tolist()}",
                {"values": vals.tolist()},
            )
        total = float(vals.sum())
        if abs(total - 1.0) > settings.VALIDATION_TOLERANCE:
            raise InvalidDistributionError(
                f"{type(self).__name__} sums to {total:.15g}", {"values": vals.tolist()}
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __getitem__(self, index) -> float:
        return float(self.values[index])


class ProbDistribution2(_Distribution):
    size = 2


class CorrelatorDistribution(_Distribution):
    """Four outcomes; `at(j, k)` reads entry |jk>."""

    size = 4

    def at(self, j: int, k: int) -> float:
        return float(self.values[2 * j + k])

    def marginal_first(self) -> NDArray[np.float64]:
        return self.values.reshape(2, 2).sum(axis=1)

    def marginal_second(self) -> NDArray[np.float64]:
        return self.values.reshape(2, 2).sum(axis=0)


MIXED_ONE_QUBIT = ProbDistribution2(np.full(2, 0.5))

Distribution = Union[_Distribution, ArrayLike]


def diagonal_after(rho: ComplexMatrix, u: ComplexMatrix) -> NDArray[np.float64]:
    """Diagonal of U rho U^dag, i.e. computational-basis probabilities."""
    return np.real(np.sum((u @ rho) * u.conj(), axis=1))


def outcome_probs_local(state: TwoQubitPureState, u1: ArrayLike, u2: ArrayLike) -> CorrelatorDistribution:
    u1 = linalg.ensure_unitary(u1, dim=2)
    u2 = linalg.ensure_unitary(u2, dim=2)
    psi = linalg.tensor(u1, u2) @ state.amplitudes
    return CorrelatorDistribution(np.abs(psi) ** 2)


def outcome_probs_global(rho: ArrayLike, u: ArrayLike) -> CorrelatorDistribution:
    rho = linalg.ensure_density(rho, dim=4)
    u = linalg.ensure_unitary(u, dim=4)
    return CorrelatorDistribution(diagonal_after(rho, u))


def one_body_probs(state: TwoQubitPureState, u1: ArrayLike) -> ProbDistribution2:
    """p1(j) for the first qubit after U1."""
    u1 = linalg.ensure_unitary(u1, dim=2)
    rho1 = states.reduced(state, 1)
    return ProbDistribution2(diagonal_after(rho1, u1))


def pbar(state: TwoQubitPureState, u1: ArrayLike, u2: ArrayLike) -> CorrelatorDistribution:
    p = outcome_probs_local(state, u1, u2)
    # marginals by summing the joint distribution
    joint = p.values.reshape(2, 2)
    p1, p2 = joint.sum(axis=1), joint.sum(axis=0)
    return CorrelatorDistribution((joint - np.outer(p1, p2) + 0.25).reshape(-1))


def cbar(state: TwoQubitPureState, u: ArrayLike) -> CorrelatorDistribution:
    u = linalg.ensure_unitary(u, dim=4)
    return cbar_from(states.density(state), states.separable_reference(state), u)


def cbar_from(rho: ComplexMatrix, rho_sep: ComplexMatrix, u: ComplexMatrix) -> CorrelatorDistribution:
    """cbar for precomputed rho and rho_sep; `u` is trusted to be unitary."""
    p = diagonal_after(rho, u)
    p_sep = diagonal_after(rho_sep, u)
    return CorrelatorDistribution(p - p_sep + 0.25)


def _as_distribution(d: Distribution) -> _Distribution:
    if isinstance(d, _Distribution):
        return d
    vals = np.asarray(d, dtype=np.float64).reshape(-1)
    kind = {2: ProbDistribution2, 4: CorrelatorDistribution}.get(vals.size)
    if kind is None:
        raise InvalidDistributionError(f"distributions have 2 or 4 outcomes, got {vals.size}")
    return kind(vals)


def kolmogorov(p: Distribution, q: Distribution) -> float:
    """Half the L1 distance between two distributions of equal size.

    Raw arrays are validated as distributions first. The optimizer objectives
    compute the same sum on their own arrays and skip this check.
    """
    a = _as_distribution(p).values
    b = _as_distribution(q).values
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"distributions have different sizes ({a.size} vs {b.size})", {"sizes": [a.size, b.size]}
        )
    return float(0.5 * np.sum(np.abs(a - b)))
