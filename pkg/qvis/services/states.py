"""
Two-qubit pure states: construction, Schmidt decomposition, reduced states,
concurrence, purity and Haar-random sampling.
"""
import logging
from dataclasses import dataclass
from typing import List

import numpy as np
from numpy.typing import ArrayLike, NDArray

from qvis.core.config import settings
from qvis.core.errors import ConsistencyError, InvalidStateError, UsageError
from qvis.utils import linalg
from qvis.utils.linalg import ComplexMatrix

logger = logging.getLogger(__name__)

_SIGMA_YY = linalg.tensor(linalg.PAULI_Y, linalg.PAULI_Y)


@dataclass(frozen=True)
class TwoQubitPureState:
    """Amplitudes in the order |00>, |01>, |10>, |11>."""

    amplitudes: NDArray[np.complex128]

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape != (4,):
            raise InvalidStateError(f"a two-qubit state needs 4 amplitudes, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise InvalidStateError("amplitudes must be finite", {"amplitudes": [str(a) for a in amps]})
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > settings.VALIDATION_TOLERANCE:
            raise InvalidStateError(f"state is not normalized (sum |a|^2 = {norm_sq:.12g})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def coefficient_matrix(self) -> ComplexMatrix:
        """M[j, k] = amplitude of |jk>."""
        return self.amplitudes.reshape(2, 2)

    def apply(self, u: ArrayLike) -> "TwoQubitPureState":
        """State after a 4x4 unitary."""
        u = linalg.ensure_unitary(u, dim=4)
        return TwoQubitPureState(u @ self.amplitudes)

    def apply_local(self, u1: ArrayLike, u2: ArrayLike) -> "TwoQubitPureState":
        u1 = linalg.ensure_unitary(u1, dim=2)
        u2 = linalg.ensure_unitary(u2, dim=2)
        return self.apply(linalg.tensor(u1, u2))

    def as_pairs(self) -> List[List[float]]:
        """[re, im] pairs, the format StateSpec reads back."""
        return [[float(a.real), float(a.imag)] for a in self.amplitudes]


@dataclass(frozen=True)
class SchmidtData:
    """Schmidt coefficients (lambda0 >= lambda1) and local bases as matrix columns."""

    lambda0: float
    lambda1: float
    basis_eta: ComplexMatrix
    basis_xi: ComplexMatrix

    @property
    def product(self) -> float:
        return self.lambda0 * self.lambda1

    def reconstruct(self) -> NDArray[np.complex128]:
        """Sum_j sqrt(lambda_j) |eta_j>|xi_j> as a 4-vector."""
        out = np.zeros(4, dtype=np.complex128)
        for lam, j in ((self.lambda0, 0), (self.lambda1, 1)):
            out += np.sqrt(lam) * np.kron(self.basis_eta[:, j], self.basis_xi[:, j])
        return out

    def reduced_first(self) -> ComplexMatrix:
        """rho_1 = sum_j lambda_j |eta_j><eta_j|."""
        eta = self.basis_eta
        return (eta * np.array([self.lambda0, self.lambda1])) @ eta.conj().T


def from_amplitudes(amps: ArrayLike) -> TwoQubitPureState:
    vec = np.asarray(amps, dtype=np.complex128).reshape(-1)
    if vec.shape != (4,):
        raise InvalidStateError(f"a two-qubit state needs 4 amplitudes, got {vec.size}")
    if not np.all(np.isfinite(vec)):
        raise InvalidStateError("amplitudes must be finite", {"amplitudes": [str(a) for a in vec]})
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise InvalidStateError("zero vector is not a state")
    if abs(norm - 1.0) > settings.NORMALIZATION_TOLERANCE:
        raise InvalidStateError(
            f"amplitudes have norm {norm:.12g}; refusing to renormalize a deviation above "
            f"{settings.NORMALIZATION_TOLERANCE:g}",
            {"norm": norm},
        )
    return TwoQubitPureState(vec / norm)


def from_schmidt_value(lambda0: float) -> TwoQubitPureState:
    """Canonical representative sqrt(l0)|00> + sqrt(1-l0)|11>."""
    if not 0.5 <= lambda0 <= 1.0:
        raise InvalidStateError(f"lambda0 must lie in [0.5, 1], got {lambda0!r}", {"lambda0": lambda0})
    return TwoQubitPureState(np.array([np.sqrt(lambda0), 0.0, 0.0, np.sqrt(1.0 - lambda0)]))


def schmidt(state: TwoQubitPureState) -> SchmidtData:
    m = state.coefficient_matrix
    dec = linalg.eig_hermitian(m @ m.conj().T)
    total = linalg.trace(m @ m.conj().T).real
    lam0 = float(dec.eigenvalues[0]) / total
    # lambda0 * lambda1 = |det M|^2 keeps lambda1 relatively accurate when it is tiny
    lam1 = min(float(abs(np.linalg.det(m)) ** 2) / (total * total) / lam0, lam0)
    if lam1 < settings.SEPARABLE_CUTOFF:
        lam0, lam1 = 1.0, 0.0

    eta = dec.eigenvectors
    # |xi_j> = M^T conj(eta_j) / sqrt(lambda_j), so that the coefficients are real
    xi = np.zeros((2, 2), dtype=np.complex128)
    raw = m.T @ eta.conj()
    xi[:, 0] = raw[:, 0] / np.linalg.norm(raw[:, 0])
    if lam1 > 0.0:
        xi[:, 1] = raw[:, 1] / np.linalg.norm(raw[:, 1])
    else:
        # complete the basis with the vector orthogonal to xi_0
        x0 = xi[:, 0]
        xi[:, 1] = np.array([-np.conj(x0[1]), np.conj(x0[0])])
    return SchmidtData(lambda0=lam0, lambda1=lam1, basis_eta=eta, basis_xi=xi)


def density(state: TwoQubitPureState) -> ComplexMatrix:
    psi = state.amplitudes
    return np.outer(psi, psi.conj())


def reduced(state: TwoQubitPureState, keep: int) -> ComplexMatrix:
    return linalg.partial_trace(density(state), keep)


def separable_reference(state: TwoQubitPureState) -> ComplexMatrix:
    """rho_1 (x) rho_2 built from the two partial traces."""
    rho = density(state)
    return linalg.tensor(linalg.partial_trace(rho, 1), linalg.partial_trace(rho, 2))


def spin_flip_concurrence(state: TwoQubitPureState) -> float:
    """|<psi| sigma_y (x) sigma_y |psi*>|; the sign convention of sigma_y drops out."""
    psi = state.amplitudes
    return float(abs(psi.conj() @ (_SIGMA_YY @ psi.conj())))


def concurrence(state: TwoQubitPureState) -> float:
    sd = schmidt(state)
    value = 2.0 * np.sqrt(sd.product)
    flip = spin_flip_concurrence(state)
    tol = settings.CROSS_CHECK_TOLERANCE
    if sd.lambda1 == 0.0:
        # clamped to separable: the spin-flip form keeps up to 2 sqrt(cutoff)
        tol = max(tol, 2.0 * np.sqrt(settings.SEPARABLE_CUTOFF))
    if abs(value - flip) > tol:
        raise ConsistencyError(
            f"concurrence from Schmidt data ({value:.15g}) disagrees with spin-flip form ({flip:.15g})",
            {"schmidt": value, "spin_flip": flip},
        )
    return float(value)


def purity(rho_reduced: ArrayLike) -> float:
    rho = linalg.ensure_density(rho_reduced, dim=2)
    return linalg.trace(rho @ rho).real


def maximally_mixed() -> ComplexMatrix:
    return linalg.identity(2) / 2.0


def fidelity(rho: ArrayLike, sigma: ArrayLike) -> float:
    """Root fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)) of two qubit density matrices."""
    rho = linalg.ensure_density(rho, dim=2)
    sigma = linalg.ensure_density(sigma, dim=2)
    root = linalg.sqrtm_psd(rho)
    inner = root @ sigma @ root
    inner = 0.5 * (inner + inner.conj().T)
    return linalg.trace(linalg.sqrtm_psd(inner)).real


def sample_haar(seed: int, count: int) -> List[TwoQubitPureState]:
    """Haar-random pure states from normalized complex Gaussian amplitudes."""
    if count < 1:
        raise UsageError(f"count must be at least 1, got {count}", {"count": count})
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((count, 4)) + 1j * rng.standard_normal((count, 4))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    logger.debug(f"Sampled {count} Haar-random states (seed={seed})")
    return [TwoQubitPureState(row) for row in z]
