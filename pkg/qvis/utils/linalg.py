"""
Small dense complex linear algebra for one- and two-qubit operators.

Basis order is fixed everywhere as |00>, |01>, |10>, |11>, with the first
tensor factor acting on qubit 1. Matrices are numpy complex128 arrays; every
function returns a new array and never mutates its inputs.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from qvis.core.config import settings
from qvis.core.errors import (
    ConvergenceError,
    DimensionMismatchError,
    InvalidDensityMatrixError,
    NotHermitianError,
    NotUnitaryError,
)

ComplexMatrix = NDArray[np.complex128]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues sorted descending; eigenvectors[:, j] belongs to eigenvalues[j]."""

    eigenvalues: NDArray[np.float64]
    eigenvectors: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a: ArrayLike) -> ComplexMatrix:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatchError(f"expected a 2-D matrix, got shape {m.shape}", {"shape": m.shape})
    return m


def identity(n: int) -> ComplexMatrix:
    return np.eye(n, dtype=np.complex128)


def matmul(a: ArrayLike, b: ArrayLike) -> ComplexMatrix:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}",
            {"left": a.shape, "right": b.shape},
        )
    return a @ b


def adjoint(a: ArrayLike) -> ComplexMatrix:
    return as_matrix(a).conj().T


def tensor(a: ArrayLike, b: ArrayLike) -> ComplexMatrix:
    """Kronecker product; `a` acts on the first (leftmost) qubit."""
    return np.kron(as_matrix(a), as_matrix(b))


def trace(a: ArrayLike) -> complex:
    m = as_matrix(a)
    _require_square(m)
    return complex(np.trace(m))


def hermiticity_error(a: ComplexMatrix) -> float:
    return float(np.max(np.abs(a - a.conj().T)))


def unitarity_error(u: ComplexMatrix) -> float:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))

def is_unitary(u: ArrayLike, tol: Optional[float] = None) -> bool:
    m = as_matrix(u)
    if m.shape[0] != m.shape[1]:
        return False
    return unitarity_error(m) <= (settings.VALIDATION_TOLERANCE if tol is None else tol)


def ensure_unitary(u: ArrayLike, dim: Optional[int] = None) -> ComplexMatrix:
    m = as_matrix(u)
    if dim is not None and m.shape != (dim, dim):
        raise DimensionMismatchError(f"expected a {dim}x{dim} unitary, got {m.shape}", {"shape": m.shape})
    if not is_unitary(m):
        err = unitarity_error(m) if m.shape[0] == m.shape[1] else float("inf")
        raise NotUnitaryError(f"matrix is not unitary (max |U^dag U - I| = {err:.3e})", {"error": err})
    return m


def ensure_density(rho: ArrayLike, dim: Optional[int] = None) -> ComplexMatrix:
    """Validate a density matrix: square, Hermitian, unit trace, positive semidefinite."""
    m = as_matrix(rho)
    tol = settings.VALIDATION_TOLERANCE
    if m.shape[0] != m.shape[1] or (dim is not None and m.shape[0] != dim):
        raise InvalidDensityMatrixError(f"density matrix has shape {m.shape}", {"property": "shape"})
    if not np.all(np.isfinite(m)):
        raise InvalidDensityMatrixError("density matrix has non-finite entries", {"property": "finite"})
    herm = hermiticity_error(m)
    if herm > tol:
        raise InvalidDensityMatrixError(
            f"density matrix is not Hermitian (deviation {herm:.3e})", {"property": "hermitian"}
        )
    tr = trace(m)
    if abs(tr - 1.0) > tol:
        raise InvalidDensityMatrixError(f"density matrix has trace {tr.real:.12g}", {"property": "trace"})
    lowest = eig_hermitian(_hermitize(m)).eigenvalues[-1]
    if lowest < -tol:
        raise InvalidDensityMatrixError(
            f"density matrix has negative eigenvalue {lowest:.3e}", {"property": "positivity"}
        )
    return m


def partial_trace(rho: ArrayLike, keep: int) -> ComplexMatrix:
    """Reduced state of qubit `keep` (1 or 2) of a two-qubit density matrix."""
    if keep not in (1, 2):
        raise DimensionMismatchError(f"keep must be 1 or 2, got {keep!r}", {"keep": keep})
    m = ensure_density(rho, dim=4)
    return _partial_trace(m, keep)


def _partial_trace(m: ComplexMatrix, keep: int) -> ComplexMatrix:
    t = m.reshape(2, 2, 2, 2)
    if keep == 1:
        return np.einsum("ijkj->ik", t)
    return np.einsum("jijk->ik", t)


def eig_hermitian(a: ArrayLike) -> EigenDecomposition:
    """Cyclic complex Jacobi eigensolver for small Hermitian matrices.

    Sweeps over all (p, q) pairs, annihilating a[p, q] with a unitary plane
    rotation, until the off-diagonal Frobenius norm drops below SOLVER_TOLERANCE.
    """
    m = as_matrix(a)
    _require_square(m)
    if not np.all(np.isfinite(m)):
        raise NotHermitianError("matrix has non-finite entries", {"deviation": None})
    herm = hermiticity_error(m)
    if herm > settings.HERMITIAN_TOLERANCE:
        raise NotHermitianError(f"matrix is not Hermitian (deviation {herm:.3e})", {"deviation": herm})

    n = m.shape[0]
    work = _hermitize(m)
    vectors = np.eye(n, dtype=np.complex128)
    tol = settings.SOLVER_TOLERANCE

    off = _off_norm(work)
    sweeps = 0
    while not off < tol:
        if sweeps >= settings.JACOBI_MAX_SWEEPS:
            raise ConvergenceError(
                f"Jacobi did not converge in {settings.JACOBI_MAX_SWEEPS} sweeps", residual=off
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                tau = (work[q, q].real - work[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.eye(n, dtype=np.complex128)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s * phase
                rot[q, p] = -s * np.conj(phase)
                work = rot.conj().T @ work @ rot
                # rotation leaves tiny asymmetric round-off behind
                work = _hermitize(work)
                vectors = vectors @ rot
        sweeps += 1
        off = _off_norm(work)

    values = np.real(np.diag(work))
    order = np.argsort(-values, kind="stable")
    return EigenDecomposition(eigenvalues=values[order].copy(), eigenvectors=vectors[:, order].copy())


def sqrtm_psd(a: ArrayLike) -> ComplexMatrix:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues below SEPARABLE_CUTOFF count as zero.
    """
    dec = eig_hermitian(a)
    values = np.where(dec.eigenvalues < settings.SEPARABLE_CUTOFF, 0.0, dec.eigenvalues)
    roots = np.sqrt(values)
    v = dec.eigenvectors
    return (v * roots) @ v.conj().T


def _hermitize(m: ComplexMatrix) -> ComplexMatrix:
    return 0.5 * (m + m.conj().T)


def _off_norm(m: ComplexMatrix) -> float:
    off = m - np.diag(np.diag(m))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def _require_square(m: ComplexMatrix) -> None:
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got {m.shape}", {"shape": m.shape})
