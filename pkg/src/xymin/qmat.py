"""Small dense linear algebra for two-qubit states.

Everything here works on plain ``numpy`` arrays of shape (2, 2) or (4, 4).
The two-qubit basis is ordered |00>, |01>, |10>, |11> with qubit A leftmost,
and |0> is the S^z = +1/2 state. Entropies are measured in bits.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10


class NotHermitianError(ValueError):
    """Raised when a matrix fails the Hermiticity check."""

    def __init__(self, asymmetry: float):
        super().__init__(f"matrix is not Hermitian: max |M - M^dagger| = {asymmetry:.3e}")
        self.asymmetry = asymmetry


class InvalidStateError(ValueError):
    """Raised when an array is not a valid density matrix."""


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``m`` as a complex array, checking it is square and Hermitian.

    The tolerance is absolute for entries of order one and scales with the
    largest entry otherwise.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    asym = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if asym > tol * scale:
        raise NotHermitianError(asym)
    return m


def as_density_matrix(rho, dim: int | None = None) -> np.ndarray:
    """Validate ``rho`` as a density matrix and return it as a complex array.

    Checks Hermiticity, unit trace within 1e-10 and eigenvalues >= -1e-10.
    """
    rho = as_hermitian(rho)
    if dim is not None and rho.shape != (dim, dim):
        raise InvalidStateError(f"expected a {dim}x{dim} density matrix, got shape {rho.shape}")
    if rho.shape[0] not in (2, 4):
        raise InvalidStateError(f"only 2x2 and 4x4 density matrices are supported, got {rho.shape}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"trace is {tr.real:.12g}, expected 1")
    lam_min = float(np.linalg.eigvalsh(rho)[0])
    if lam_min < -PSD_TOL:
        raise InvalidStateError(f"matrix is not positive semidefinite: smallest eigenvalue {lam_min:.3e}")
    return rho


def eig_hermitian(m) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises :class:`NotHermitianError` carrying the maximum asymmetry when the
    input is not Hermitian within tolerance.
    """
    m = as_hermitian(m)
    # LAPACK only reads one triangle; symmetrizing keeps the result independent of which.
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return EigenDecomposition(w, v)


def partial_trace(rho, keep: str = "A") -> np.ndarray:
    """Reduced state of one qubit of a two-qubit density matrix.

    Parameters
    ----------
    rho : array_like, shape (4, 4)
        Two-qubit density matrix.
    keep : {"A", "B"}
        Which qubit to keep.
    """
    rho = as_density_matrix(rho, dim=4)
    r = rho.reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ijkj->ik", r)
    if keep == "B":
        return np.einsum("ijil->jl", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def _entropy_from_eigenvalues(lam: np.ndarray) -> float:
    if lam.min() < -PSD_TOL:
        raise InvalidStateError(f"negative eigenvalue {lam.min():.3e} below tolerance")
    lam = np.clip(lam, 0.0, None)
    nz = lam[lam > 0]
    return float(-np.sum(nz * np.log2(nz)))


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy -Tr(rho log2 rho), in bits."""
    rho = as_density_matrix(rho)
    return _entropy_from_eigenvalues(np.linalg.eigvalsh(rho))


def shannon_entropy(p) -> float:
    """Shannon entropy of a probability vector in bits, with 0 log 0 = 0."""
    return _entropy_from_eigenvalues(np.asarray(p, dtype=float))


def mutual_information(rho) -> float:
    """Quantum mutual information S(rho_A) + S(rho_B) - S(rho) in bits."""
    rho = as_density_matrix(rho, dim=4)
    return (
        von_neumann_entropy(partial_trace(rho, "A"))
        + von_neumann_entropy(partial_trace(rho, "B"))
        - von_neumann_entropy(rho)
    )
