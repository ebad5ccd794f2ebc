"""Two-spin anisotropic Heisenberg XY chain in a transverse field.

    H = J (S1+ S2- + S1- S2+) + J gamma (S1+ S2+ + S1- S2-) + B (S1z + S2z)

with S+- the spin-1/2 ladder operators and S^z = sigma^z / 2. In the basis
|00>, |01>, |10>, |11> (|0> = spin up) the matrix is real symmetric with
diagonal (B, 0, 0, -B), H[01,10] = J and H[00,11] = J gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class ChainParams:
    J: float = 1.0
    gamma: float = 0.0
    B: float = 0.0

    def __post_init__(self):
        if self.J == 0:
            raise ValueError("coupling J must be nonzero")

    @property
    def eta(self) -> float:
        """Outer-block energy scale sqrt(B^2 + J^2 gamma^2)."""
        return math.hypot(self.B, self.J * self.gamma)


@dataclass(frozen=True)
class ThermalPoint:
    params: ChainParams
    kT: float

    def __post_init__(self):
        if not self.kT >= 0:
            raise ValueError(f"temperature kT must be >= 0, got {self.kT}")


@dataclass(frozen=True)
class Spectrum:
    """Eigenpairs in the order (+J, -J, +eta, -eta)."""

    pairs: tuple[tuple[float, np.ndarray], ...]
    eta: float

    @property
    def energies(self) -> np.ndarray:
        return np.array([e for e, _ in self.pairs])

    @property
    def vectors(self) -> np.ndarray:
        """Eigenvectors as columns, matching :attr:`energies`."""
        return np.column_stack([v for _, v in self.pairs])


def hamiltonian(p: ChainParams) -> np.ndarray:
    J, g, B = p.J, p.gamma, p.B
    return np.array(
        [
            [B, 0, 0, J * g],
            [0, 0, J, 0],
            [0, J, 0, 0],
            [J * g, 0, 0, -B],
        ],
        dtype=complex,
    )


def analytic_spectrum(p: ChainParams) -> Spectrum:
    """Closed-form eigenpairs of :func:`hamiltonian`.

    The inner block gives (|01> +- |10>)/sqrt(2) at energies +-J. The outer
    block gives, at energies +-eta,

        psi_{3,4} = u+- (|11> +- J gamma / (eta -+ B) |00>),
        u+- = (eta -+ B) / sqrt(J^2 gamma^2 + (eta -+ B)^2),

    which is evaluated in the equivalent form (J gamma |00> + (eta - B) |11>) / norm
    so that it stays finite as eta -> |B|. For J gamma = 0 the outer block is
    already diagonal and the eigenvectors are |00> (energy B) and |11> (energy -B).
    """
    J, B = p.J, p.B
    jg = p.J * p.gamma
    eta = p.eta

    plus = np.array([0, _SQRT_HALF, _SQRT_HALF, 0], dtype=complex)
    minus = np.array([0, _SQRT_HALF, -_SQRT_HALF, 0], dtype=complex)

    up = np.array([1, 0, 0, 0], dtype=complex)
    down = np.array([0, 0, 0, 1], dtype=complex)
    if jg == 0:
        psi3, psi4 = (up, down) if B >= 0 else (down, up)
    else:
        # eta - B and eta + B without cancellation
        if B >= 0:
            e_plus = eta + B
            e_minus = jg * jg / e_plus
        else:
            e_minus = eta - B
            e_plus = jg * jg / e_minus
        psi3 = np.array([jg, 0, 0, e_minus], dtype=complex) / math.hypot(jg, e_minus)
        psi4 = np.array([-jg, 0, 0, e_plus], dtype=complex) / math.hypot(jg, e_plus)

    pairs = ((J, plus), (-J, minus), (eta, psi3), (-eta, psi4))
    return Spectrum(pairs, eta)


def gibbs_weights(energies, kT: float) -> np.ndarray:
    """Normalized Boltzmann weights; kT = 0 gives equal weight on the ground manifold."""
    e = np.asarray(energies, dtype=float)
    if not kT >= 0:
        raise ValueError(f"temperature kT must be >= 0, got {kT}")
    shifted = e - e.min()
    if kT == 0:
        gtol = 1e-9 * max(1.0, abs(float(e.min())))
        w = (shifted <= gtol).astype(float)
    else:
        w = np.exp(-shifted / kT)
    return w / w.sum()


def thermal_state(tp: ThermalPoint) -> np.ndarray:
    """Gibbs state exp(-H/kT)/Z built from the analytic spectrum.

    At kT = 0 this is the equal mixture over the ground manifold, the
    kT -> 0+ limit of the Gibbs state.
    """
    if not isinstance(tp, ThermalPoint):
        raise TypeError("thermal_state expects a ThermalPoint")
    spec = analytic_spectrum(tp.params)
    w = gibbs_weights(spec.energies, tp.kT)
    v = spec.vectors
    return (v * w) @ v.conj().T


def critical_field(p: ChainParams) -> float:
    """Field J sqrt(1 - gamma^2) at which the ground state changes."""
    if abs(p.gamma) > 1:
        raise ValueError(f"critical field is defined for |gamma| <= 1, got gamma={p.gamma}")
    return p.J * math.sqrt(1.0 - p.gamma**2)
