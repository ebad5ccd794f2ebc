"""Measurement-induced nonlocality of two-qubit states.

Two quantifiers are provided, both maximized over projective measurements on
qubit A that leave the reduced state rho_A unchanged:

* :func:`geometric_min` -- squared Hilbert-Schmidt distance between rho and
  the measured state, evaluated in closed form from the Bloch data.
* :func:`entropic_min` -- entropy increase S(Pi(rho)) - S(rho), in bits.

Each has a brute-force companion (``*_oracle``) that scans a grid of
measurement directions and evaluates the defining expression directly with
explicit projectors.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .qmat import (
    InvalidStateError,
    as_density_matrix,
    partial_trace,
    von_neumann_entropy,
)

DEGENERACY_TOL = 1e-9
# Band above DEGENERACY_TOL in which both closed-form branches are evaluated.
_DUAL_BRANCH_FACTOR = 1e3

I2 = np.eye(2, dtype=complex)
PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
# PAULI_A[i] = sigma_i (x) I, PAULI_B[j] = I (x) sigma_j, PAULI_AB[i, j] = sigma_i (x) sigma_j
PAULI_A = np.array([np.kron(s, I2) for s in PAULI])
PAULI_B = np.array([np.kron(I2, s) for s in PAULI])
PAULI_AB = np.array([[np.kron(s, t) for t in PAULI] for s in PAULI])


class Branch(str, enum.Enum):
    NONDEGENERATE = "nondegenerate-spectral"
    DEGENERATE = "degenerate-optimized"


def _canonical(n: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    # n and -n give the same pair of projectors; keep z >= 0, then x >= 0, then y >= 0.
    for k in (2, 0, 1):
        if n[k] > tol:
            return n
        if n[k] < -tol:
            return -n
    return n


@dataclass(frozen=True)
class MeasurementDirection:
    """Unit vector n on the Bloch sphere, defining Pi_+- = (I +- n.sigma)/2 on qubit A.

    The vector is normalized and canonicalized to the upper hemisphere on
    construction, since n and -n describe the same measurement.
    """

    n: tuple[float, float, float]

    def __post_init__(self):
        v = np.asarray(self.n, dtype=float)
        if v.shape != (3,):
            raise ValueError(f"direction must be a 3-vector, got shape {v.shape}")
        norm = float(np.linalg.norm(v))
        if norm == 0.0 or not math.isfinite(norm):
            raise ValueError("direction must be a finite nonzero vector")
        v = _canonical(v / norm)
        object.__setattr__(self, "n", tuple(float(c) for c in v))

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "MeasurementDirection":
        return cls(spherical_to_cartesian(theta, phi))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.n)

    def projectors(self) -> np.ndarray:
        """The two single-qubit projectors, shape (2, 2, 2)."""
        return _projectors(self.vector[None, :])[0]


Z_AXIS = MeasurementDirection((0.0, 0.0, 1.0))


@dataclass(frozen=True)
class BlochForm:
    """Local Bloch vectors ``x`` (qubit A), ``y`` (qubit B) and correlation matrix ``T``."""

    x: np.ndarray
    y: np.ndarray
    T: np.ndarray


@dataclass(frozen=True)
class MinResult:
    value: float
    optimal_direction: MeasurementDirection
    branch: Branch


@dataclass(frozen=True)
class SpectralAxisOnly:
    """Only the eigenbasis measurement of rho_A along ``direction`` is invariant."""

    direction: MeasurementDirection


@dataclass(frozen=True)
class FullSphere:
    """rho_A is maximally mixed, so every direction is an invariant measurement."""


@dataclass(frozen=True)
class GridSpec:
    """Measurement grid uniform in cos(theta) and phi."""

    n_theta: int = 200
    n_phi: int = 400

    def __post_init__(self):
        if self.n_theta < 2 or self.n_phi < 1:
            raise ValueError(f"grid too small: {self.n_theta}x{self.n_phi}")


def spherical_to_cartesian(theta, phi) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def sphere_grid(grid: GridSpec) -> np.ndarray:
    """Unit vectors on a grid uniform in cos(theta) in [-1, 1] and phi in [0, 2pi)."""
    cos_t = np.linspace(-1.0, 1.0, grid.n_theta)
    phi = np.arange(grid.n_phi) * (2 * np.pi / grid.n_phi)
    theta = np.arccos(cos_t)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    return spherical_to_cartesian(tt.ravel(), pp.ravel())


def _projectors(ns: np.ndarray) -> np.ndarray:
    """Projectors (I +- n.sigma)/2 for a batch of directions, shape (N, 2, 2, 2)."""
    ndots = np.einsum("ni,ijk->njk", ns.astype(complex), PAULI)
    return 0.5 * np.stack([I2 + ndots, I2 - ndots], axis=1)


def _measure_batch(rho: np.ndarray, ns: np.ndarray) -> np.ndarray:
    """sum_k (P_k (x) I) rho (P_k (x) I) for each direction in ``ns``; shape (N, 4, 4)."""
    p = _projectors(ns)
    pa = np.zeros((len(ns), 2, 4, 4), dtype=complex)
    # P (x) I: P[a, b] on the (2a + c, 2b + c) entries
    pa[..., 0::2, 0::2] = p
    pa[..., 1::2, 1::2] = p
    out = (pa @ rho @ pa).sum(axis=1)
    return 0.5 * (out + np.conj(np.swapaxes(out, -1, -2)))


def _entropies(mats: np.ndarray) -> np.ndarray:
    lam = np.clip(np.linalg.eigvalsh(mats), 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam > 0, lam * np.log2(np.where(lam > 0, lam, 1.0)), 0.0)
    return -terms.sum(axis=-1)


def bloch_decompose(rho) -> BlochForm:
    """Bloch vectors and correlation matrix of a two-qubit state.

    x_i = Tr(rho sigma_i (x) I), y_j = Tr(rho I (x) sigma_j),
    T_ij = Tr(rho sigma_i (x) sigma_j).
    """
    rho = as_density_matrix(rho, dim=4)
    x = np.einsum("iab,ba->i", PAULI_A, rho).real
    y = np.einsum("iab,ba->i", PAULI_B, rho).real
    T = np.einsum("ijab,ba->ij", PAULI_AB, rho).real
    return BlochForm(x, y, T)


def bloch_compose(b: BlochForm) -> np.ndarray:
    """Inverse of :func:`bloch_decompose`.

    Raises
    ------
    InvalidStateError
        If the recomposed matrix is not positive semidefinite.
    """
    x = np.asarray(b.x, dtype=float)
    y = np.asarray(b.y, dtype=float)
    T = np.asarray(b.T, dtype=float)
    rho = 0.25 * (
        np.eye(4, dtype=complex)
        + np.einsum("i,iab->ab", x, PAULI_A)
        + np.einsum("j,jab->ab", y, PAULI_B)
        + np.einsum("ij,ijab->ab", T, PAULI_AB)
    )
    lam_min = float(np.linalg.eigvalsh(rho)[0])
    if lam_min < -1e-10:
        raise InvalidStateError(f"Bloch data is not a state: most negative eigenvalue {lam_min:.6g}")
    return rho


def invariant_measurement_set(rho_a, degeneracy_tol: float = DEGENERACY_TOL):
    """Projective measurements on a qubit that leave ``rho_a`` unchanged.

    Returns :class:`SpectralAxisOnly` with the eigenbasis axis when ``rho_a``
    is nondegenerate, otherwise :class:`FullSphere`.
    """
    rho_a = as_density_matrix(rho_a, dim=2)
    x = np.einsum("iab,ba->i", PAULI, rho_a).real
    norm = float(np.linalg.norm(x))
    if norm > degeneracy_tol:
        return SpectralAxisOnly(MeasurementDirection(tuple(x / norm)))
    return FullSphere()


def apply_local_measurement(rho, d: MeasurementDirection) -> np.ndarray:
    """Nonselective projective measurement of qubit A along ``d``."""
    rho = as_density_matrix(rho, dim=4)
    return _measure_batch(rho, d.vector[None, :])[0]


def _geometric_closed_form(b: BlochForm, degeneracy_tol: float):
    x, T = b.x, b.T
    tt = T @ T.T
    trace = float(np.trace(tt))
    w, v = np.linalg.eigh(tt)
    degenerate = (trace - w[0]) / 4, v[:, 0]
    norm = float(np.linalg.norm(x))
    if norm <= degeneracy_tol:
        return degenerate, Branch.DEGENERATE
    axis = x / norm
    spectral = (trace - float(axis @ tt @ axis)) / 4, axis
    if norm <= degeneracy_tol * _DUAL_BRANCH_FACTOR and degenerate[0] > spectral[0]:
        return degenerate, Branch.DEGENERATE
    return spectral, Branch.NONDEGENERATE


def geometric_min(rho, degeneracy_tol: float = DEGENERACY_TOL) -> MinResult:
    """Geometric MIN: max over invariant measurements of ||rho - Pi(rho)||_2^2.

    With x, T the Bloch data of ``rho``::

        N = (Tr(T T^t) - x^t T T^t x / |x|^2) / 4     if |x| > tol
        N = (Tr(T T^t) - lambda_min(T T^t)) / 4       otherwise

    Close above the threshold both branches are evaluated and the larger is
    kept, because the first branch is ill-conditioned as |x| -> 0.
    """
    (value, axis), branch = _geometric_closed_form(bloch_decompose(rho), degeneracy_tol)
    return MinResult(float(value), MeasurementDirection(tuple(axis)), branch)


def _oracle_directions(rho: np.ndarray, grid: GridSpec) -> np.ndarray:
    admissible = invariant_measurement_set(partial_trace(rho, "A"))
    if isinstance(admissible, SpectralAxisOnly):
        return admissible.direction.vector[None, :]
    return sphere_grid(grid)


def _dephase_batch(rho: np.ndarray, ns: np.ndarray) -> np.ndarray:
    # Pi_n(rho) = (rho + U rho U) / 2 with U = (n.sigma) (x) I
    u = np.einsum("ni,iab->nab", ns.astype(complex), PAULI_A)
    return 0.5 * (rho[None] + u @ rho @ u)


def geometric_min_oracle(rho, grid: GridSpec = GridSpec()) -> float:
    """Brute-force geometric MIN from explicit projectors over a direction grid.

    When rho_A is nondegenerate the grid collapses to the single invariant axis.
    """
    rho = as_density_matrix(rho, dim=4)
    ns = _oracle_directions(rho, grid)
    best = 0.0
    for chunk in np.array_split(ns, max(1, len(ns) // 8192)):
        diff = rho[None] - _dephase_batch(rho, chunk)
        dist = np.einsum("nij,nij->n", diff.conj(), diff).real
        best = max(best, float(dist.max()))
    return best


def _golden_max(f, lo: float, hi: float, tol: float = 1e-9) -> float:
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2


def _maximize_measured_entropy(rho: np.ndarray, coarse: GridSpec, tol: float = 1e-6):
    """Maximize S(Pi_n(rho)) over the sphere: coarse grid then golden-section refinement.

    Returns the maximal entropy and the maximizing unit vector.
    """
    ns = sphere_grid(coarse)
    s = _entropies(_measure_batch(rho, ns))
    k = int(np.argmax(s))
    theta = float(np.arccos(np.clip(ns[k, 2], -1.0, 1.0)))
    phi = float(np.arctan2(ns[k, 1], ns[k, 0]))
    h_theta = 2 * np.pi / (coarse.n_theta - 1)
    h_phi = 4 * np.pi / coarse.n_phi

    def s_at(t, p):
        return float(_entropies(_measure_batch(rho, spherical_to_cartesian(t, p)[None, :]))[0])

    def line_search(f, x0, h, f0):
        # move only on strict improvement so flat directions do not drift
        x = _golden_max(f, x0 - h, x0 + h)
        fx = f(x)
        return (x, fx) if fx > f0 + 1e-15 else (x0, f0)

    n_old = ns[k]
    current = float(s[k])
    for _ in range(200):
        theta, current = line_search(lambda t: s_at(t, phi), theta, h_theta, current)
        phi, current = line_search(lambda p: s_at(theta, p), phi, h_phi, current)
        n_new = spherical_to_cartesian(theta, phi)
        moved = math.acos(min(1.0, abs(float(n_old @ n_new))))
        n_old = n_new
        if moved < tol:
            break
        h_theta = max(h_theta / 2, 4 * moved)
        h_phi = max(h_phi / 2, 4 * moved)
    return current, n_old


def entropic_min(
    rho,
    degeneracy_tol: float = DEGENERACY_TOL,
    coarse: GridSpec = GridSpec(64, 128),
) -> MinResult:
    """Entropic MIN in bits: max over invariant measurements of S(Pi(rho)) - S(rho).

    For nondegenerate rho_A the only invariant measurement is its eigenbasis,
    so no search is needed. For rho_A = I/2 the measured entropy is maximized
    over the whole sphere.
    """
    rho = as_density_matrix(rho, dim=4)
    s_rho = von_neumann_entropy(rho)
    admissible = invariant_measurement_set(partial_trace(rho, "A"), degeneracy_tol)
    if isinstance(admissible, SpectralAxisOnly):
        d = admissible.direction
        s_meas = von_neumann_entropy(apply_local_measurement(rho, d))
        return MinResult(s_meas - s_rho, d, Branch.NONDEGENERATE)
    s_meas, n = _maximize_measured_entropy(rho, coarse)
    return MinResult(s_meas - s_rho, MeasurementDirection(tuple(n)), Branch.DEGENERATE)


def _conditional_b_states(rho: np.ndarray, ns: np.ndarray) -> np.ndarray:
    """Unnormalized states of B after outcome +-n on A, shape (N, 2, 2, 2)."""
    r = rho.reshape(2, 2, 2, 2)
    p = _projectors(ns)
    # Tr_A[(P (x) I) rho] = sum_{a,c} P[c, a] rho[(a, j), (c, l)]
    return np.einsum("nkca,ajcl->nkjl", p, r)


def _entropy_2x2_blocks(m: np.ndarray) -> np.ndarray:
    a = m[..., 0, 0].real
    d = m[..., 1, 1].real
    b = m[..., 0, 1]
    half_gap = 0.5 * np.sqrt((a - d) ** 2 + 4 * np.abs(b) ** 2)
    lam = np.stack([0.5 * (a + d) + half_gap, 0.5 * (a + d) - half_gap], axis=-1)
    lam = np.clip(lam, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam > 0, lam * np.log2(np.where(lam > 0, lam, 1.0)), 0.0)
    return -terms.reshape(len(m), -1).sum(axis=-1)


def entropic_min_oracle(rho, grid: GridSpec = GridSpec()) -> float:
    """Brute-force entropic MIN: max over grid directions of S(Pi(rho)) - S(rho).

    The measured state is block diagonal in the measurement basis of A, so its
    spectrum is the union of the spectra of the two conditional states of B.
    """
    rho = as_density_matrix(rho, dim=4)
    ns = _oracle_directions(rho, grid)
    best = -np.inf
    for chunk in np.array_split(ns, max(1, len(ns) // 16384)):
        best = max(best, float(_entropy_2x2_blocks(_conditional_b_states(rho, chunk)).max()))
    return best - von_neumann_entropy(rho)
