import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (
    PAULI_X,
    PAULI_Z,
    PHI_PLUS,
    SINGLET,
    projector,
    random_pure_qubit,
    random_state,
    random_unitary,
    werner,
)
from xymin.minkit import (
    BlochForm,
    Branch,
    FullSphere,
    GridSpec,
    MeasurementDirection,
    SpectralAxisOnly,
    PAULI_AB,
    PAULI_B,
    Z_AXIS,
    apply_local_measurement,
    bloch_compose,
    bloch_decompose,
    entropic_min,
    entropic_min_oracle,
    geometric_min,
    geometric_min_oracle,
    invariant_measurement_set,
    sphere_grid,
)
from xymin.qmat import InvalidStateError, partial_trace, von_neumann_entropy

seeds = st.integers(min_value=0, max_value=2**32 - 1)
BELL_STATES = [SINGLET, PHI_PLUS, np.array([0, 1, 1, 0]) / np.sqrt(2), np.array([1, 0, 0, -1]) / np.sqrt(2)]


def zero_local_a(rho):
    """Drop qubit A's Bloch vector, then depolarize just enough to stay positive."""
    b = bloch_decompose(rho)
    m = 0.25 * np.eye(4, dtype=complex)
    m += 0.25 * (np.einsum("j,jab->ab", b.y, PAULI_B) + np.einsum("ij,ijab->ab", b.T, PAULI_AB))
    lam = np.linalg.eigvalsh(m)[0]
    if lam < 0:
        t = -lam / (0.25 - lam)
        m = (1 - t) * m + t * np.eye(4) / 4
    return m


def classical_on_a(rng):
    """sum_k p_k |k><k| (x) rho_B^k in a random basis of A with p_0 != p_1."""
    u = random_unitary(rng, 2)
    p = rng.uniform(0.05, 0.45)
    rho = np.zeros((4, 4), dtype=complex)
    for k, pk in enumerate((p, 1 - p)):
        ket = u[:, k]
        rho += pk * np.kron(np.outer(ket, ket.conj()), random_state(rng, 2))
    return rho


class TestBloch:
    def test_singlet(self):
        b = bloch_decompose(projector(SINGLET))
        np.testing.assert_allclose(b.x, 0, atol=1e-15)
        np.testing.assert_allclose(b.y, 0, atol=1e-15)
        np.testing.assert_allclose(b.T, -np.eye(3), atol=1e-15)

    def test_up_up(self):
        b = bloch_decompose(projector([1, 0, 0, 0]))
        np.testing.assert_allclose(b.x, [0, 0, 1])
        np.testing.assert_allclose(b.y, [0, 0, 1])
        np.testing.assert_allclose(b.T, np.diag([0, 0, 1]))

    def test_round_trip(self, rng):
        for _ in range(200):
            rho = random_state(rng, rank=int(rng.integers(1, 5)))
            back = bloch_compose(bloch_decompose(rho))
            assert np.max(np.abs(back - rho)) <= 1e-12
            b = bloch_decompose(rho)
            assert np.linalg.norm(b.x) <= 1 + 1e-10 and np.linalg.norm(b.y) <= 1 + 1e-10

    def test_compose_maximally_mixed(self):
        np.testing.assert_allclose(bloch_compose(BlochForm(np.zeros(3), np.zeros(3), np.zeros((3, 3)))), np.eye(4) / 4)

    def test_compose_singlet(self):
        rho = bloch_compose(BlochForm(np.zeros(3), np.zeros(3), -np.eye(3)))
        np.testing.assert_allclose(rho, projector(SINGLET), atol=1e-15)

    def test_compose_local_field(self):
        rho = bloch_compose(BlochForm(np.array([0, 0, 0.8]), np.zeros(3), np.zeros((3, 3))))
        np.testing.assert_allclose(np.linalg.eigvalsh(partial_trace(rho, "A")), [0.1, 0.9], atol=1e-15)

    def test_compose_rejects_non_state(self):
        with pytest.raises(InvalidStateError, match="-0.5"):
            bloch_compose(BlochForm(np.zeros(3), np.zeros(3), np.eye(3)))

    def test_decompose_wrong_dim(self):
        with pytest.raises(InvalidStateError):
            bloch_decompose(np.eye(2) / 2)


class TestMeasurementDirection:
    def test_normalizes_and_canonicalizes(self):
        d = MeasurementDirection((0, 0, -2))
        assert d.n == (0.0, 0.0, 1.0)
        assert MeasurementDirection((-1, 0, 0)).n == (1.0, 0.0, 0.0)
        assert MeasurementDirection((0, -1, 0)).n == (0.0, 1.0, 0.0)
        assert MeasurementDirection((-1, 5, 0)).n[0] > 0

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            MeasurementDirection((0, 0, 0))

    def test_projectors(self):
        p = MeasurementDirection((1, 0, 0)).projectors()
        np.testing.assert_allclose(p[0] + p[1], np.eye(2))
        np.testing.assert_allclose(p[0] @ p[0], p[0], atol=1e-15)
        np.testing.assert_allclose(p[0] - p[1], PAULI_X)

    def test_sphere_grid_is_unit(self):
        ns = sphere_grid(GridSpec(20, 40))
        assert ns.shape == (800, 3)
        np.testing.assert_allclose(np.linalg.norm(ns, axis=1), 1, atol=1e-12)


class TestInvariantMeasurementSet:
    def test_diagonal(self):
        s = invariant_measurement_set(np.diag([0.9, 0.1]))
        assert isinstance(s, SpectralAxisOnly)
        np.testing.assert_allclose(s.direction.vector, [0, 0, 1])

    def test_maximally_mixed(self):
        assert isinstance(invariant_measurement_set(np.eye(2) / 2), FullSphere)

    def test_x_axis(self):
        s = invariant_measurement_set((np.eye(2) + 0.5 * PAULI_X) / 2)
        np.testing.assert_allclose(s.direction.vector, [1, 0, 0], atol=1e-15)

    def test_admissible_directions_leave_rho_a_invariant(self, rng):
        for _ in range(50):
            rho = random_state(rng)
            rho_a = partial_trace(rho, "A")
            s = invariant_measurement_set(rho_a)
            measured = apply_local_measurement(rho, s.direction)
            assert np.max(np.abs(partial_trace(measured, "A") - rho_a)) <= 1e-10
        rho = zero_local_a(random_state(rng))
        for n in sphere_grid(GridSpec(6, 12)):
            measured = apply_local_measurement(rho, MeasurementDirection(tuple(n)))
            assert np.max(np.abs(partial_trace(measured, "A") - np.eye(2) / 2)) <= 1e-10


class TestApplyLocalMeasurement:
    def test_maximally_mixed_fixed(self, rng):
        for _ in range(5):
            d = MeasurementDirection(tuple(rng.normal(size=3)))
            np.testing.assert_allclose(apply_local_measurement(np.eye(4) / 4, d), np.eye(4) / 4, atol=1e-15)

    def test_dephased_singlet(self):
        out = apply_local_measurement(projector(SINGLET), Z_AXIS)
        np.testing.assert_allclose(out, np.diag([0, 0.5, 0.5, 0]), atol=1e-15)

    def test_matches_explicit_projectors(self, rng):
        rho = random_state(rng)
        d = MeasurementDirection(tuple(rng.normal(size=3)))
        p = d.projectors()
        expected = sum(np.kron(pk, np.eye(2)) @ rho @ np.kron(pk, np.eye(2)) for pk in p)
        np.testing.assert_allclose(apply_local_measurement(rho, d), expected, atol=1e-15)

    @given(seeds)
    @settings(max_examples=50, deadline=None)
    def test_idempotent(self, seed):
        rng = np.random.default_rng(seed)
        rho = random_state(rng)
        d = MeasurementDirection(tuple(rng.normal(size=3)))
        once = apply_local_measurement(rho, d)
        assert np.max(np.abs(apply_local_measurement(once, d) - once)) <= 1e-12


class TestGeometricMin:
    @pytest.mark.parametrize("psi", BELL_STATES)
    def test_bell_states(self, psi):
        r = geometric_min(projector(psi))
        assert r.value == pytest.approx(0.5, abs=1e-12)
        assert r.branch is Branch.DEGENERATE

    def test_product_pure(self, rng):
        for _ in range(20):
            psi = np.kron(random_pure_qubit(rng), random_pure_qubit(rng))
            assert geometric_min(projector(psi)).value == pytest.approx(0, abs=1e-12)

    def test_werner(self):
        # x = 0, T = -I/2: (3/4 - 1/4) / 4
        assert geometric_min(werner(0.5)).value == pytest.approx(0.125, abs=1e-12)
        assert geometric_min_oracle(werner(0.5)) == pytest.approx(0.125, abs=1e-12)

    def test_optimal_direction_attains_value(self, rng):
        for rho in (random_state(rng), zero_local_a(random_state(rng))):
            r = geometric_min(rho)
            d2 = np.sum(np.abs(rho - apply_local_measurement(rho, r.optimal_direction)) ** 2)
            assert d2 == pytest.approx(r.value, abs=1e-12)

    def test_degenerate_direction_is_smallest_eigenvector(self):
        rho = bloch_compose(BlochForm(np.zeros(3), np.zeros(3), np.diag([-0.5, -0.2, 0.1])))
        r = geometric_min(rho)
        np.testing.assert_allclose(r.optimal_direction.vector, [0, 0, 1], atol=1e-12)
        assert r.value == pytest.approx((0.25 + 0.04 + 0.01 - 0.01) / 4)

    def test_dual_branch_near_threshold(self):
        # |x| just above the threshold: the larger (degenerate-formula) value is reported
        rho = bloch_compose(BlochForm(np.array([5e-9, 0, 0]), np.zeros(3), np.diag([-0.5, -0.2, 0.1])))
        r = geometric_min(rho)
        assert r.value == pytest.approx((0.25 + 0.04) / 4)
        assert r.branch is Branch.DEGENERATE

    def test_oracle_singlet(self):
        assert geometric_min_oracle(projector(SINGLET)) == pytest.approx(0.5, abs=1e-6)

    def test_oracle_up_up(self):
        assert geometric_min_oracle(projector([1, 0, 0, 0])) == pytest.approx(0, abs=1e-15)

    def test_oracle_agreement_random(self, rng):
        for _ in range(200):
            rho = random_state(rng, rank=int(rng.integers(1, 5)))
            assert abs(geometric_min(rho).value - geometric_min_oracle(rho)) <= 1e-3

    def test_oracle_agreement_degenerate(self, rng):
        for _ in range(10):
            rho = zero_local_a(random_state(rng))
            closed, oracle = geometric_min(rho).value, geometric_min_oracle(rho)
            assert oracle <= closed + 1e-12
            assert closed - oracle <= 1e-3

    @given(seeds)
    @settings(max_examples=100, deadline=None)
    def test_local_unitary_invariance(self, seed):
        rng = np.random.default_rng(seed)
        rho = random_state(rng, rank=int(rng.integers(1, 5)))
        if rng.random() < 0.3:
            rho = zero_local_a(rho)
        u = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
        assert abs(geometric_min(u @ rho @ u.conj().T).value - geometric_min(rho).value) <= 1e-9

    def test_bounds(self, rng):
        for _ in range(200):
            rho = random_state(rng, rank=int(rng.integers(1, 5)))
            v = geometric_min(rho).value
            assert -1e-9 <= v <= 0.5 + 1e-12


class TestEntropicMin:
    @pytest.mark.parametrize("psi", BELL_STATES)
    def test_bell_states(self, psi):
        r = entropic_min(projector(psi))
        assert r.value == pytest.approx(1.0, abs=1e-9)
        assert r.branch is Branch.DEGENERATE

    def test_product_states(self, rng):
        for _ in range(10):
            rho = np.kron(random_state(rng, 2), random_state(rng, 2))
            r = entropic_min(rho)
            assert r.value == pytest.approx(0, abs=1e-9)
            assert r.branch is Branch.NONDEGENERATE

    def test_werner(self):
        # H(1/8, 1/8, 3/8, 3/8) - S(werner) for every measurement direction
        assert entropic_min(werner(0.5)).value == pytest.approx(0.2624831837637345, abs=1e-9)
        assert entropic_min_oracle(werner(0.5)) == pytest.approx(0.2624831837637345, abs=1e-4)

    def test_oracle_maximally_mixed(self):
        assert entropic_min_oracle(np.eye(4) / 4) == pytest.approx(0, abs=1e-12)

    def test_oracle_equals_nondegenerate_branch(self, rng):
        for _ in range(200):
            rho = random_state(rng, rank=int(rng.integers(1, 5)))
            assert entropic_min_oracle(rho) == pytest.approx(entropic_min(rho).value, abs=1e-12)

    def test_degenerate_against_oracle(self, rng):
        for _ in range(5):
            rho = zero_local_a(random_state(rng))
            r = entropic_min(rho)
            assert r.branch is Branch.DEGENERATE
            oracle = entropic_min_oracle(rho)
            assert oracle <= r.value + 1e-9
            assert r.value - oracle <= 1e-3

    def test_degenerate_direction_attains_value(self, rng):
        rho = zero_local_a(random_state(rng))
        r = entropic_min(rho)
        measured = apply_local_measurement(rho, r.optimal_direction)
        assert von_neumann_entropy(measured) - von_neumann_entropy(rho) == pytest.approx(r.value, abs=1e-12)

    def test_classical_on_a_is_zero(self, rng):
        for _ in range(50):
            rho = classical_on_a(rng)
            assert entropic_min(rho).value <= 1e-9
            assert geometric_min(rho).value <= 1e-9

    def test_local_unitary_invariance(self, rng):
        for k in range(30):
            rho = random_state(rng)
            if k % 3 == 0:
                rho = zero_local_a(rho)
            u = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
            assert abs(entropic_min(u @ rho @ u.conj().T).value - entropic_min(rho).value) <= 1e-6

    def test_deterministic(self, rng):
        rho = zero_local_a(random_state(rng))
        assert entropic_min(rho) == entropic_min(rho.copy())

    def test_nonnegative(self, rng):
        for _ in range(100):
            assert entropic_min(random_state(rng, rank=int(rng.integers(1, 5)))).value >= -1e-9

    def test_z_measurement_of_classical_state(self):
        rho = np.kron(np.diag([0.7, 0.3]), (np.eye(2) + 0.3 * PAULI_Z) / 2)
        r = entropic_min(rho)
        assert r.optimal_direction == Z_AXIS
        assert r.value == pytest.approx(0, abs=1e-12)
