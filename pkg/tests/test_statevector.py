import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_hamiltonian, random_hermitian, random_state
from vqesim import (
    AnsatzSpec,
    PauliString,
    StateVector,
    apply_unitary,
    exact_energy,
    exact_expectation,
    init_zero,
    overlap,
    prepare,
    reconstruct,
)


def bell() -> StateVector:
    return StateVector(2, np.array([1, 0, 0, 1]) / np.sqrt(2))


class TestInitZero:
    def test_one_qubit(self):
        assert np.array_equal(init_zero(1).amplitudes, [1, 0])

    def test_two_qubits(self):
        assert np.array_equal(init_zero(2).amplitudes, [1, 0, 0, 0])

    @pytest.mark.parametrize("n", [0, 13, -1])
    def test_range_guard(self, n):
        with pytest.raises(ValueError):
            init_zero(n)


class TestStateVector:
    def test_norm_enforced(self):
        with pytest.raises(ValueError, match="norm"):
            StateVector(1, np.array([1.0, 1.0]))

    def test_shape_enforced(self):
        with pytest.raises(ValueError):
            StateVector(2, np.array([1.0, 0.0]))


class TestAnsatz:
    def test_parameter_count(self):
        assert AnsatzSpec(2, 1).parameter_count == 12
        assert AnsatzSpec(3, 2).parameter_count == 27

    def test_layer_count_guard(self):
        with pytest.raises(ValueError):
            AnsatzSpec(2, 0)

    def test_zero_parameters_give_zero_state(self):
        spec = AnsatzSpec(2, 1)
        state = prepare(spec, np.zeros(spec.parameter_count))
        assert abs(state.amplitudes[0]) == pytest.approx(1.0, abs=1e-12)

    def test_ry_pi_then_cnot_gives_11(self):
        spec = AnsatzSpec(2, 1)
        params = np.zeros(spec.parameter_count)
        params[1] = np.pi  # Ry angle of qubit 0 in the first rotation layer
        state = prepare(spec, params)
        assert abs(state.amplitudes[0b11]) == pytest.approx(1.0, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="parameters"):
            prepare(AnsatzSpec(2, 1), np.zeros(5))

    @given(st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_norm_property(self, seed):
        spec = AnsatzSpec(2, 2)
        rng = np.random.default_rng(seed)
        state = prepare(spec, rng.uniform(-np.pi, np.pi, spec.parameter_count))
        assert np.abs(np.linalg.norm(state.amplitudes) - 1.0) < 1e-10

    def test_deterministic(self):
        spec = AnsatzSpec(3, 2)
        params = np.random.default_rng(5).uniform(-np.pi, np.pi, spec.parameter_count)
        a = prepare(spec, params).amplitudes
        b = prepare(spec, params).amplitudes
        assert np.array_equal(a, b)


class TestExactExpectation:
    def test_zero_state_z(self):
        assert exact_expectation(init_zero(1), PauliString("Z")) == pytest.approx(1.0)

    def test_bell_xx(self):
        assert exact_expectation(bell(), PauliString("XX")) == pytest.approx(1.0)

    def test_plus_z(self):
        plus = StateVector(1, np.array([1, 1]) / np.sqrt(2))
        assert exact_expectation(plus, PauliString("Z")) == pytest.approx(0.0, abs=1e-12)

    def test_mismatch(self):
        with pytest.raises(ValueError):
            exact_expectation(init_zero(1), PauliString("ZZ"))

    @given(st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_dense_oracle(self, seed):
        rng = np.random.default_rng(seed)
        state = random_state(rng, 2)
        label = "".join(rng.choice(list("IXYZ"), size=2))
        from vqesim import pauli_matrix

        expected = np.vdot(state.amplitudes, pauli_matrix(PauliString(label)) @ state.amplitudes)
        assert exact_expectation(state, PauliString(label)) == pytest.approx(
            float(expected.real), abs=1e-10
        )


class TestExactEnergy:
    def test_identity_weight(self):
        h = random_hamiltonian(np.random.default_rng(0), 2, labels=["II"])
        h = type(h)(2, [(2.0, "II")])
        assert exact_energy(init_zero(2), h) == pytest.approx(2.0)

    def test_z_on_one(self):
        from vqesim import PauliHamiltonian

        one = StateVector(1, np.array([0.0, 1.0], dtype=complex))
        assert exact_energy(one, PauliHamiltonian(1, [(1.0, "Z")])) == pytest.approx(-1.0)

    @given(st.integers(0, 10_000))
    @settings(max_examples=30, deadline=None)
    def test_quadratic_form_oracle(self, seed):
        rng = np.random.default_rng(seed)
        h = random_hamiltonian(rng, 2)
        state = random_state(rng, 2)
        dense = reconstruct(h)
        expected = float(np.real(np.vdot(state.amplitudes, dense @ state.amplitudes)))
        assert exact_energy(state, h) == pytest.approx(expected, abs=1e-10)


class TestApplyUnitary:
    def test_identity(self):
        state = random_state(np.random.default_rng(1), 2)
        out = apply_unitary(state, np.eye(4))
        assert np.allclose(out.amplitudes, state.amplitudes)

    def test_x_flips(self):
        out = apply_unitary(init_zero(1), np.array([[0, 1], [1, 0]], dtype=complex))
        assert abs(out.amplitudes[1]) == pytest.approx(1.0)

    def test_random_unitary_preserves_norm(self):
        rng = np.random.default_rng(3)
        q, _ = np.linalg.qr(random_hermitian(rng, 4) + 1j * random_hermitian(rng, 4))
        out = apply_unitary(random_state(rng, 2), q)
        assert np.abs(np.linalg.norm(out.amplitudes) - 1.0) < 1e-10

    def test_non_unitary_rejected(self):
        with pytest.raises(ValueError, match="unitary"):
            apply_unitary(init_zero(1), np.array([[1.0, 0.0], [0.0, 2.0]]))


def _zyz_angles(g: np.ndarray) -> tuple[float, float, float]:
    """Euler angles (first z, y, last z) realizing g up to global phase."""
    det = np.linalg.det(g)
    g = g / np.sqrt(det)
    gamma = 2.0 * np.arctan2(abs(g[1, 0]), abs(g[0, 0]))
    if abs(g[0, 0]) < 1e-12:
        delta_minus_beta = 2.0 * np.angle(g[1, 0])
        return 0.0, gamma, delta_minus_beta
    if abs(g[1, 0]) < 1e-12:
        delta_plus_beta = -2.0 * np.angle(g[0, 0])
        return 0.0, gamma, delta_plus_beta
    delta_plus_beta = -2.0 * np.angle(g[0, 0])
    delta_minus_beta = 2.0 * np.angle(g[1, 0])
    beta = (delta_plus_beta - delta_minus_beta) / 2.0
    delta = (delta_plus_beta + delta_minus_beta) / 2.0
    return beta, gamma, delta


def test_one_layer_reaches_arbitrary_two_qubit_states():
    """Schmidt-based parameter fits hit 200 Haar-random targets."""
    spec = AnsatzSpec(2, 1)
    rng = np.random.default_rng(20240817)
    for _ in range(200):
        target = random_state(rng, 2)
        m = target.amplitudes.reshape(2, 2)
        u, s, vh = np.linalg.svd(m)
        alpha = np.arctan2(s[1], s[0])
        params = np.zeros(12)
        params[1] = 2.0 * alpha  # Ry on qubit 0 before the CNOT
        b0, g0, d0 = _zyz_angles(u)
        b1, g1, d1 = _zyz_angles(vh.T)
        params[6:9] = (b0, g0, d0)
        params[9:12] = (b1, g1, d1)
        fitted = prepare(spec, params)
        assert overlap(fitted, target) >= 0.999
