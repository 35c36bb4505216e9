import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import all_labels, random_hermitian
from vqesim import (
    ComplexPauliSum,
    PauliHamiltonian,
    PauliString,
    decompose,
    multiply,
    parse_pauli,
    pauli_matrix,
    reconstruct,
    shift_and_square,
)
from vqesim.pauli import basis_action

labels_st = st.text(alphabet="IXYZ", min_size=1, max_size=4)


class TestParse:
    def test_identity(self):
        assert parse_pauli("II").label == "II"
        assert parse_pauli("II").is_identity

    def test_direct_mapping(self):
        p = parse_pauli("XZ")
        assert p.label == "XZ"
        assert p.n_qubits == 2

    def test_error_names_position(self):
        with pytest.raises(ValueError, match="position 0"):
            parse_pauli("AB")
        with pytest.raises(ValueError, match="position 2"):
            parse_pauli("XZq")

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            parse_pauli("")

    @given(labels_st)
    def test_roundtrip(self, label):
        assert parse_pauli(label).label == label


class TestMatrix:
    def test_z(self):
        assert np.array_equal(pauli_matrix(PauliString("Z")), np.diag([1.0, -1.0]).astype(complex))

    def test_y(self):
        assert np.array_equal(
            pauli_matrix(PauliString("Y")), np.array([[0, -1j], [1j, 0]])
        )

    def test_xx_antidiagonal(self):
        assert np.array_equal(pauli_matrix(PauliString("XX")), np.fliplr(np.eye(4)).astype(complex))

    @given(labels_st)
    @settings(max_examples=60)
    def test_matches_basis_action(self, label):
        # kron chain vs permutation-and-phase route
        m = pauli_matrix(PauliString(label))
        targets, phases = basis_action(label)
        dense = np.zeros_like(m)
        dense[targets, np.arange(len(targets))] = phases
        assert np.allclose(m, dense)

    def test_hermitian_and_involutive(self):
        for label in all_labels(2):
            m = pauli_matrix(PauliString(label))
            assert np.allclose(m, m.conj().T)
            assert np.allclose(m @ m, np.eye(4))


class TestMultiply:
    def test_xy_is_iz(self):
        phase, out = multiply(PauliString("X"), PauliString("Y"))
        assert phase == 1j and out.label == "Z"

    def test_involution(self):
        phase, out = multiply(PauliString("Z"), PauliString("Z"))
        assert phase == 1 and out.label == "I"

    def test_disjoint_supports(self):
        phase, out = multiply(PauliString("XI"), PauliString("IZ"))
        assert phase == 1 and out.label == "XZ"

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            multiply(PauliString("X"), PauliString("XX"))

    def test_all_pairs_up_to_two_qubits(self):
        for n in (1, 2):
            for a, b in itertools.product(all_labels(n), repeat=2):
                phase, out = multiply(PauliString(a), PauliString(b))
                assert np.allclose(
                    pauli_matrix(PauliString(a)) @ pauli_matrix(PauliString(b)),
                    phase * pauli_matrix(out),
                )

    def test_all_three_qubit_pairs_match_dense(self):
        labels = all_labels(3)
        dense = {l: pauli_matrix(PauliString(l)) for l in labels}
        for a, b in itertools.product(labels, repeat=2):
            phase, out = multiply(PauliString(a), PauliString(b))
            assert np.array_equal(dense[a] @ dense[b], phase * dense[out.label])


class TestHamiltonianContainer:
    def test_duplicates_merged(self):
        h = PauliHamiltonian(1, [(0.5, "Z"), (0.25, "Z"), (1.0, "X")])
        assert h.term_count == 2
        assert h.coefficient("Z") == 0.75

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            PauliHamiltonian(2, [(1.0, "Z")])

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            PauliHamiltonian(1, [(float("nan"), "Z")])

    def test_empty_allowed(self):
        h = PauliHamiltonian(1, [])
        assert h.term_count == 0
        assert np.array_equal(reconstruct(h), np.zeros((2, 2)))


class TestDecompose:
    def test_z(self):
        h = decompose(np.diag([1.0, -1.0]))
        assert h.term_count == 1 and h.coefficient("Z") == 1.0

    def test_identity_4(self):
        h = decompose(np.eye(4))
        assert h.term_count == 1 and h.coefficient("II") == 1.0

    def test_non_power_of_two(self):
        with pytest.raises(ValueError, match="power of two"):
            decompose(np.eye(3))

    def test_non_hermitian(self):
        with pytest.raises(ValueError, match="not Hermitian"):
            decompose(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_size_guard(self):
        with pytest.raises(ValueError, match="guard"):
            decompose(np.eye(512))

    def test_prune_threshold(self):
        m = np.diag([1.0, -1.0]) + 1e-13 * np.eye(2)
        assert decompose(m).coefficient("I") == 0.0
        assert decompose(m, prune=1e-14).coefficient("I") != 0.0

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_roundtrip_random_hermitian(self, n):
        rng = np.random.default_rng(100 + n)
        m = random_hermitian(rng, 1 << n)
        assert np.max(np.abs(reconstruct(decompose(m)) - m)) < 1e-12

    @given(st.integers(0, 10_000), st.floats(-2, 2), st.floats(-2, 2))
    @settings(max_examples=25, deadline=None)
    def test_linearity(self, seed, a, b):
        rng = np.random.default_rng(seed)
        m1, m2 = random_hermitian(rng, 4), random_hermitian(rng, 4)
        combined = decompose(a * m1 + b * m2)
        h1, h2 = decompose(m1, prune=0.0), decompose(m2, prune=0.0)
        for label in all_labels(2):
            expected = a * h1.coefficient(label) + b * h2.coefficient(label)
            assert combined.coefficient(label) == pytest.approx(expected, abs=1e-10)


class TestReconstruct:
    def test_single_z(self):
        h = PauliHamiltonian(1, [(1.0, "Z")])
        assert np.allclose(reconstruct(h), np.diag([1.0, -1.0]))

    def test_matches_kron_sum(self):
        rng = np.random.default_rng(7)
        h = PauliHamiltonian(2, [(rng.uniform(-1, 1), l) for l in all_labels(2)])
        direct = sum(c * pauli_matrix(p) for c, p in h.terms)
        assert np.allclose(reconstruct(h), direct)


class TestShiftAndSquare:
    def test_z_squared(self):
        h = shift_and_square(PauliHamiltonian(1, [(1.0, "Z")]), 0.0)
        assert h.term_count == 1 and h.coefficient("I") == 1.0

    def test_z_minus_one_squared(self):
        h = shift_and_square(PauliHamiltonian(1, [(1.0, "Z")]), 1.0)
        assert h.coefficient("I") == pytest.approx(2.0)
        assert h.coefficient("Z") == pytest.approx(-2.0)

    @given(st.integers(0, 10_000))
    @settings(max_examples=20, deadline=None)
    def test_dense_oracle(self, seed):
        rng = np.random.default_rng(seed)
        m = random_hermitian(rng, 4)
        h = decompose(m)
        folded = shift_and_square(h, 0.3)
        target = (m - 0.3 * np.eye(4)) @ (m - 0.3 * np.eye(4))
        assert np.max(np.abs(reconstruct(folded) - target)) < 1e-10

    def test_real_coefficients_and_quadratic_term_count(self):
        rng = np.random.default_rng(11)
        h = PauliHamiltonian(2, [(rng.uniform(-1, 1), l) for l in all_labels(2)[:5]])
        folded = shift_and_square(h, 0.7)
        assert all(isinstance(c, float) for c, _ in folded.terms)
        assert folded.term_count <= h.term_count * h.term_count + h.term_count + 1


class TestComplexPauliSum:
    def test_rejects_imaginary_residue(self):
        acc = ComplexPauliSum(1)
        acc.add("X", 0.5j)
        with pytest.raises(ValueError, match="residue"):
            acc.to_hamiltonian()

    def test_matrix_matches_terms(self):
        acc = ComplexPauliSum(1)
        acc.add("X", 0.5)
        acc.add("Y", 0.5j)
        expected = 0.5 * pauli_matrix(PauliString("X")) + 0.5j * pauli_matrix(PauliString("Y"))
        assert np.allclose(acc.to_matrix(), expected)
