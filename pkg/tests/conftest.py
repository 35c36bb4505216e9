import itertools

import numpy as np

from vqesim import PauliHamiltonian, StateVector


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2.0


def random_state(rng: np.random.Generator, n_qubits: int) -> StateVector:
    v = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    return StateVector(n_qubits, v / np.linalg.norm(v))


def all_labels(n_qubits: int) -> list[str]:
    return ["".join(t) for t in itertools.product("IXYZ", repeat=n_qubits)]


def random_hamiltonian(rng: np.random.Generator, n_qubits: int, labels=None) -> PauliHamiltonian:
    labels = labels or all_labels(n_qubits)
    return PauliHamiltonian(n_qubits, [(rng.uniform(-1, 1), l) for l in labels])
