"""Desk-scale variational eigensolver on a simulated, shot-noisy QPU."""

from .analysis import (
    MinimumUncertainty,
    QuadraticFit,
    Spectrum,
    exact_spectrum,
    fit_quadratic_minimum,
    ground_space_overlap,
    monte_carlo_minimum_uncertainty,
    overlap,
    tangle,
)
from .driver import (
    FoldedResult,
    TraceRecord,
    VqeResult,
    VqeTrace,
    random_initial_parameters,
    run_folded,
    run_vqe,
)
from .estimation import (
    EnergyEstimate,
    RngStream,
    ShotPolicy,
    estimate_energy,
    sample_pauli,
    shot_budget,
)
from .fermion import (
    ClusterAmplitudes,
    FermionOperator,
    MolecularIntegrals,
    UccAnsatz,
    build_cluster,
    build_molecular_hamiltonian,
    jordan_wigner,
    ucc_prepare,
    ucc_vqe,
)
from .optimize import (
    GradientDescentConfig,
    NelderMeadConfig,
    OptimizerResult,
    gradient_descent,
    nelder_mead,
)
from .pauli import (
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
from .statevector import (
    AnsatzSpec,
    StateVector,
    apply_unitary,
    exact_energy,
    exact_expectation,
    init_zero,
    prepare,
)

__version__ = "0.1.0"

__all__ = [
    "AnsatzSpec",
    "ClusterAmplitudes",
    "ComplexPauliSum",
    "EnergyEstimate",
    "FermionOperator",
    "FoldedResult",
    "GradientDescentConfig",
    "MinimumUncertainty",
    "MolecularIntegrals",
    "NelderMeadConfig",
    "OptimizerResult",
    "PauliHamiltonian",
    "PauliString",
    "QuadraticFit",
    "RngStream",
    "ShotPolicy",
    "Spectrum",
    "StateVector",
    "TraceRecord",
    "UccAnsatz",
    "VqeResult",
    "VqeTrace",
    "apply_unitary",
    "build_cluster",
    "build_molecular_hamiltonian",
    "decompose",
    "estimate_energy",
    "exact_energy",
    "exact_expectation",
    "exact_spectrum",
    "fit_quadratic_minimum",
    "gradient_descent",
    "ground_space_overlap",
    "init_zero",
    "jordan_wigner",
    "monte_carlo_minimum_uncertainty",
    "multiply",
    "nelder_mead",
    "overlap",
    "parse_pauli",
    "pauli_matrix",
    "prepare",
    "random_initial_parameters",
    "reconstruct",
    "run_folded",
    "run_vqe",
    "sample_pauli",
    "shift_and_square",
    "shot_budget",
    "tangle",
    "ucc_prepare",
    "ucc_vqe",
]
