"""The variational loop: estimator-driven minimization with diagnostics.

Every objective evaluation is one optimization step j and produces one
trace record carrying the shot-based estimate alongside noiseless
diagnostics (exact energy of the prepared state, tangle on two qubits,
overlap with the exact ground space). Repeated evaluation of the same
parameters draws fresh noise, as on real hardware, because the
evaluation index is part of the RNG stream label.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import exact_spectrum, ground_space_overlap, tangle
from .estimation import (
    STREAM_INIT,
    RngStream,
    ShotPolicy,
    derived_generator,
    estimate_energy,
)
from .optimize import (
    GradientDescentConfig,
    NelderMeadConfig,
    gradient_descent,
    nelder_mead,
)
from .pauli import PauliHamiltonian, shift_and_square
from .statevector import StateVector, exact_energy


@dataclass(frozen=True)
class TraceRecord:
    """One optimization step: estimate plus ideal-device diagnostics."""

    iteration: int
    parameters: np.ndarray
    energy_estimate: float
    std_error: float
    exact_energy: float
    tangle: float | None
    overlap: float
    restart: bool


@dataclass
class VqeTrace:
    records: list[TraceRecord]
    best_parameters: np.ndarray
    best_energy: float
    evaluations: int
    restarts: int


@dataclass
class VqeResult:
    trace: VqeTrace
    converged: bool
    reason: str

    @property
    def best_energy(self) -> float:
        return self.trace.best_energy

    @property
    def best_parameters(self) -> np.ndarray:
        return self.trace.best_parameters


@dataclass
class FoldedResult:
    """Folded-spectrum run: the shifted-square objective plus the recovered eigenvalue."""

    vqe: VqeResult
    shift: float
    folded_hamiltonian: PauliHamiltonian
    folded_energy: float
    recovered_eigenvalue: float
    final_state: StateVector


def random_initial_parameters(count: int, seed: int) -> np.ndarray:
    """Uniform angles in [-pi, pi) from the run seed's init stream."""
    gen = derived_generator(seed, STREAM_INIT)
    return gen.uniform(-np.pi, np.pi, size=count)


OptimizerConfig = NelderMeadConfig | GradientDescentConfig


def run_vqe(
    hamiltonian: PauliHamiltonian,
    ansatz,
    policy: ShotPolicy,
    config: OptimizerConfig | None = None,
    seed: int = 0,
    x0: np.ndarray | None = None,
) -> VqeResult:
    """Minimize the estimated energy over ansatz parameters.

    `ansatz` is anything with a `parameter_count` attribute and a
    `prepare(parameters) -> StateVector` method. The default optimizer
    is Nelder-Mead with restarts; pass a GradientDescentConfig for the
    baseline. Deterministic given (inputs, config, seed).
    """
    config = config or NelderMeadConfig()
    spectrum = exact_spectrum(hamiltonian)
    rng = RngStream(seed)
    if x0 is None:
        x0 = random_initial_parameters(ansatz.parameter_count, seed)
    else:
        x0 = np.asarray(x0, dtype=float)
        if x0.shape != (ansatz.parameter_count,):
            raise ValueError(
                f"x0 has shape {x0.shape}, ansatz takes {ansatz.parameter_count} parameters"
            )

    records: list[TraceRecord] = []
    restart_pending = False

    def mark_restart() -> None:
        nonlocal restart_pending
        restart_pending = True

    def objective(params: np.ndarray) -> float:
        nonlocal restart_pending
        step = len(records)
        estimate = estimate_energy((ansatz, params), hamiltonian, policy, rng, iteration=step)
        state = ansatz.prepare(params)
        records.append(
            TraceRecord(
                iteration=step,
                parameters=np.array(params, dtype=float),
                energy_estimate=estimate.value,
                std_error=estimate.std_error,
                exact_energy=exact_energy(state, hamiltonian),
                tangle=tangle(state) if hamiltonian.n_qubits == 2 else None,
                overlap=ground_space_overlap(spectrum, state),
                restart=restart_pending,
            )
        )
        restart_pending = False
        return estimate.value

    if isinstance(config, GradientDescentConfig):
        opt = gradient_descent(
            objective,
            x0,
            step_size=config.step_size,
            max_evaluations=config.max_evaluations,
            fd_step=config.fd_step,
        )
    else:
        opt = nelder_mead(objective, x0, config, on_restart=mark_restart)

    trace = VqeTrace(
        records=records,
        best_parameters=opt.x_best,
        best_energy=opt.f_best,
        evaluations=opt.evaluations,
        restarts=opt.restarts,
    )
    return VqeResult(trace=trace, converged=opt.converged, reason=opt.reason)


def run_folded(
    hamiltonian: PauliHamiltonian,
    shift: float,
    ansatz,
    policy: ShotPolicy,
    config: OptimizerConfig | None = None,
    seed: int = 0,
    x0: np.ndarray | None = None,
) -> FoldedResult:
    """Target the eigenvalue nearest `shift` by minimizing <(H - shift)^2>.

    The optimization runs entirely on the shifted-square operator; the
    returned eigenvalue estimate is the plain <H> of the final state.
    """
    folded = shift_and_square(hamiltonian, shift)
    result = run_vqe(folded, ansatz, policy, config, seed, x0)
    final_state = ansatz.prepare(result.best_parameters)
    return FoldedResult(
        vqe=result,
        shift=shift,
        folded_hamiltonian=folded,
        folded_energy=exact_energy(final_state, folded),
        recovered_eigenvalue=exact_energy(final_state, hamiltonian),
        final_state=final_state,
    )
