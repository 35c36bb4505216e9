"""Ground-truth oracles and run diagnostics.

Dense spectra back every acceptance check; the tangle (absolute
concurrence squared) and ground-state overlap reproduce the
convergence diagnostics plotted alongside optimization traces; the
weighted quadratic fit plus Monte-Carlo propagation turn a scanned
energy curve into a minimum location with uncertainties.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliHamiltonian, basis_action, reconstruct
from .statevector import StateVector

MAX_SPECTRUM_QUBITS = 10


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    def ground_space(self, degeneracy_tol: float | None = None) -> np.ndarray:
        """Columns spanning the (possibly degenerate) lowest eigenspace."""
        if degeneracy_tol is None:
            scale = max(1.0, float(np.max(np.abs(self.eigenvalues))))
            degeneracy_tol = 1e-8 * scale
        mask = self.eigenvalues <= self.eigenvalues[0] + degeneracy_tol
        return self.eigenvectors[:, mask]


def exact_spectrum(h: PauliHamiltonian) -> Spectrum:
    """Dense diagonalization of the reconstructed Hamiltonian."""
    if h.n_qubits > MAX_SPECTRUM_QUBITS:
        raise ValueError(
            f"dense spectrum over {h.n_qubits} qubits exceeds the "
            f"{MAX_SPECTRUM_QUBITS}-qubit guard"
        )
    values, vectors = np.linalg.eigh(reconstruct(h))
    return Spectrum(values, vectors)


def overlap(a: StateVector, b: StateVector) -> float:
    """|<a|b>|; symmetric and global-phase invariant."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)))


def ground_space_overlap(spectrum: Spectrum, state: StateVector) -> float:
    """Norm of the state's projection onto the lowest eigenspace.

    Equals |<psi_G|psi>| for a non-degenerate ground state; with
    degeneracy it measures distance to the subspace rather than to an
    arbitrary eigenvector choice.
    """
    basis = spectrum.ground_space()
    amplitudes = basis.conj().T @ state.amplitudes
    return min(1.0, float(np.linalg.norm(amplitudes)))


def tangle(state: StateVector) -> float:
    """Absolute concurrence squared of a two-qubit pure state.

    C = |<psi| Y(x)Y |psi*>| with the conjugate taken in the
    computational basis; returns C^2 in [0, 1].
    """
    if state.n_qubits != 2:
        raise ValueError(f"tangle is defined for 2 qubits, got {state.n_qubits}")
    targets, phases = basis_action("YY")
    flipped = np.zeros(4, dtype=complex)
    conj = state.amplitudes.conj()
    flipped[targets] = phases * conj
    concurrence = abs(np.vdot(state.amplitudes, flipped))
    return min(1.0, float(concurrence * concurrence))


@dataclass(frozen=True)
class QuadraticFit:
    """Weighted fit of E = a R^2 + b R + c with coefficient covariance."""

    a: float
    b: float
    c: float
    covariance: np.ndarray

    @property
    def r_min(self) -> float:
        if self.a <= 0:
            raise ValueError("fit is not convex; no minimum to report")
        return -self.b / (2.0 * self.a)

    @property
    def e_min(self) -> float:
        if self.a <= 0:
            raise ValueError("fit is not convex; no minimum to report")
        return self.c - self.b * self.b / (4.0 * self.a)


def fit_quadratic_minimum(points: list[tuple[float, float, float]]) -> QuadraticFit:
    """Weighted least squares of (R, E, variance) triples to a parabola.

    Weights are inverse variances; the covariance comes from the
    weighted normal equations, so at least 4 points are required.
    """
    if len(points) < 4:
        raise ValueError(f"need at least 4 points to fit and report covariance, got {len(points)}")
    r = np.array([p[0] for p in points], dtype=float)
    e = np.array([p[1] for p in points], dtype=float)
    var = np.array([p[2] for p in points], dtype=float)
    if np.any(var <= 0) or not np.all(np.isfinite(var)):
        raise ValueError("all point variances must be positive and finite")
    # Fit in the centered basis u = R - mean(R) for conditioning, then
    # transform coefficients and covariance back to the monomial basis.
    center = float(r.mean())
    u = r - center
    design = np.column_stack([u * u, u, np.ones_like(u)])
    weights = 1.0 / var
    normal = design.T @ (weights[:, None] * design)
    rhs = design.T @ (weights * e)
    try:
        if np.linalg.cond(normal) > 1e12:
            raise np.linalg.LinAlgError("ill-conditioned normal equations")
        centered_cov = np.linalg.inv(normal)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"singular design matrix (degenerate R values): {exc}") from None
    centered = centered_cov @ rhs
    jacobian = np.array(
        [
            [1.0, 0.0, 0.0],
            [-2.0 * center, 1.0, 0.0],
            [center * center, -center, 1.0],
        ]
    )
    coeffs = jacobian @ centered
    covariance = jacobian @ centered_cov @ jacobian.T
    covariance = (covariance + covariance.T) / 2.0
    return QuadraticFit(float(coeffs[0]), float(coeffs[1]), float(coeffs[2]), covariance)


@dataclass(frozen=True)
class MinimumUncertainty:
    """Monte-Carlo standard deviations of a fitted minimum's location and value."""

    sigma_r_min: float
    sigma_e_min: float
    discarded_fraction: float
    warning: bool


def monte_carlo_minimum_uncertainty(
    fit: QuadraticFit, samples: int, rng: np.random.Generator | int
) -> MinimumUncertainty:
    """Propagate fit covariance to (R_min, E_min) by Gaussian sampling.

    Coefficient triples are drawn from the fit's multivariate normal;
    non-convex draws (a <= 0) are discarded and counted, with a warning
    flag once more than 10% are lost.
    """
    if samples < 1000:
        raise ValueError("need at least 1000 Monte-Carlo samples")
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(int(rng))
    cov = np.asarray(fit.covariance, dtype=float)
    eigvals, eigvecs = np.linalg.eigh((cov + cov.T) / 2.0)
    scale = max(1.0, float(np.max(np.abs(eigvals))))
    if np.min(eigvals) < -1e-10 * scale:
        raise ValueError("covariance matrix is not positive semidefinite")
    transform = eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))
    mean = np.array([fit.a, fit.b, fit.c])
    draws = mean + rng.standard_normal((samples, 3)) @ transform.T
    convex = draws[:, 0] > 0
    kept = draws[convex]
    discarded_fraction = 1.0 - kept.shape[0] / samples
    if kept.shape[0] < 2:
        raise ValueError("almost all Monte-Carlo samples were non-convex; fit is degenerate")
    r_min = -kept[:, 1] / (2.0 * kept[:, 0])
    e_min = kept[:, 2] - kept[:, 1] ** 2 / (4.0 * kept[:, 0])
    return MinimumUncertainty(
        float(r_min.std(ddof=1)),
        float(e_min.std(ddof=1)),
        discarded_fraction,
        discarded_fraction > 0.10,
    )
