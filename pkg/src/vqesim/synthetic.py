"""Synthetic dissociation-style scan families with a known ground curve.

Each scan point is a transverse-field Hamiltonian whose exact ground
energy is known in closed form:

    1 qubit:  H(R) = c0(R) I  + gx X  + gz Z            ->  E0 = c0 - g
    2 qubits: H(R) = c0(R) II + gx XI + gz ZI + split IZ ->  E0 = c0 - g - split

with g = sqrt(gx^2 + gz^2). Choosing c0 to follow a parabola (plus an
optional cubic perturbation, which leaves the minimum location at
r_star) yields an energy curve with a known minimum, while the
transverse gx term guarantees genuinely fluctuating measurement
outcomes at the ground state, so shot-mode scans produce honest
nonzero variances for the curve fit.
"""

from __future__ import annotations

import math

from .formats import ScanPoint
from .pauli import PauliHamiltonian


def parabola_scan(
    r_values,
    r_star: float,
    curvature: float,
    offset: float,
    cubic: float = 0.0,
    n_qubits: int = 2,
    gx: float = 0.6,
    gz: float = 0.8,
    split: float = 0.5,
) -> list[ScanPoint]:
    """Build scan points whose ground-energy curve has its minimum at r_star."""
    if curvature <= 0:
        raise ValueError("curvature must be positive")
    if gx == 0:
        raise ValueError("gx must be nonzero so ground-state outcomes fluctuate")
    if n_qubits not in (1, 2):
        raise ValueError("synthetic scan families exist for 1 or 2 qubits")
    gap = math.sqrt(gx * gx + gz * gz)
    points = []
    for r in r_values:
        target = ground_curve_value(r, r_star, curvature, offset, cubic)
        if n_qubits == 1:
            c0 = target + gap
            terms = [(c0, "I"), (gx, "X"), (gz, "Z")]
        else:
            c0 = target + gap + split
            terms = [(c0, "II"), (gx, "XI"), (gz, "ZI"), (split, "IZ")]
        points.append(ScanPoint(float(r), PauliHamiltonian(n_qubits, terms)))
    return points


def ground_curve_value(
    r: float, r_star: float, curvature: float, offset: float, cubic: float = 0.0
) -> float:
    """The exact ground energy of parabola_scan at separation r."""
    delta = r - r_star
    return curvature * delta * delta + cubic * delta**3 + offset
