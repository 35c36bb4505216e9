"""On-disk formats: Hamiltonian text files, scan lists, integral tables.

Hamiltonian text: one `<coefficient> <pauli-label>` pair per line,
`#` comments and blank lines ignored; the label length of the first
term fixes the qubit count for the whole file.

Scan: a JSON list of {"R": <real>, "terms": [[coeff, label], ...]}
objects with strictly increasing R and a common qubit count.

Integrals: JSON {"n_modes": N, "one_body": [[p, q, value], ...],
"two_body": [[p, q, r, s, value], ...]} with 1-based indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .fermion import MolecularIntegrals
from .pauli import PauliHamiltonian, PauliString


class FormatError(ValueError):
    """Malformed input file; the message names the file and location."""


def parse_hamiltonian_text(text: str, source: str = "<string>") -> PauliHamiltonian:
    terms: list[tuple[float, PauliString]] = []
    n_qubits: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise FormatError(
                f"{source}:{lineno}: expected '<coefficient> <pauli-label>', got {line!r}"
            )
        coeff_text, label = fields
        try:
            coeff = float(coeff_text)
        except ValueError:
            raise FormatError(f"{source}:{lineno}: bad coefficient {coeff_text!r}") from None
        try:
            string = PauliString(label)
        except ValueError as exc:
            raise FormatError(f"{source}:{lineno}: {exc}") from None
        if n_qubits is None:
            n_qubits = string.n_qubits
        elif string.n_qubits != n_qubits:
            raise FormatError(
                f"{source}:{lineno}: label {label!r} has length {string.n_qubits}, "
                f"but the file fixed {n_qubits} qubits"
            )
        terms.append((coeff, string))
    if n_qubits is None:
        raise FormatError(f"{source}: no Hamiltonian terms found")
    return PauliHamiltonian(n_qubits, terms)


def load_hamiltonian(path: str | Path) -> PauliHamiltonian:
    path = Path(path)
    return parse_hamiltonian_text(path.read_text(), source=str(path))


def format_hamiltonian_text(h: PauliHamiltonian, header: str | None = None) -> str:
    lines = [f"# {header}"] if header else []
    lines += [f"{coeff!r} {string.label}" for coeff, string in h.terms]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ScanPoint:
    label: float
    hamiltonian: PauliHamiltonian


def parse_scan(data, source: str = "<scan>") -> list[ScanPoint]:
    if not isinstance(data, list) or not data:
        raise FormatError(f"{source}: expected a nonempty JSON list of scan points")
    points: list[ScanPoint] = []
    n_qubits: int | None = None
    for index, entry in enumerate(data):
        where = f"{source}[{index}]"
        if not isinstance(entry, dict) or "R" not in entry or "terms" not in entry:
            raise FormatError(f"{where}: each point needs 'R' and 'terms'")
        try:
            label = float(entry["R"])
        except (TypeError, ValueError):
            raise FormatError(f"{where}: bad R value {entry['R']!r}") from None
        try:
            terms = [(float(c), PauliString(str(lbl))) for c, lbl in entry["terms"]]
            hamiltonian = PauliHamiltonian(terms[0][1].n_qubits if terms else 1, terms)
        except (TypeError, ValueError) as exc:
            raise FormatError(f"{where}: {exc}") from None
        if n_qubits is None:
            n_qubits = hamiltonian.n_qubits
        elif hamiltonian.n_qubits != n_qubits:
            raise FormatError(
                f"{where}: qubit count {hamiltonian.n_qubits} differs from {n_qubits}"
            )
        if points and label <= points[-1].label:
            raise FormatError(f"{where}: R values must be strictly increasing")
        points.append(ScanPoint(label, hamiltonian))
    return points


def load_scan(path: str | Path) -> list[ScanPoint]:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None
    return parse_scan(data, source=str(path))


def write_scan(path: str | Path, points: list[ScanPoint]) -> None:
    payload = [
        {"R": point.label, "terms": [[c, p.label] for c, p in point.hamiltonian.terms]}
        for point in points
    ]
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def parse_integrals(data, source: str = "<integrals>") -> MolecularIntegrals:
    if not isinstance(data, dict) or "n_modes" not in data:
        raise FormatError(f"{source}: expected a JSON object with 'n_modes'")
    try:
        return MolecularIntegrals(
            int(data["n_modes"]),
            [tuple(entry) for entry in data.get("one_body", [])],
            [tuple(entry) for entry in data.get("two_body", [])],
        )
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{source}: {exc}") from None


def load_integrals(path: str | Path) -> MolecularIntegrals:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None
    return parse_integrals(data, source=str(path))
