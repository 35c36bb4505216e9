"""Command-line front end: validate inputs, run experiments, emit artifacts.

Configuration is a single flat JSON document; command-line flags
override individual keys (flags win). Every run requires an explicit
seed and writes byte-reproducible artifacts: the effective config, a
per-iteration trace CSV, and a JSON summary (plus curve/fit files in
scan mode).

Exit codes: 0 success, 2 configuration errors, 3 malformed input
files, 4 execution/output failures.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .analysis import (
    exact_spectrum,
    fit_quadratic_minimum,
    monte_carlo_minimum_uncertainty,
)
from .driver import FoldedResult, VqeResult, run_folded, run_vqe
from .estimation import (
    STREAM_MC,
    STREAM_SCAN,
    RngStream,
    ShotPolicy,
    derive_seed,
    derived_generator,
    estimate_energy,
    shot_budget,
)
from .fermion import UccAnsatz, build_molecular_hamiltonian, jordan_wigner, ucc_vqe
from .formats import (
    FormatError,
    ScanPoint,
    load_hamiltonian,
    load_integrals,
    load_scan,
)
from .optimize import GradientDescentConfig, NelderMeadConfig
from .pauli import ComplexPauliSum, PauliHamiltonian, shift_and_square
from .statevector import AnsatzSpec, exact_energy


class ConfigError(ValueError):
    """Invalid or incomplete run configuration."""


MODES = ("vqe", "folded", "scan", "ucc")
OPTIMIZERS = ("nelder-mead", "gradient-descent")


@dataclass
class RunConfig:
    mode: str = ""
    seed: int | None = None
    out: str | None = None
    hamiltonian: str | None = None
    scan: str | None = None
    integrals: str | None = None
    layers: int = 1
    policy: str = "exact"
    bias: float = 0.0
    lambdas: tuple[float, ...] = ()
    fit_window: tuple[float, float] | None = None
    reference: str | None = None
    cluster_cap: int = 2
    mc_samples: int = 20000
    optimizer: str = "nelder-mead"
    nm_reflection: float = 1.0
    nm_expansion: float = 2.0
    nm_contraction: float = 0.5
    nm_shrink: float = 0.5
    nm_initial_scale: float = 0.3
    nm_tolerance: float = 1e-10
    nm_stagnation_window: int = 300
    nm_restart_limit: int = 5
    nm_max_evaluations: int = 6000
    gd_step_size: float = 0.1
    gd_fd_step: float = 1e-3
    gd_max_evaluations: int = 2000

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.seed is None:
            raise ConfigError("seed is mandatory; there is no wall-clock default")
        self.seed = int(self.seed)
        if self.optimizer not in OPTIMIZERS:
            raise ConfigError(f"optimizer must be one of {OPTIMIZERS}")
        if self.mode in ("vqe", "folded") and not self.hamiltonian:
            raise ConfigError(f"mode {self.mode!r} requires a hamiltonian file")
        if self.mode == "folded" and not self.lambdas:
            raise ConfigError("folded mode requires at least one lambda shift")
        if self.mode == "scan" and not self.scan:
            raise ConfigError("scan mode requires a scan file")
        if self.mode == "ucc":
            if not self.integrals:
                raise ConfigError("ucc mode requires an integrals file")
            if not self.reference:
                raise ConfigError("ucc mode requires a reference occupation bitstring")
        self.lambdas = tuple(float(v) for v in self.lambdas)
        if self.fit_window is not None:
            lo, hi = self.fit_window
            if not lo < hi:
                raise ConfigError("fit window must satisfy lo < hi")
            self.fit_window = (float(lo), float(hi))
        try:
            self.shot_policy()
            self.nelder_mead_config()
            self.gradient_descent_config()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def shot_policy(self) -> ShotPolicy:
        return ShotPolicy.parse(self.policy, bias=self.bias)

    def nelder_mead_config(self) -> NelderMeadConfig:
        return NelderMeadConfig(
            reflection=self.nm_reflection,
            expansion=self.nm_expansion,
            contraction=self.nm_contraction,
            shrink=self.nm_shrink,
            initial_scale=self.nm_initial_scale,
            tolerance=self.nm_tolerance,
            stagnation_window=self.nm_stagnation_window,
            restart_limit=self.nm_restart_limit,
            max_evaluations=self.nm_max_evaluations,
        )

    def gradient_descent_config(self) -> GradientDescentConfig:
        return GradientDescentConfig(
            step_size=self.gd_step_size,
            fd_step=self.gd_fd_step,
            max_evaluations=self.gd_max_evaluations,
        )

    def optimizer_config(self):
        if self.optimizer == "gradient-descent":
            return self.gradient_descent_config()
        return self.nelder_mead_config()

    def to_flat_dict(self) -> dict:
        raw = dataclasses.asdict(self)
        raw["lambdas"] = list(self.lambdas)
        if self.fit_window is not None:
            raw["fit_window"] = list(self.fit_window)
        return raw


_CONFIG_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def config_from_mapping(mapping: dict) -> RunConfig:
    unknown = set(mapping) - _CONFIG_FIELDS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**mapping)


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"expected comma-separated reals, got {text!r}") from None


def _parse_window(text: str) -> tuple[float, float]:
    parts = _parse_float_list(text)
    if len(parts) != 2:
        raise ConfigError(f"fit window must be 'lo,hi', got {text!r}")
    return parts  # type: ignore[return-value]


def merge_config(args: argparse.Namespace) -> RunConfig:
    mapping: dict = {}
    if args.config:
        path = Path(args.config)
        try:
            loaded = json.loads(path.read_text())
        except FileNotFoundError:
            raise ConfigError(f"config file {path} does not exist") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path}: config must be a flat JSON object")
        mapping.update(loaded)

    overrides: dict = {}
    simple = (
        "mode seed out hamiltonian scan integrals layers reference cluster_cap "
        "mc_samples optimizer bias nm_initial_scale nm_tolerance nm_stagnation_window "
        "nm_restart_limit nm_max_evaluations gd_step_size gd_max_evaluations"
    ).split()
    for name in simple:
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "exact", False):
        overrides["policy"] = "exact"
    if getattr(args, "shots", None) is not None:
        overrides["policy"] = f"shots:{args.shots}"
    if getattr(args, "precision", None) is not None:
        overrides["policy"] = f"precision:{args.precision}"
    if getattr(args, "lambdas", None) is not None:
        overrides["lambdas"] = _parse_float_list(args.lambdas)
    if getattr(args, "fit_window", None) is not None:
        overrides["fit_window"] = _parse_window(args.fit_window)

    mapping.update(overrides)
    return config_from_mapping(mapping)


@dataclass
class BudgetEntry:
    label: str
    term_count: int
    per_term_shots: tuple[int, ...]
    total_shots: int


@dataclass
class ValidationReport:
    mode: str
    n_qubits: int
    parameter_count: int
    policy: str
    entries: list[BudgetEntry] = field(default_factory=list)

    @property
    def shots_per_evaluation(self) -> int:
        return self.entries[0].total_shots if self.entries else 0

    def lines(self) -> list[str]:
        out = [
            f"mode: {self.mode}",
            f"n_qubits: {self.n_qubits}",
            f"parameters: {self.parameter_count}",
            f"policy: {self.policy}",
        ]
        for entry in self.entries:
            out.append(
                f"{entry.label}: {entry.term_count} terms, "
                f"{entry.total_shots} shots/evaluation"
            )
            if entry.per_term_shots and self.policy != "exact":
                out.append(
                    "  per-term shots: " + " ".join(str(s) for s in entry.per_term_shots)
                )
        return out


def _budget_entry(label: str, h: PauliHamiltonian, policy: ShotPolicy) -> BudgetEntry:
    per_term, total = shot_budget(h, policy)
    return BudgetEntry(label, h.term_count, per_term, total)


def _ucc_hamiltonian(config: RunConfig) -> tuple[PauliHamiltonian, UccAnsatz]:
    integrals = load_integrals(config.integrals)
    mapped = jordan_wigner(build_molecular_hamiltonian(integrals))
    if isinstance(mapped, ComplexPauliSum):
        raise FormatError(
            f"{config.integrals}: integrals produce a non-Hermitian Hamiltonian"
        )
    if config.reference is None or len(config.reference) != integrals.n_modes:
        raise ConfigError(
            f"reference must be a {integrals.n_modes}-mode bitstring, got {config.reference!r}"
        )
    ansatz = UccAnsatz.from_reference(integrals.n_modes, config.reference, config.cluster_cap)
    return mapped, ansatz


def validate_config(config: RunConfig) -> ValidationReport:
    """Dry-run: parse all inputs and report sizes and the shot budget."""
    policy = config.shot_policy()
    if config.mode in ("vqe", "folded"):
        hamiltonian = load_hamiltonian(config.hamiltonian)
        ansatz = AnsatzSpec(hamiltonian.n_qubits, config.layers)
        report = ValidationReport(
            config.mode, hamiltonian.n_qubits, ansatz.parameter_count, policy.describe()
        )
        if config.mode == "vqe":
            report.entries.append(_budget_entry("hamiltonian", hamiltonian, policy))
        else:
            for shift in config.lambdas:
                folded = shift_and_square(hamiltonian, shift)
                report.entries.append(_budget_entry(f"lambda={shift:g}", folded, policy))
        return report
    if config.mode == "scan":
        points = load_scan(config.scan)
        ansatz = AnsatzSpec(points[0].hamiltonian.n_qubits, config.layers)
        report = ValidationReport(
            config.mode, points[0].hamiltonian.n_qubits, ansatz.parameter_count, policy.describe()
        )
        for point in points:
            report.entries.append(
                _budget_entry(f"R={point.label:g}", point.hamiltonian, policy)
            )
        return report
    hamiltonian, ansatz = _ucc_hamiltonian(config)
    report = ValidationReport(
        config.mode, hamiltonian.n_qubits, ansatz.parameter_count, policy.describe()
    )
    report.entries.append(_budget_entry("jw-hamiltonian", hamiltonian, policy))
    return report


def _write_trace_csv(path: Path, result: VqeResult) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["j", "energy_estimate", "std_error", "exact_energy", "tangle", "overlap", "restart"]
        )
        for rec in result.trace.records:
            writer.writerow(
                [
                    rec.iteration,
                    repr(rec.energy_estimate),
                    repr(rec.std_error),
                    repr(rec.exact_energy),
                    "" if rec.tangle is None else repr(rec.tangle),
                    repr(rec.overlap),
                    int(rec.restart),
                ]
            )


def _summary_payload(result: VqeResult, config: RunConfig, **extra) -> dict:
    payload = {
        "best_parameters": [float(v) for v in result.best_parameters],
        "best_energy": result.best_energy,
        "evaluations": result.trace.evaluations,
        "restarts": result.trace.restarts,
        "converged": result.converged,
        "reason": result.reason,
        "seed": config.seed,
        "policy": config.policy,
        "mode": config.mode,
    }
    payload.update(extra)
    return payload


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _prepare_out_dir(config: RunConfig) -> Path:
    if not config.out:
        raise ConfigError("run mode requires an output directory (--out)")
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "config.json", config.to_flat_dict())
    return out


def _run_vqe_mode(config: RunConfig, out: Path) -> dict:
    hamiltonian = load_hamiltonian(config.hamiltonian)
    ansatz = AnsatzSpec(hamiltonian.n_qubits, config.layers)
    result = run_vqe(
        hamiltonian, ansatz, config.shot_policy(), config.optimizer_config(), config.seed
    )
    _write_trace_csv(out / "trace.csv", result)
    ground = exact_spectrum(hamiltonian).ground_energy()
    payload = _summary_payload(result, config, exact_ground_energy=ground)
    _write_json(out / "summary.json", payload)
    return payload


def _run_folded_mode(config: RunConfig, out: Path) -> dict:
    hamiltonian = load_hamiltonian(config.hamiltonian)
    ansatz = AnsatzSpec(hamiltonian.n_qubits, config.layers)
    shifts = []
    for index, shift in enumerate(config.lambdas):
        sub = out / f"lambda_{index:02d}"
        sub.mkdir(parents=True, exist_ok=True)
        folded: FoldedResult = run_folded(
            hamiltonian,
            shift,
            ansatz,
            config.shot_policy(),
            config.optimizer_config(),
            derive_seed(config.seed, STREAM_SCAN, index),
        )
        _write_trace_csv(sub / "trace.csv", folded.vqe)
        payload = _summary_payload(
            folded.vqe,
            config,
            shift=shift,
            folded_energy=folded.folded_energy,
            recovered_eigenvalue=folded.recovered_eigenvalue,
        )
        _write_json(sub / "summary.json", payload)
        shifts.append(
            {
                "lambda": shift,
                "recovered_eigenvalue": folded.recovered_eigenvalue,
                "folded_energy": folded.folded_energy,
                "directory": sub.name,
            }
        )
    collective = {"mode": config.mode, "seed": config.seed, "shifts": shifts}
    _write_json(out / "summary.json", collective)
    return collective


@dataclass
class ScanRow:
    """One curve point: freshly re-measured energy at the optimized parameters."""

    label: float
    energy_estimate: float
    exact_ground: float
    std_error: float
    result: VqeResult


def scan_curve(
    points: list[ScanPoint],
    ansatz: AnsatzSpec,
    policy: ShotPolicy,
    optimizer_config,
    seed: int,
) -> list[ScanRow]:
    """Run one VQE per scan point (independent derived seeds), in label order.

    The curve value is re-measured at the best parameters with a fresh
    stream label: the running best of noisy evaluations is
    selection-biased low, a fresh estimate is not.
    """
    rows: list[ScanRow] = []
    for index, point in enumerate(points):
        point_seed = derive_seed(seed, STREAM_SCAN, index)
        result = run_vqe(point.hamiltonian, ansatz, policy, optimizer_config, point_seed)
        estimate = estimate_energy(
            (ansatz, result.best_parameters),
            point.hamiltonian,
            policy,
            RngStream(point_seed),
            iteration=result.trace.evaluations,
        )
        rows.append(
            ScanRow(
                label=point.label,
                energy_estimate=estimate.value,
                exact_ground=exact_spectrum(point.hamiltonian).ground_energy(),
                std_error=estimate.std_error,
                result=result,
            )
        )
    return rows


def _fit_variances(std_errors: list[float]) -> list[float]:
    # Exact-mode scans have zero measurement variance; fall back to
    # equal unit weights so the fit stays defined.
    if all(err > 0 for err in std_errors):
        return [err * err for err in std_errors]
    return [1.0] * len(std_errors)


def scan_fit(
    rows: list[ScanRow],
    fit_window: tuple[float, float] | None,
    mc_samples: int,
    seed: int,
):
    """Weighted quadratic fit over the window plus Monte-Carlo uncertainties."""
    window = fit_window or (rows[0].label, rows[-1].label)
    selected = [row for row in rows if window[0] <= row.label <= window[1]]
    variances = _fit_variances([row.std_error for row in selected])
    fit = fit_quadratic_minimum(
        [(row.label, row.energy_estimate, var) for row, var in zip(selected, variances)]
    )
    uncertainty = monte_carlo_minimum_uncertainty(
        fit, mc_samples, derived_generator(seed, STREAM_MC)
    )
    return fit, uncertainty, window, len(selected)


def _run_scan_mode(config: RunConfig, out: Path) -> dict:
    points = load_scan(config.scan)
    policy = config.shot_policy()
    ansatz = AnsatzSpec(points[0].hamiltonian.n_qubits, config.layers)
    trace_dir = out / "traces"
    trace_dir.mkdir(parents=True, exist_ok=True)

    rows = scan_curve(points, ansatz, policy, config.optimizer_config(), config.seed)
    for index, row in enumerate(rows):
        _write_trace_csv(trace_dir / f"point_{index:02d}.csv", row.result)

    with (out / "curve.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["R", "E_est", "E_exact", "std_error"])
        for row in rows:
            writer.writerow(
                [repr(row.label), repr(row.energy_estimate), repr(row.exact_ground), repr(row.std_error)]
            )

    fit, uncertainty, window, points_used = scan_fit(
        rows, config.fit_window, config.mc_samples, config.seed
    )
    fit_payload = {
        "coefficients": {"a": fit.a, "b": fit.b, "c": fit.c},
        "covariance": [[float(v) for v in row] for row in fit.covariance],
        "r_min": fit.r_min,
        "e_min": fit.e_min,
        "sigma_r_min": uncertainty.sigma_r_min,
        "sigma_e_min": uncertainty.sigma_e_min,
        "discarded_fraction": uncertainty.discarded_fraction,
        "warning_high_discard": uncertainty.warning,
        "fit_window": list(window),
        "points_used": points_used,
        "mc_samples": config.mc_samples,
    }
    _write_json(out / "fit.json", fit_payload)
    return fit_payload


def _run_ucc_mode(config: RunConfig, out: Path) -> dict:
    hamiltonian, ansatz = _ucc_hamiltonian(config)
    result = ucc_vqe(
        hamiltonian, ansatz, config.shot_policy(), config.optimizer_config(), config.seed
    )
    _write_trace_csv(out / "trace.csv", result)
    reference_energy = exact_energy(ansatz.reference_state(), hamiltonian)
    ground = exact_spectrum(hamiltonian).ground_energy()
    payload = _summary_payload(
        result,
        config,
        reference=config.reference,
        reference_energy=reference_energy,
        exact_ground_energy=ground,
        excitations=[list(exc) for exc in ansatz.excitations],
    )
    _write_json(out / "summary.json", payload)
    return payload


def run_config(config: RunConfig) -> dict:
    """Execute a run and write its artifacts; returns the summary payload."""
    out = _prepare_out_dir(config)
    if config.mode == "vqe":
        return _run_vqe_mode(config, out)
    if config.mode == "folded":
        return _run_folded_mode(config, out)
    if config.mode == "scan":
        return _run_scan_mode(config, out)
    return _run_ucc_mode(config, out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vqesim",
        description="Variational eigensolver experiments on a simulated QPU",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "run an experiment and write artifacts"),
        ("validate", "dry-run: parse inputs and report sizes and shot budget"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="flat JSON config file; flags override its keys")
        p.add_argument("--mode", choices=MODES)
        p.add_argument("--hamiltonian", help="Hamiltonian text file")
        p.add_argument("--scan", help="scan JSON file")
        p.add_argument("--integrals", help="molecular integrals JSON file")
        p.add_argument("--seed", type=int, help="64-bit run seed (mandatory)")
        policy = p.add_mutually_exclusive_group()
        policy.add_argument("--shots", type=int, help="fixed shots per term")
        policy.add_argument("--precision", type=float, help="target precision p")
        policy.add_argument("--exact", action="store_true", help="noiseless estimation")
        p.add_argument("--layers", type=int, help="ansatz entangling layers")
        p.add_argument("--lambda", dest="lambdas", help="comma-separated folded shifts")
        p.add_argument("--fit-window", dest="fit_window", help="scan fit window 'lo,hi'")
        p.add_argument("--out", help="output directory")
        p.add_argument("--reference", help="UCC reference occupation bitstring")
        p.add_argument("--cluster-cap", dest="cluster_cap", type=int, help="UCC excitation cap (1 or 2)")
        p.add_argument("--mc-samples", dest="mc_samples", type=int, help="Monte-Carlo samples for fit uncertainty")
        p.add_argument("--optimizer", choices=OPTIMIZERS)
        p.add_argument("--bias", type=float, help="constant systematic shift on sampled estimates")
        p.add_argument("--nm-initial-scale", dest="nm_initial_scale", type=float)
        p.add_argument("--nm-tolerance", dest="nm_tolerance", type=float)
        p.add_argument("--nm-stagnation-window", dest="nm_stagnation_window", type=int)
        p.add_argument("--nm-restart-limit", dest="nm_restart_limit", type=int)
        p.add_argument("--nm-max-evaluations", dest="nm_max_evaluations", type=int)
        p.add_argument("--gd-step-size", dest="gd_step_size", type=float)
        p.add_argument("--gd-max-evaluations", dest="gd_max_evaluations", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = merge_config(args)
        if args.command == "validate":
            report = validate_config(config)
            for line in report.lines():
                print(line)
        else:
            summary = run_config(config)
            print(json.dumps(summary, indent=2, sort_keys=True))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
