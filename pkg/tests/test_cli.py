import json
from pathlib import Path

import numpy as np
import pytest

from vqesim import exact_spectrum
from vqesim.cli import (
    ConfigError,
    RunConfig,
    config_from_mapping,
    main,
    run_config,
    validate_config,
)
from vqesim.formats import load_hamiltonian, write_scan
from vqesim.synthetic import parabola_scan

TWO_QUBIT_FILE = "0.3 II\n-0.6 ZI\n0.4 IZ\n-0.2 ZZ\n0.5 XX\n"


@pytest.fixture
def hamiltonian_file(tmp_path):
    path = tmp_path / "hamiltonian.txt"
    path.write_text(TWO_QUBIT_FILE)
    return path


@pytest.fixture
def scan_file(tmp_path):
    points = parabola_scan(np.linspace(1.0, 5.0, 5), 3.0, 0.05, -1.0, n_qubits=1)
    path = tmp_path / "scan.json"
    write_scan(path, points)
    return path


@pytest.fixture
def integrals_file(tmp_path):
    payload = {
        "n_modes": 4,
        "one_body": [
            [1, 1, -1.8], [2, 2, -1.3], [3, 3, -0.4], [4, 4, -0.2],
            [1, 3, 0.25], [3, 1, 0.25],
        ],
        "two_body": [[1, 2, 2, 1, 0.6], [2, 1, 1, 2, 0.6]],
    }
    path = tmp_path / "integrals.json"
    path.write_text(json.dumps(payload))
    return path


class TestRunConfig:
    def test_seed_mandatory(self, hamiltonian_file):
        with pytest.raises(ConfigError, match="seed"):
            RunConfig(mode="vqe", hamiltonian=str(hamiltonian_file))

    def test_mode_required_fields(self):
        with pytest.raises(ConfigError, match="hamiltonian"):
            RunConfig(mode="vqe", seed=1)
        with pytest.raises(ConfigError, match="lambda"):
            RunConfig(mode="folded", seed=1, hamiltonian="h.txt")
        with pytest.raises(ConfigError, match="scan"):
            RunConfig(mode="scan", seed=1)
        with pytest.raises(ConfigError, match="integrals"):
            RunConfig(mode="ucc", seed=1)

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError, match="unknown config keys"):
            config_from_mapping({"mode": "vqe", "seed": 1, "hamiltoniann": "x"})

    def test_bad_policy_rejected(self, hamiltonian_file):
        with pytest.raises(ConfigError):
            RunConfig(mode="vqe", seed=1, hamiltonian=str(hamiltonian_file), policy="shots:0")

    def test_fit_window_ordering(self, scan_file):
        with pytest.raises(ConfigError, match="lo < hi"):
            RunConfig(mode="scan", seed=1, scan=str(scan_file), fit_window=(5.0, 1.0))


class TestValidate:
    def test_precision_budget_report(self, hamiltonian_file):
        config = RunConfig(
            mode="vqe", seed=1, hamiltonian=str(hamiltonian_file), policy="precision:0.1"
        )
        report = validate_config(config)
        assert report.n_qubits == 2
        assert report.parameter_count == 12
        # ceil(h^2/p^2) per term: II 9, ZI 36, IZ 16, ZZ 4, XX 25
        assert report.entries[0].per_term_shots == (9, 36, 16, 4, 25)
        assert report.shots_per_evaluation == 90

    def test_unit_coefficient_cost_model(self, tmp_path):
        path = tmp_path / "single.txt"
        path.write_text("1.0 Z\n")
        config = RunConfig(mode="vqe", seed=1, hamiltonian=str(path), policy="precision:0.01")
        assert validate_config(config).shots_per_evaluation == 10_000

    def test_budget_bounded_by_max_term(self, hamiltonian_file):
        config = RunConfig(
            mode="vqe", seed=1, hamiltonian=str(hamiltonian_file), policy="precision:0.05"
        )
        report = validate_config(config)
        h = load_hamiltonian(hamiltonian_file)
        h_max = max(abs(c) for c, _ in h.terms)
        bound = h.term_count * int(np.ceil(h_max * h_max / 0.05**2))
        assert report.shots_per_evaluation <= bound

    def test_scan_reports_per_point(self, scan_file):
        config = RunConfig(mode="scan", seed=1, scan=str(scan_file), policy="shots:100")
        report = validate_config(config)
        assert len(report.entries) == 5
        assert all(e.total_shots == 300 for e in report.entries)

    def test_ucc_reports_parameters(self, integrals_file):
        config = RunConfig(
            mode="ucc", seed=1, integrals=str(integrals_file), reference="1100"
        )
        report = validate_config(config)
        assert report.parameter_count == 5
        assert report.n_qubits == 4


class TestRunModes:
    def test_vqe_artifacts(self, hamiltonian_file, tmp_path):
        out = tmp_path / "out"
        config = RunConfig(
            mode="vqe",
            seed=11,
            hamiltonian=str(hamiltonian_file),
            out=str(out),
            policy="shots:50",
            nm_max_evaluations=120,
        )
        summary = run_config(config)
        assert (out / "trace.csv").exists()
        assert (out / "summary.json").exists()
        assert (out / "config.json").exists()
        stored = json.loads((out / "summary.json").read_text())
        assert stored["best_energy"] == summary["best_energy"]
        header = (out / "trace.csv").read_text().splitlines()[0]
        assert header == "j,energy_estimate,std_error,exact_energy,tangle,overlap,restart"

    def test_vqe_exact_reaches_ground(self, hamiltonian_file, tmp_path):
        config = RunConfig(
            mode="vqe",
            seed=12,
            hamiltonian=str(hamiltonian_file),
            out=str(tmp_path / "out"),
            policy="exact",
            nm_max_evaluations=4000,
        )
        summary = run_config(config)
        truth = exact_spectrum(load_hamiltonian(hamiltonian_file)).ground_energy()
        assert summary["best_energy"] == pytest.approx(truth, abs=1e-6)

    def test_byte_identical_reruns(self, hamiltonian_file, tmp_path):
        artifacts = []
        for name in ("a", "b"):
            out = tmp_path / name
            config = RunConfig(
                mode="vqe",
                seed=21,
                hamiltonian=str(hamiltonian_file),
                out=str(out),
                policy="shots:60",
                nm_max_evaluations=90,
            )
            run_config(config)
            artifacts.append((out / "trace.csv").read_bytes())
        assert artifacts[0] == artifacts[1]

    def test_folded_outputs_per_lambda(self, tmp_path):
        path = tmp_path / "diag.txt"
        # diag(-1, 0, 1, 2) as a Pauli sum
        path.write_text("0.5 II\n-1.0 IZ\n-0.5 ZI\n")
        out = tmp_path / "out"
        config = RunConfig(
            mode="folded",
            seed=5,
            hamiltonian=str(path),
            lambdas=(0.1, 1.9),
            out=str(out),
            policy="exact",
            nm_max_evaluations=5000,
        )
        summary = run_config(config)
        assert (out / "lambda_00" / "trace.csv").exists()
        assert (out / "lambda_01" / "summary.json").exists()
        recovered = [entry["recovered_eigenvalue"] for entry in summary["shifts"]]
        assert recovered[0] == pytest.approx(0.0, abs=1e-4)
        assert recovered[1] == pytest.approx(2.0, abs=1e-4)

    def test_scan_curve_and_fit(self, scan_file, tmp_path):
        out = tmp_path / "out"
        config = RunConfig(
            mode="scan",
            seed=9,
            scan=str(scan_file),
            out=str(out),
            policy="shots:200",
            nm_max_evaluations=200,
            nm_stagnation_window=60,
            nm_initial_scale=0.6,
            mc_samples=2000,
        )
        run_config(config)
        lines = (out / "curve.csv").read_text().splitlines()
        assert len(lines) == 6  # header + 5 points
        rows = [line.split(",") for line in lines[1:]]
        labels = [float(r[0]) for r in rows]
        assert labels == sorted(labels)
        for row in rows:
            point_h = [p for p in parabola_scan(np.linspace(1.0, 5.0, 5), 3.0, 0.05, -1.0, n_qubits=1) if p.label == float(row[0])]
            truth = exact_spectrum(point_h[0].hamiltonian).ground_energy()
            assert float(row[2]) == pytest.approx(truth, abs=1e-9)
        fit = json.loads((out / "fit.json").read_text())
        assert "r_min" in fit and "sigma_r_min" in fit
        assert (out / "traces" / "point_00.csv").exists()

    def test_exact_scan_uses_unit_weights(self, scan_file, tmp_path):
        config = RunConfig(
            mode="scan",
            seed=10,
            scan=str(scan_file),
            out=str(tmp_path / "out"),
            policy="exact",
            nm_max_evaluations=1500,
            mc_samples=2000,
        )
        fit = run_config(config)
        assert fit["r_min"] == pytest.approx(3.0, abs=0.2)

    def test_ucc_run(self, integrals_file, tmp_path):
        out = tmp_path / "out"
        config = RunConfig(
            mode="ucc",
            seed=2,
            integrals=str(integrals_file),
            reference="1100",
            out=str(out),
            policy="exact",
            nm_max_evaluations=600,
        )
        summary = run_config(config)
        trace = (out / "trace.csv").read_text().splitlines()
        first_energy = float(trace[1].split(",")[1])
        assert first_energy == pytest.approx(summary["reference_energy"])
        assert summary["best_energy"] <= summary["reference_energy"] + 1e-12


class TestMainEntry:
    def test_validate_exit_zero(self, hamiltonian_file, capsys):
        code = main(
            ["validate", "--mode", "vqe", "--hamiltonian", str(hamiltonian_file), "--seed", "1", "--precision", "0.1"]
        )
        assert code == 0
        assert "shots/evaluation" in capsys.readouterr().out

    def test_missing_seed_is_config_error(self, hamiltonian_file, capsys):
        code = main(["validate", "--mode", "vqe", "--hamiltonian", str(hamiltonian_file)])
        assert code == 2
        assert "config error" in capsys.readouterr().err

    def test_malformed_file_is_input_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("0.5 ZI\n0.5 Z\n")
        code = main(["validate", "--mode", "vqe", "--hamiltonian", str(bad), "--seed", "1"])
        assert code == 3
        err = capsys.readouterr().err
        assert "input error" in err and ":2:" in err

    def test_missing_file_is_input_error(self, tmp_path):
        code = main(
            ["validate", "--mode", "vqe", "--hamiltonian", str(tmp_path / "nope.txt"), "--seed", "1"]
        )
        assert code == 3

    def test_flags_override_config(self, hamiltonian_file, tmp_path, capsys):
        config_path = tmp_path / "config.json"
        config_path.write_text(
            json.dumps(
                {
                    "mode": "vqe",
                    "hamiltonian": str(hamiltonian_file),
                    "seed": 1,
                    "policy": "shots:5",
                }
            )
        )
        code = main(["validate", "--config", str(config_path), "--precision", "0.1"])
        assert code == 0
        out = capsys.readouterr().out
        assert "precision:0.1" in out

    def test_run_writes_artifacts(self, hamiltonian_file, tmp_path, capsys):
        out = tmp_path / "run_out"
        code = main(
            [
                "run",
                "--mode", "vqe",
                "--hamiltonian", str(hamiltonian_file),
                "--seed", "3",
                "--shots", "40",
                "--nm-max-evaluations", "60",
                "--out", str(out),
            ]
        )
        assert code == 0
        assert (out / "trace.csv").exists()

    def test_unwritable_output_is_reported(self, hamiltonian_file, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("file, not a directory")
        code = main(
            [
                "run",
                "--mode", "vqe",
                "--hamiltonian", str(hamiltonian_file),
                "--seed", "3",
                "--exact",
                "--nm-max-evaluations", "40",
                "--out", str(blocker / "sub"),
            ]
        )
        assert code == 4
        assert "error" in capsys.readouterr().err
