"""CLI: spec validation, artifact formats, verification suites, figure data."""

import json
import math

import numpy as np
import pytest

from riccatipot import oracle
from riccatipot.cli import _verify_reports, build_family, load_spec, main


def _write_spec(tmp_path, doc, name="spec.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


def _read_csv(path):
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return header, data


class TestSpecValidation:
    def test_unknown_kind(self, tmp_path, capsys):
        p = _write_spec(tmp_path, {"kind": "frobnicator"})
        assert main(["construct", str(p), "--out", str(tmp_path)]) == 2
        assert "frobnicator" in capsys.readouterr().err

    def test_unknown_parameter_named(self, tmp_path, capsys):
        p = _write_spec(tmp_path, {"kind": "oscillator",
                                   "parameters": {"A": 0.9, "omega": 2}})
        assert main(["construct", str(p), "--out", str(tmp_path)]) == 2
        assert "omega" in capsys.readouterr().err

    def test_zero_A_rejected(self, tmp_path, capsys):
        p = _write_spec(tmp_path, {"kind": "quadratic", "parameters": {"A": 0}})
        assert main(["construct", str(p), "--out", str(tmp_path)]) == 2
        assert "A must be nonzero" in capsys.readouterr().err

    def test_unknown_top_level_key(self, tmp_path):
        p = _write_spec(tmp_path, {"kind": "oscillator",
                                   "parameters": {"A": 1}, "extra": 1})
        assert main(["construct", str(p), "--out", str(tmp_path)]) == 2

    def test_solver_error_exit_code(self, tmp_path, capsys):
        # trigonometric branch with A < 0 cannot be built
        p = _write_spec(tmp_path, {"kind": "quadratic",
                                   "parameters": {"A": -1, "B": 0, "C": -1}})
        rc = main(["construct", str(p), "--out", str(tmp_path)])
        assert rc == 2  # seed validation failure


class TestConstruct:
    def test_oscillator_artifacts(self, tmp_path):
        p = _write_spec(tmp_path, {"kind": "oscillator", "parameters": {"A": 0.9},
                                   "n_max": 2})
        out = tmp_path / "out"
        assert main(["construct", str(p), "--out", str(out)]) == 0

        family = json.loads((out / "family.json").read_text())
        assert family["branch"] == "trigonometric"
        assert family["e0"] == 1.0

        header, data = _read_csv(out / "states.csv")
        assert header == ["x", "V", "psi0", "psi1", "psi2"]
        x = data[:, 0]
        assert np.all(np.diff(x) > 0)
        assert np.all(np.isfinite(data))
        dx = x[1] - x[0]
        for k in range(2, 5):
            assert np.sum(data[:, k] ** 2) * dx == pytest.approx(1.0, abs=1e-6)

        spectrum = json.loads((out / "spectrum.json").read_text())
        energies = [lv["energy"] for lv in spectrum["levels"]]
        assert energies == pytest.approx([1.0, 3.9, 8.6], abs=1e-9)

    def test_new_potential_spectrum(self, tmp_path):
        p = _write_spec(tmp_path, {"kind": "new_potential", "n_max": 1})
        out = tmp_path / "np_out"
        assert main(["construct", str(p), "--out", str(out)]) == 0
        spectrum = json.loads((out / "spectrum.json").read_text())
        assert spectrum["levels"][0]["energy"] == pytest.approx(-1.0, abs=1e-12)
        assert -0.64 < spectrum["levels"][1]["energy"] < -0.62

    def test_seventeen_digit_round_trip(self, tmp_path):
        p = _write_spec(tmp_path, {"kind": "oscillator", "parameters": {"A": 0.9},
                                   "n_max": 0, "grid": {"points": 201}})
        out = tmp_path / "rt"
        main(["construct", str(p), "--out", str(out)])
        _, data1 = _read_csv(out / "states.csv")
        main(["construct", str(p), "--out", str(out)])
        _, data2 = _read_csv(out / "states.csv")
        assert np.array_equal(data1, data2)

    def test_rational_seed_kind(self, tmp_path):
        p = _write_spec(tmp_path, {
            "kind": "rational",
            "parameters": {"num": [1, 0, 1], "den": [1]},
            "grid": {"window": [-1.4, 1.4]}})
        out = tmp_path / "rat"
        assert main(["construct", str(p), "--out", str(out)]) == 0
        fam = json.loads((out / "family.json").read_text())
        assert fam["provenance"] == "quadrature"


class TestVerifyCommand:
    def test_box_all_suites_pass(self, tmp_path):
        p = _write_spec(tmp_path, {"kind": "oscillator", "parameters": {"A": 1},
                                   "n_max": 2})
        rep = tmp_path / "report.json"
        rc = main(["verify", str(p), "--suite", "all", "--out", str(rep)])
        assert rc == 0
        doc = json.loads(rep.read_text())
        assert doc["all_passed"]

    def test_morse_residuals(self, tmp_path):
        p = _write_spec(tmp_path, {"kind": "morse",
                                   "parameters": {"A": 1, "C": 2}, "n_max": 0})
        assert main(["verify", str(p), "--suite", "residuals"]) == 0

    def test_new_potential_oracle(self, tmp_path):
        p = _write_spec(tmp_path, {"kind": "new_potential", "n_max": 1})
        rep = tmp_path / "report.json"
        rc = main(["verify", str(p), "--suite", "oracle", "--out", str(rep)])
        assert rc == 0
        doc = json.loads(rep.read_text())
        ground = next(r for r in doc["reports"] if r["check"] == "oracle_energy[n=0]")
        assert ground["max_residual"] < 1e-3

    def test_round_trip_reports_identical(self, tmp_path):
        spec_doc = {"kind": "oscillator", "parameters": {"A": 0.9}, "n_max": 1}
        p = _write_spec(tmp_path, spec_doc)
        spec = load_spec(p)
        in_process = [r.as_dict() for r in _verify_reports(spec, ["residuals"])]
        reread = [r.as_dict() for r in _verify_reports(load_spec(p), ["residuals"])]
        assert in_process == reread


class TestFigure1:
    def test_A09_domain_and_nodes(self, tmp_path):
        out = tmp_path / "fig"
        assert main(["figure1", "--A", "0.9", "--out", str(out)]) == 0
        header, data = _read_csv(out / "fig1a.csv")
        assert header == ["x", "psi0", "psi1", "psi2"]
        half = math.pi / (2 * math.sqrt(0.9))
        assert data[0, 0] == pytest.approx(-half, rel=1e-4)
        assert data[-1, 0] == pytest.approx(half, rel=1e-4)
        for k, expected in ((1, 0), (2, 1), (3, 2)):
            assert oracle.count_nodes(data[:, k]) == expected
        # companion file holds the three Hermite-Gaussian limit states
        header_b, data_b = _read_csv(out / "fig1b.csv")
        for k, expected in ((1, 0), (2, 1), (3, 2)):
            assert oracle.count_nodes(data_b[:, k]) == expected

    def test_box_modes(self, tmp_path):
        out = tmp_path / "figbox"
        assert main(["figure1", "--A", "1", "--out", str(out)]) == 0
        _, data = _read_csv(out / "fig1a.csv")
        x = data[:, 0]
        dx = x[1] - x[0]
        for k, target in ((1, np.cos(x)), (2, np.sin(2 * x)), (3, np.cos(3 * x))):
            t = target / math.sqrt(float(np.sum(target ** 2)) * dx)
            assert np.max(np.abs(np.abs(data[:, k]) - np.abs(t))) < 1e-6

    def test_wide_A_accepted_with_shrunken_domain(self, tmp_path):
        out = tmp_path / "figw"
        assert main(["figure1", "--A", "1.5", "--out", str(out)]) == 0
        _, data = _read_csv(out / "fig1a.csv")
        half = math.pi / (2 * math.sqrt(1.5))
        assert data[-1, 0] == pytest.approx(half, rel=1e-4)

    def test_invalid_A(self, tmp_path):
        assert main(["figure1", "--A", "-1", "--out", str(tmp_path)]) == 2


class TestBuildFamily:
    def test_exactness_preserved_through_json_numbers(self):
        fam = build_family({"kind": "oscillator", "parameters": {"A": 0.9},
                            "n_max": 1})
        # 0.9 rationalizes to 9/10, keeping the ladder exact
        assert fam.rungs[1].exact
        assert fam.rungs[1].energy_offset == pytest.approx(2.9, abs=1e-15)
