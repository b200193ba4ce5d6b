import json

import numpy as np
import pytest

from thompsonmodes.cli import main, shipped_config
from thompsonmodes.model import ArrayConfig, save_config
from thompsonmodes.spectra_io import read_measurement, read_report


@pytest.fixture
def configs(tmp_path):
    paths = {}
    for name in ("monomeric", "dimeric", "degenerate"):
        paths[name] = tmp_path / f"{name}.json"
        save_config(shipped_config(name), paths[name])
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSimulate:
    def test_counts(self, capsys, configs, tmp_path):
        code, out, _ = run(capsys, "simulate", "--config", configs["monomeric"], "--out", tmp_path / "m.json")
        assert code == 0
        ms = read_measurement(tmp_path / "m.json")
        assert len(ms.full_peaks_hz) == 5
        assert [len(s) for s in ms.sub_peaks_hz] == [4] * 5
        assert "band gap: no" in out

    def test_byte_identical(self, capsys, configs, tmp_path):
        for name in ("a", "b"):
            run(capsys, "simulate", "--config", configs["monomeric"], "--out", tmp_path / f"{name}.json",
                "--noise", "1e-4", "--seed", "3")
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_dimeric_band_gap(self, capsys, configs, tmp_path):
        code, out, _ = run(capsys, "simulate", "--config", configs["dimeric"], "--out", tmp_path / "m.json")
        assert code == 0 and "band gap: yes" in out

    def test_traces(self, capsys, configs, tmp_path):
        run(capsys, "simulate", "--config", configs["monomeric"], "--out", tmp_path / "m.json",
            "--traces-dir", tmp_path / "traces")
        assert sorted(p.name for p in (tmp_path / "traces").iterdir()) == [
            "deletion_1.csv", "deletion_2.csv", "deletion_3.csv", "deletion_4.csv", "deletion_5.csv", "full.csv"
        ]

    def test_missing_config(self, capsys, tmp_path):
        code, _, err = run(capsys, "simulate", "--config", tmp_path / "nope.json", "--out", tmp_path / "m.json")
        assert code == 5 and "error" in err

    def test_bad_config(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({"n": 2}))
        code, _, _ = run(capsys, "simulate", "--config", p, "--out", tmp_path / "m.json")
        assert code == 2


class TestRecover:
    def simulate(self, capsys, configs, tmp_path, name="monomeric"):
        run(capsys, "simulate", "--config", configs[name], "--out", tmp_path / "m.json")
        return tmp_path / "m.json"

    def test_exact(self, capsys, configs, tmp_path):
        m = self.simulate(capsys, configs, tmp_path)
        code, out, _ = run(capsys, "recover", "--measurement", m, "--config", configs["monomeric"],
                           "--out", tmp_path / "r.json")
        assert code == 0
        report = read_report(tmp_path / "r.json")
        assert report.symmetrized and report.modes.shape == (5, 5)
        code, out, _ = run(capsys, "compare", "--report", tmp_path / "r.json", "--config", configs["monomeric"],
                           "--tol", "1e-8")
        assert code == 0 and "PASS" in out

    def test_non_hermitian_needs_ratios(self, capsys, configs, tmp_path):
        m = self.simulate(capsys, configs, tmp_path, "dimeric")
        code, _, err = run(capsys, "recover", "--measurement", m, "--non-hermitian", "--out", tmp_path / "r.json")
        assert code == 2 and "MissingCapacitanceRatios" in err

    def test_explicit_ratios(self, capsys, configs, tmp_path):
        m = self.simulate(capsys, configs, tmp_path, "dimeric")
        cap = shipped_config("dimeric").capacitances_f
        ratios = ",".join(str(float(x)) for x in cap / cap[0])
        code, _, _ = run(capsys, "recover", "--measurement", m, "--non-hermitian", "--capacitance-ratios", ratios,
                         "--out", tmp_path / "r.json")
        assert code == 0
        code, _, _ = run(capsys, "compare", "--report", tmp_path / "r.json", "--config", configs["dimeric"],
                         "--tol", "1e-8")
        assert code == 0

    def test_repair_deltas_listed(self, capsys, tmp_path):
        p = tmp_path / "m.json"
        p.write_text(json.dumps({"full_peaks_hz": [190e6, 200e6, 210e6],
                                 "sub_peaks_hz": [[185e6, 205e6], [195e6, 205e6], [195e6, 205e6]]}))
        code, out, _ = run(capsys, "recover", "--measurement", p, "--out", tmp_path / "r.json")
        assert code == 0
        assert "interlacing repair deltas" in out
        assert "warning: interlacing repair moved 1" in out

    def test_degenerate_exit_4(self, capsys, configs, tmp_path):
        m = self.simulate(capsys, configs, tmp_path, "degenerate")
        code, _, err = run(capsys, "recover", "--measurement", m, "--config", configs["degenerate"],
                           "--out", tmp_path / "r.json")
        assert code == 4 and "DegenerateSpectrum" in err

    def test_bad_measurement(self, capsys, tmp_path):
        p = tmp_path / "m.json"
        p.write_text(json.dumps({"full_peaks_hz": [1e8], "sub_peaks_hz": [[]], "bogus": 0}))
        code, _, _ = run(capsys, "recover", "--measurement", p, "--out", tmp_path / "r.json")
        assert code == 2


class TestCompare:
    def test_mismatch_exit_1(self, capsys, configs, tmp_path):
        run(capsys, "simulate", "--config", configs["monomeric"], "--out", tmp_path / "m.json")
        run(capsys, "recover", "--measurement", tmp_path / "m.json", "--config", configs["monomeric"],
            "--out", tmp_path / "r.json")
        other = shipped_config("monomeric").to_dict() | {"coupling_coefficients": [-0.1, -0.02, -0.01, -0.002]}
        save_config(ArrayConfig.from_dict(other), tmp_path / "other.json")
        code, out, _ = run(capsys, "compare", "--report", tmp_path / "r.json", "--config", tmp_path / "other.json",
                           "--tol", "1e-8")
        assert code == 1 and "FAIL" in out

    def test_size_mismatch(self, capsys, configs, tmp_path):
        run(capsys, "simulate", "--config", configs["degenerate"], "--out", tmp_path / "m.json")
        p = tmp_path / "m.json"
        run(capsys, "simulate", "--config", configs["monomeric"], "--out", p)
        run(capsys, "recover", "--measurement", p, "--config", configs["monomeric"], "--out", tmp_path / "r.json")
        code, _, _ = run(capsys, "compare", "--report", tmp_path / "r.json", "--config", configs["degenerate"])
        assert code == 2


class TestPeaksAndPlot:
    def test_traces_to_recovery(self, capsys, configs, tmp_path):
        run(capsys, "simulate", "--config", configs["monomeric"], "--out", tmp_path / "m.json",
            "--traces-dir", tmp_path / "t")
        traces = [tmp_path / "t" / "full.csv"] + [tmp_path / "t" / f"deletion_{j}.csv" for j in range(1, 6)]
        code, _, _ = run(capsys, "peaks", *traces, "--expected-count", "5", "--out", tmp_path / "p.json")
        assert code == 0
        detected = read_measurement(tmp_path / "p.json")
        exact = read_measurement(tmp_path / "m.json")
        np.testing.assert_allclose(detected.full_peaks_hz, exact.full_peaks_hz, rtol=1e-3)

    def test_peaks_count_mismatch(self, capsys, configs, tmp_path):
        run(capsys, "simulate", "--config", configs["monomeric"], "--out", tmp_path / "m.json",
            "--traces-dir", tmp_path / "t")
        code, _, _ = run(capsys, "peaks", tmp_path / "t" / "full.csv", "--expected-count", "4")
        assert code == 2

    def test_plot(self, capsys, configs, tmp_path):
        run(capsys, "simulate", "--config", configs["monomeric"], "--out", tmp_path / "m.json")
        run(capsys, "recover", "--measurement", tmp_path / "m.json", "--config", configs["monomeric"],
            "--out", tmp_path / "r.json")
        code, _, _ = run(capsys, "plot", "--report", tmp_path / "r.json", "--out", tmp_path / "f.svg",
                         "--config", configs["monomeric"])
        assert code == 0
        assert (tmp_path / "f.svg").read_text().count('class="model-bar"') == 25


class TestDemo:
    def test_default_passes(self, capsys, tmp_path):
        code, out, _ = run(capsys, "demo", "--out", tmp_path / "d")
        assert code == 0
        assert out.count("PASS") == 2
        names = {p.name for p in (tmp_path / "d").iterdir()}
        assert {"monomeric_report.json", "dimeric_report.json", "monomeric.svg", "dimeric.svg"} <= names

    def test_noisy_completes(self, capsys, tmp_path):
        code, out, _ = run(capsys, "demo", "--out", tmp_path / "d", "--noise", "1e-4", "--seed", "1")
        assert code == 0 and "max mode error" in out

    def test_reproducible(self, capsys, tmp_path):
        for d in ("a", "b"):
            run(capsys, "demo", "--out", tmp_path / d, "--noise", "1e-4", "--seed", "4")
        for p in sorted((tmp_path / "a").iterdir()):
            assert p.read_bytes() == (tmp_path / "b" / p.name).read_bytes()
