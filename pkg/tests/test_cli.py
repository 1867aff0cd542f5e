import json
import math

import numpy as np
import pytest

from ma_placement import (
    RegionGrid,
    SensingParams,
    discrete_deployment,
    worst_case_speb,
)
from ma_placement.cli import main

LAM = 0.01
A = 25 * LAM


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestDesignEvaluateRoundTrip:
    def test_bit_exact(self, tmp_path, capsys):
        pos = tmp_path / "pos.txt"
        rep = run_json(
            capsys,
            "design",
            "--wavelength", str(LAM),
            "--half-aperture", str(A),
            "-N", "25",
            "--n-u", "41",
            "--n-r", "21",
            "-o", str(pos),
        )
        assert rep["design"] == "proposed"
        assert rep["n"] == 25
        assert rep["clusters"] == [6, 13, 6]
        ev = run_json(
            capsys,
            "evaluate",
            "--wavelength", str(LAM),
            "--half-aperture", str(A),
            "--n-u", "41",
            "--n-r", "21",
            str(pos),
        )
        # the persisted positions reproduce the bound bit-for-bit
        assert ev["worst_case_speb_m2"] == rep["worst_case_speb_m2"]
        assert ev["worst_u"] == rep["worst_u"]
        assert ev["worst_r_m"] == rep["worst_r_m"]

    def test_report_matches_library(self, tmp_path, capsys):
        pos = tmp_path / "pos.txt"
        rep = run_json(
            capsys,
            "design",
            "--wavelength", str(LAM),
            "--half-aperture", str(A),
            "-N", "25",
            "--n-u", "41",
            "--n-r", "21",
            "-o", str(pos),
        )
        geom = discrete_deployment(25, A, LAM)
        params = SensingParams.from_snr_db(LAM, 1024, 25, 5.0)
        from ma_placement import NearFieldRegion

        grid = RegionGrid(NearFieldRegion(A, LAM, 0.999), 41, 21)
        expect = worst_case_speb(geom, params, grid)
        assert rep["worst_case_speb_m2"] == expect.worst_case_speb
        assert rep["worst_case_rmse_m"] == pytest.approx(
            math.sqrt(expect.worst_case_speb), rel=1e-15
        )
        written = [float(line) for line in pos.read_text().split()]
        assert written == pytest.approx(list(geom.positions), rel=1e-16)

    def test_positions_written_full_precision(self, tmp_path, capsys):
        pos = tmp_path / "pos.txt"
        run_json(
            capsys,
            "design",
            "--wavelength", str(LAM),
            "--half-aperture", str(A),
            "-N", "4",
            "--n-u", "11",
            "--n-r", "11",
            "-o", str(pos),
        )
        geom = discrete_deployment(4, A, LAM)
        assert [float(v) for v in pos.read_text().split()] == list(geom.positions)


class TestConfigHandling:
    def test_file_values_used(self, tmp_path, capsys):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(
            "# experiment\n"
            f"wavelength = {LAM}\n"
            f"half_aperture = {A}\n"
            "antennas = 5\n"
            "n_u = 11\n"
            "n_r = 11\n"
            "snr_db = 10\n"
        )
        pos = tmp_path / "pos.txt"
        rep = run_json(capsys, "design", "--config", str(cfg), "-o", str(pos))
        assert rep["n"] == 5
        assert rep["snr_db"] == 10.0

    def test_cli_overrides_file(self, tmp_path, capsys):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(f"wavelength = {LAM}\nantennas = 5\nn_u=11\nn_r=11\n")
        pos = tmp_path / "pos.txt"
        rep = run_json(
            capsys, "design", "--config", str(cfg), "-N", "7", "-o", str(pos)
        )
        assert rep["n"] == 7

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text("wavelegnth = 0.01\n")
        code, _, err = run(capsys, "design", "--config", str(cfg))
        assert code == 2
        assert json.loads(err)["error"] == "config-error"

    def test_wavelength_and_frequency_conflict(self, capsys, tmp_path):
        code, _, err = run(
            capsys,
            "design",
            "--wavelength", "0.01",
            "--frequency", "28e9",
            "-o", str(tmp_path / "p.txt"),
        )
        assert code == 2
        assert "exactly one" in json.loads(err)["message"]

    def test_default_frequency_28ghz(self, tmp_path, capsys):
        pos = tmp_path / "pos.txt"
        rep = run_json(
            capsys, "design", "-N", "5", "--n-u", "11", "--n-r", "11",
            "-o", str(pos),
        )
        assert rep["lambda_m"] == pytest.approx(2.99792458e8 / 28e9, rel=1e-15)
        assert rep["a_m"] == pytest.approx(25 * rep["lambda_m"], rel=1e-15)

    def test_bad_u_max(self, capsys, tmp_path):
        code, _, err = run(
            capsys,
            "design",
            "--wavelength", str(LAM),
            "--u-max", "1.5",
            "-o", str(tmp_path / "p.txt"),
        )
        assert code == 2


class TestEvaluate:
    def test_enforce_spacing_violation(self, tmp_path, capsys):
        pos = tmp_path / "pos.txt"
        pos.write_text("-0.25\n0.0\n0.001\n0.25\n")
        code, _, err = run(
            capsys,
            "evaluate",
            "--wavelength", str(LAM),
            "--enforce-spacing",
            str(pos),
        )
        assert code == 3
        assert json.loads(err)["error"] == "spacing-violation"

    def test_spacing_ok_without_flag(self, tmp_path, capsys):
        pos = tmp_path / "pos.txt"
        pos.write_text("-0.25\n0.0\n0.001\n0.25\n")
        rep = run_json(
            capsys,
            "evaluate",
            "--wavelength", str(LAM),
            "--n-u", "11",
            "--n-r", "11",
            str(pos),
        )
        assert rep["worst_case_speb_m2"] > 0

    def test_source_report(self, tmp_path, capsys):
        pos = tmp_path / "pos.txt"
        pos.write_text("-0.25\n0.0\n0.25\n")
        rep = run_json(
            capsys,
            "evaluate",
            "--wavelength", str(LAM),
            "--n-u", "11",
            "--n-r", "11",
            "--source", "0.3", "10.0",
            str(pos),
        )
        from ma_placement import ArrayGeometry, SourcePosition, speb

        params = SensingParams.from_snr_db(LAM, 1024, 3, 5.0)
        g = ArrayGeometry((-0.25, 0.0, 0.25), 0.25, LAM)
        assert rep["source_speb_m2"] == speb(g, params, SourcePosition(0.3, 10.0))

    def test_malformed_positions_file(self, tmp_path, capsys):
        pos = tmp_path / "pos.txt"
        pos.write_text("-0.25\nhello\n0.25\n")
        code, _, err = run(capsys, "evaluate", "--wavelength", str(LAM), str(pos))
        assert code == 3

    def test_missing_positions_file(self, tmp_path, capsys):
        code, _, err = run(
            capsys, "evaluate", "--wavelength", str(LAM),
            str(tmp_path / "absent.txt"),
        )
        assert code == 3


class TestBudget:
    def test_budget_abort_exit_code(self, tmp_path, capsys):
        code, _, err = run(
            capsys,
            "design",
            "--wavelength", str(LAM),
            "--half-aperture", str(A),
            "--design", "exhaustive",
            "-N", "10",
            "--no-symmetry-prune",
            "--budget", "1000",
            "--n-u", "11",
            "--n-r", "11",
            "-o", str(tmp_path / "p.txt"),
        )
        assert code == 4
        assert json.loads(err)["error"] == "search-space-too-large"


class TestHeatmap:
    def _rows(self, capsys, tmp_path, *extra):
        out = tmp_path / "heat.csv"
        code, _, err = run(
            capsys,
            "heatmap",
            "--wavelength", str(LAM),
            "--half-aperture", str(A),
            "-N", "25",
            "--n-u", "20",
            "--n-r", "11",
            "-o", str(out),
            *extra,
        )
        assert code == 0, err
        lines = out.read_text().strip().split("\n")
        return lines[0], [line.split(",") for line in lines[1:]]

    def test_structure(self, tmp_path, capsys):
        header, rows = self._rows(capsys, tmp_path)
        assert header == "u,r_m,p1_m,p2_m,log10_speb_m2"
        # n_u=20 is bumped to 21 directions, 11 radii each
        assert len(rows) == 21 * 11
        data = np.array(rows, dtype=float)
        u, r, p1, p2, lv = data.T
        assert np.allclose(p1, r * u, rtol=1e-12)
        assert np.allclose(p1**2 + p2**2, r**2, rtol=1e-12)
        assert np.all(np.isfinite(lv))

    def test_max_at_broadside_rayleigh(self, tmp_path, capsys):
        _, rows = self._rows(capsys, tmp_path)
        data = np.array(rows, dtype=float)
        u, r, _, _, lv = data.T
        k = int(np.argmax(lv))
        assert u[k] == 0.0
        assert r[k] == pytest.approx(8 * A * A / LAM)

    def test_values_match_library(self, tmp_path, capsys):
        _, rows = self._rows(capsys, tmp_path)
        from ma_placement import SourcePosition, speb

        params = SensingParams.from_snr_db(LAM, 1024, 25, 5.0)
        geom = discrete_deployment(25, A, LAM)
        for row in rows[:: len(rows) // 7]:
            u, r, _, _, lv = (float(v) for v in row)
            expect = math.log10(speb(geom, params, SourcePosition(u, r)))
            assert lv == pytest.approx(expect, rel=1e-12)

    def test_figure_created(self, tmp_path, capsys):
        fig = tmp_path / "heat.png"
        self._rows(capsys, tmp_path, "--figure", str(fig))
        assert fig.stat().st_size > 0

    def test_positions_file_input(self, tmp_path, capsys):
        pos = tmp_path / "pos.txt"
        pos.write_text("-0.25\n0.0\n0.25\n")
        out = tmp_path / "heat.csv"
        code, _, err = run(
            capsys,
            "heatmap",
            "--wavelength", str(LAM),
            "--positions-file", str(pos),
            "--n-u", "11",
            "--n-r", "5",
            "-o", str(out),
        )
        assert code == 0, err
        assert len(out.read_text().strip().split("\n")) == 1 + 11 * 5


class TestBenchmark:
    def test_snr_sweep_scaling(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        code, _, err = run(
            capsys,
            "benchmark",
            "--wavelength", str(LAM),
            "--half-aperture", str(A),
            "-N", "25",
            "--n-u", "11",
            "--n-r", "11",
            "--sweep", "snr_db",
            "--values", "0,10",
            "--designs", "proposed",
            "-o", str(out),
        )
        assert code == 0, err
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "design,snr_db,worst_case_speb_m2,worst_case_rmse_m,error"
        v0 = float(lines[1].split(",")[2])
        v10 = float(lines[2].split(",")[2])
        # bound scales as 1/SNR, i.e. 10 dB buys a factor of 10
        assert v0 / v10 == pytest.approx(10.0, rel=1e-12)

    def test_n_sweep_values_match_library(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        code, _, err = run(
            capsys,
            "benchmark",
            "--wavelength", str(LAM),
            "--half-aperture", str(A),
            "--n-u", "11",
            "--n-r", "11",
            "--sweep", "N",
            "--values", "8,16",
            "--designs", "ula",
            "-o", str(out),
        )
        assert code == 0, err
        lines = out.read_text().strip().split("\n")[1:]
        from ma_placement import NearFieldRegion, baseline_ula

        grid = RegionGrid(NearFieldRegion(A, LAM, 0.999), 11, 11)
        for line, n in zip(lines, (8, 16)):
            cells = line.split(",")
            params = SensingParams.from_snr_db(LAM, 1024, n, 5.0)
            expect = worst_case_speb(baseline_ula(n, LAM, A), params, grid)
            assert float(cells[2]) == expect.worst_case_speb
            assert cells[4] == ""

    def test_infeasible_cell_reports_error(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        code, _, err = run(
            capsys,
            "benchmark",
            "--wavelength", str(LAM),
            "--half-aperture", str(A),
            "--n-u", "11",
            "--n-r", "11",
            "--sweep", "N",
            "--values", "5,200",  # 200 at lambda/2 does not fit in 2a = 0.5 m
            "--designs", "ula",
            "-o", str(out),
        )
        assert code == 0, err
        lines = out.read_text().strip().split("\n")[1:]
        ok, bad = lines
        assert ok.split(",")[4] == ""
        cells = bad.split(",")
        assert cells[2] == "" and cells[3] == ""
        assert cells[4] != ""

    def test_no_values_header_only(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        code, _, err = run(
            capsys,
            "benchmark",
            "--wavelength", str(LAM),
            "--sweep", "a",
            "--designs", "proposed",
            "-o", str(out),
        )
        assert code == 0, err
        assert out.read_text().strip().split("\n") == [
            "design,a,worst_case_speb_m2,worst_case_rmse_m,error"
        ]

    def test_bad_sweep_variable(self, capsys):
        code, _, err = run(
            capsys, "benchmark", "--wavelength", str(LAM), "--sweep", "bogus"
        )
        assert code == 2

    def test_figure_created(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        fig = tmp_path / "bench.png"
        code, _, err = run(
            capsys,
            "benchmark",
            "--wavelength", str(LAM),
            "--half-aperture", str(A),
            "--n-u", "11",
            "--n-r", "11",
            "--sweep", "snr_db",
            "--values", "0,5,10",
            "--designs", "proposed,ula",
            "-o", str(out),
            "--figure", str(fig),
        )
        assert code == 0, err
        assert fig.stat().st_size > 0
