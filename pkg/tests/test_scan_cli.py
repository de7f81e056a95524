import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qig.cli import fig2_rows, limits_rows, main
from qig.errors import ConfigError
from qig.scan import GridRange, ScanConfig, columns, fmt, render_csv, render_json, run_scan


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestConfig:
    def test_range_parsing(self):
        assert GridRange.parse("0.1:5:10") == GridRange(0.1, 5.0, 10)
        assert GridRange.parse("2") == GridRange(2.0, 2.0, 1)
        assert GridRange.parse([0, 1, 3]).values().tolist() == [0.0, 0.5, 1.0]
        for bad in ("1:0:3", "0:1:0", "a:b:c", "0:1", "0:inf:2"):
            with pytest.raises(ConfigError):
                GridRange.parse(bad)

    def test_validation(self):
        with pytest.raises(ConfigError):
            ScanConfig(engine="fast")
        with pytest.raises(ConfigError):
            ScanConfig(fd_step=0.5)
        with pytest.raises(ConfigError):
            ScanConfig(metrics="entropy")
        with pytest.raises(ConfigError):
            ScanConfig(model="generic")
        with pytest.raises(ConfigError):
            ScanConfig(engine="general", beta_range="0:1:3")
        with pytest.raises(ConfigError):
            ScanConfig(threads=0)
        assert ScanConfig(metrics="both,fisher-rao").metrics == ("bures", "sjoqvist", "fisher-rao")

    def test_file_values_overridden_by_flags(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"model": "spin-z", "beta": "1:2:3", "h": "1:2:2", "metrics": ["bures"]}))
        cfg = ScanConfig.load(path, h_range="1:1:1", engine=None)
        assert cfg.model == "spin-z"
        assert cfg.beta_range.count == 3
        assert cfg.h_range.count == 1
        path.write_text(json.dumps({"colour": "red"}))
        with pytest.raises(ConfigError):
            ScanConfig.load(path)

    def test_schema_depends_only_on_selection(self):
        a = columns(ScanConfig(model="flux-qubit", metrics="both", engine="both"))
        b = columns(ScanConfig(model="flux-qubit", metrics="both", engine="both", beta_range="1:2:7"))
        assert a == b
        assert "delta_nc" in a and "engine_disagreement" in a
        assert "delta_nc" not in columns(ScanConfig(metrics="bures"))


class TestScan:
    def test_flux_closed_form_grid(self):
        cfg = ScanConfig(model="flux-qubit", fixed_params={"Delta": 1.0}, beta_range="0.1:5:10", h_range="-2:2:5")
        rows = run_scan(cfg)
        assert len(rows) == 50
        assert [(r.beta, r.h) for r in rows[:6]] == [(0.1, h) for h in (-2.0, -1.0, 0.0, 1.0, 2.0)] + [(rows[5].beta, -2.0)]
        assert all(r.values["delta_nc"] >= 0 for r in rows)

    def test_spin_z_delta_is_zero(self):
        rows = run_scan(ScanConfig(model="spin-z", beta_range="0.1:5:4", h_range="0.1:5:4", engine="general"))
        assert all(r.values["delta_nc"] == 0.0 for r in rows)

    def test_single_point(self):
        (row,) = run_scan(ScanConfig(model="flux-qubit", beta_range="2:2:1", h_range="0:0:1"))
        assert row.values["sjoqvist_g_hh"] == 0.25

    def test_engine_both_reports_small_disagreement(self):
        rows = run_scan(ScanConfig(model="spin-xz", fixed_params={"omega_x": 1.0}, engine="both", metrics="both,fisher-rao"))
        assert max(r.values["engine_disagreement"] for r in rows) <= 1e-12

    def test_degenerate_points_flagged(self):
        rows = run_scan(ScanConfig(model="spin-z", engine="general", beta_range="1:1:1", h_range="-1:1:3"))
        assert [r.status for r in rows] == ["ok", "degenerate", "ok"]
        cols = columns(ScanConfig(model="spin-z"))
        text = render_csv([r.as_dict(cols) for r in rows], cols)
        middle = text.splitlines()[2].split(",")
        assert middle[2] == "degenerate" and all(v == "" for v in middle[3:])

    def test_thread_count_does_not_change_output(self):
        base = dict(model="flux-qubit", metrics="both", engine="both", beta_range="0.1:5:17", h_range="-2:2:9")
        cols = columns(ScanConfig(**base))
        outs = {
            n: render_json([r.as_dict(cols) for r in run_scan(ScanConfig(threads=n, **base))], cols)
            for n in (1, 3, 8)
        }
        assert outs[1] == outs[3] == outs[8]


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_round_trips(x):
    assert float(fmt(x)) == x


def test_json_round_trip_is_exact():
    cfg = ScanConfig(model="flux-qubit", beta_range="0.3:4:5", h_range="-1:1:3", metrics="both")
    cols = columns(cfg)
    rows = [r.as_dict(cols) for r in run_scan(cfg)]
    back = json.loads(render_json(rows, cols))
    assert back == rows


class TestCli:
    def test_scan_csv(self, tmp_path):
        out = tmp_path / "flux.csv"
        argv = ["scan", "--model", "flux-qubit", "--delta", "1", "--beta", "0.1:5:10", "--h", "-2:2:5",
                "--metrics", "both", "--engine", "closed-form", "--out", str(out)]
        assert main(argv) == 0
        rows = read_csv(out)
        assert len(rows) == 50
        assert all(float(r["delta_nc"]) >= 0 for r in rows)

    def test_scan_json_and_determinism(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        common = ["scan", "--model", "spin-xz", "--omega-x", "1", "--beta", "0.5:3:6", "--h", "-1:1:5",
                  "--metrics", "both", "--engine", "both", "--format", "json"]
        assert main(common + ["--threads", "1", "--out", str(a)]) == 0
        assert main(common + ["--threads", "auto", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert len(json.loads(a.read_text())) == 30

    def test_scan_config_file(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"model": "flux-qubit", "fixed_params": {"Delta": 1.0}, "beta": "2:2:1", "h": "0:0:1"}))
        out = tmp_path / "o.csv"
        assert main(["scan", "--config", str(cfg), "--out", str(out)]) == 0
        assert float(read_csv(out)[0]["sjoqvist_g_hh"]) == 0.25

    def test_scan_generic_model(self, tmp_path):
        from qig.hermitian import PAULI_X, PAULI_Z

        grid = np.linspace(-2, 2, 21)
        entries = [[[[float(z.real), float(z.imag)] for z in row] for row in -0.5 * (PAULI_X + e * PAULI_Z)] for e in grid]
        model = tmp_path / "m.json"
        model.write_text(json.dumps({"dim": 2, "h_grid": grid.tolist(), "H_entries": entries}))
        out = tmp_path / "g.csv"
        argv = ["scan", "--model", "generic", "--model-file", str(model), "--engine", "general",
                "--beta", "2:2:1", "--h", "0:0:1", "--out", str(out)]
        assert main(argv) == 0
        assert float(read_csv(out)[0]["sjoqvist_g_hh"]) == pytest.approx(0.25, abs=1e-6)

    def test_config_error_exit_code(self, tmp_path, capsys):
        assert main(["scan", "--model", "spin-xz", "--out", str(tmp_path / "x.csv")]) == 2
        assert "omega_x" in capsys.readouterr().err
        assert not (tmp_path / "x.csv").exists()

    def test_io_error_exit_code(self, tmp_path):
        assert main(["fig2", "--out", str(tmp_path / "missing" / "f.csv")]) == 3

    def test_fig2(self, tmp_path):
        out = tmp_path / "fig2.csv"
        assert main(["fig2", "--out", str(out)]) == 0
        rows = read_csv(out)
        assert list(rows[0]) == ["beta", "dg_eps1", "dg_eps1_25", "dg_eps1_5"]
        assert len(rows) == 201
        assert float(rows[-1]["beta"]) == 10.0
        assert float(rows[-1]["dg_eps1"]) == pytest.approx(1.8033827799855327208e-7, rel=1e-12)

    def test_limits(self, tmp_path, capsys):
        assert main(["limits", "--h", "0:3:4", "--delta", "1"]) == 0
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        np.testing.assert_allclose([float(r["limit_hh"]) for r in rows], [0.25, 0.0625, 0.01, 0.0025], rtol=1e-15)
        np.testing.assert_allclose([float(r["fs_value"]) for r in rows], [0.5, 0.125, 0.02, 0.005], rtol=1e-14)
        np.testing.assert_allclose([float(r["ratio"]) for r in rows], 2.0, rtol=1e-14)
        assert main(["limits", "--model", "spin-z"]) == 2

    def test_check_passes_and_negative_control_fails(self, capsys):
        assert main(["check", "--seed", "3"]) == 0
        assert "all suites passed" in capsys.readouterr().out
        assert main(["check", "--tol", "1e-16"]) == 1
        assert "FAIL" in capsys.readouterr().out

    def test_check_with_coarse_step(self, capsys):
        assert main(["check", "--fd-step", "0.1"]) == 0
        line = next(l for l in capsys.readouterr().out.splitlines() if "oracle-convergence" in l)
        worst = float(line.split("worst=")[1].split()[0])
        assert 1e-4 < worst < 0.5


def test_fig2_and_limits_helpers():
    rows = fig2_rows()
    assert rows[0]["dg_eps1"] == pytest.approx(0.0625, abs=1e-15)
    assert limits_rows(GridRange(3.0, 3.0, 1))[0]["limit_hh"] == pytest.approx(0.0025)
    assert math.isclose(limits_rows(GridRange(0.0, 0.0, 1))[0]["ratio"], 2.0)
