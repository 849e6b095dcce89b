import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from gnmchaos.cli import load_run_config, main


def read_rows(path):
    with open(path) as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    return rows[0], rows[1:]


def run(tmp_path, *args):
    return main(list(args) + ["--out", str(tmp_path)])


class TestOrbit:
    def test_row_count(self, tmp_path):
        assert run(tmp_path, "orbit", "--map", "gnm", "--mu1", "1.0", "--x0", "1.0", "--n", "100") == 0
        header, rows = read_rows(tmp_path / "orbit.csv")
        assert header == ["k", "x_volts"]
        assert len(rows) == 100
        assert rows[0][0] == "0"

    def test_fixed_point(self, tmp_path):
        code = run(tmp_path, "orbit", "--map", "logistic", "--r", "2", "--x0", "0.3",
                   "--n", "100", "--transient", "99")
        assert code == 0
        _, rows = read_rows(tmp_path / "orbit.csv")
        assert rows[0][0] == "99"
        assert float(rows[-1][1]) == pytest.approx(0.5, abs=1e-9)

    def test_invalid_mu1(self, tmp_path, capsys):
        assert run(tmp_path, "orbit", "--mu1", "-1", "--n", "10") == 2
        assert "--mu1" in capsys.readouterr().err

    def test_unparsable_flag(self, tmp_path, capsys):
        assert run(tmp_path, "orbit", "--n", "ten") == 2
        assert "--n" in capsys.readouterr().err

    def test_seed_outside_domain(self, tmp_path, capsys):
        assert run(tmp_path, "orbit", "--map", "logistic", "--x0", "3", "--n", "5") == 2
        assert "--x0" in capsys.readouterr().err

    def test_tabulated(self, tmp_path):
        xs = np.linspace(0, 1, 64)
        table = tmp_path / "curve.csv"
        table.write_text("".join(f"{x!r},{3.5 * x * (1 - x)!r}\n" for x in xs.tolist()))
        assert run(tmp_path, "orbit", "--map", "tabulated", "--table", str(table), "--n", "20") == 0

    def test_missing_table_is_runtime_error(self, tmp_path):
        assert run(tmp_path, "orbit", "--map", "tabulated", "--table",
                   str(tmp_path / "nope.csv"), "--n", "20") == 1

    def test_map_feedback(self, tmp_path):
        assert run(tmp_path, "orbit", "--topology", "map", "--fb-mu1", "0.9", "--n", "10") == 0


class TestSweeps:
    def test_bifurcation_size(self, tmp_path):
        code = run(tmp_path, "bifurcation", "--axis", "mu1", "--from", "0.6", "--to", "1.05",
                   "--steps", "100")
        assert code == 0
        header, rows = read_rows(tmp_path / "bifurcation.csv")
        assert header == ["axis_value", "sample"]
        assert len(rows) == 100 * 3000
        gp = (tmp_path / "bifurcation.gp").read_text()
        assert "bifurcation.csv" in gp

    def test_lyapunov_anchors(self, tmp_path):
        code = run(tmp_path, "lyapunov", "--axis", "mu1", "--from", "0.6", "--to", "1.05",
                   "--steps", "100", "--lyap-n", "5000", "--workers", "2")
        assert code == 0
        header, rows = read_rows(tmp_path / "lyapunov.csv")
        assert header == ["axis_value", "lambda"]
        assert len(rows) == 100
        vals = np.array([[float(a), float(b)] for a, b in rows])
        near = vals[np.argmin(abs(vals[:, 0] - 0.70))]
        assert near[1] < 0 < vals[-1, 1]
        assert (tmp_path / "lyapunov.gp").exists()

    def test_steps_one(self, tmp_path):
        assert run(tmp_path, "bifurcation", "--axis", "mu1", "--from", "0.6", "--to", "1.0",
                   "--steps", "1") == 2

    def test_axis_family_mismatch(self, tmp_path, capsys):
        assert run(tmp_path, "bifurcation", "--axis", "r", "--from", "3", "--to", "4",
                   "--steps", "5") == 2
        assert "--axis" in capsys.readouterr().err

    def test_logistic_axis(self, tmp_path):
        assert run(tmp_path, "bifurcation", "--map", "logistic", "--axis", "r", "--from", "2.8",
                   "--to", "4.0", "--steps", "5", "--transient", "100", "--retained", "50") == 0


class TestGateSearch:
    def test_and_default_grid(self, tmp_path):
        assert run(tmp_path, "gate-search", "--target", "AND", "--format", "json") == 0
        data = json.loads((tmp_path / "gate_search.json").read_text())
        assert data
        assert set(data[0]) == {"mu1_mohm", "mu2_v", "mu3_v", "cb", "vref_v", "n", "function", "margin_v"}
        assert all(d["function"] == 1 for d in data)

    def test_out_of_range(self, tmp_path):
        assert run(tmp_path, "gate-search", "--target", "16") == 2

    def test_limit(self, tmp_path):
        assert run(tmp_path, "gate-search", "--limit", "3", "--target", "NAND", "--format", "json") == 0
        data = json.loads((tmp_path / "gate_search.json").read_text())
        assert 1 <= len(data) <= 3
        m = [d["margin_v"] for d in data]
        assert m == sorted(m, reverse=True)

    def test_empty_is_success(self, tmp_path):
        assert run(tmp_path, "gate-search", "--target", "XOR", "--min-margin", "5") == 0
        header, rows = read_rows(tmp_path / "gate_search.csv")
        assert header[0] == "mu1_mohm" and rows == []

    def test_cap_refusal(self, tmp_path, capsys):
        assert run(tmp_path, "gate-search", "--target", "AND", "--cap", "100") == 2
        assert "27648" in capsys.readouterr().err

    def test_custom_grid(self, tmp_path):
        code = run(tmp_path, "gate-search", "--target", "0", "--mu1-range", "1.0", "1.0", "1",
                   "--mu2-values", "0", "--mu3-values", "0", "--cb-values", "0",
                   "--vref-range", "2.7", "2.7", "1", "--n-range", "1", "2")
        assert code == 0
        _, rows = read_rows(tmp_path / "gate_search.csv")
        assert len(rows) == 2


class TestFuncspace:
    def test_dominance(self, tmp_path):
        assert run(tmp_path, "funcspace", "--nmu", "10", "--nvref", "5", "--c", "1", "--n-max", "10") == 0
        header, rows = read_rows(tmp_path / "funcspace.csv")
        assert header == ["n", "f1", "f2", "f3", "f4", "log10_f1", "log10_f2", "log10_f3", "log10_f4"]
        assert len(rows) == 10
        for r in rows:
            f = [int(v) for v in r[1:5]]
            if int(r[0]) >= 2:
                assert f[3] > max(f[:3])

    def test_ones(self, tmp_path):
        assert run(tmp_path, "funcspace", "--n-max", "1") == 0
        _, rows = read_rows(tmp_path / "funcspace.csv")
        assert rows == [["1", "1", "1", "1", "1", "0.0", "0.0", "0.0", "0.0"]]

    def test_missing_required(self, tmp_path):
        assert run(tmp_path, "funcspace", "--nmu", "3") == 2


class TestConfig:
    def test_round_trip(self, tmp_path):
        assert run(tmp_path, "orbit", "--mu1", "0.93", "--n", "12") == 0
        cfg = load_run_config(tmp_path / "run_config.json")
        again = tmp_path / "again"
        assert main(["orbit", "--config", str(tmp_path / "run_config.json"), "--out", str(again)]) == 0
        cfg2 = load_run_config(again / "run_config.json")
        assert cfg.options == cfg2.options and cfg.command == cfg2.command
        assert (tmp_path / "orbit.csv").read_text() == (again / "orbit.csv").read_text()

    @pytest.mark.parametrize("cmd", [
        ["lyapunov", "--axis", "mu2", "--from", "-0.3", "--to", "0.3", "--steps", "4", "--lyap-n", "100"],
        ["gate-search", "--target", "XNOR", "--limit", "2"],
        ["funcspace", "--nmu", "3", "--n-max", "4"],
        ["map-dump", "--map", "sine", "--a", "0.9", "--points", "16"],
    ])
    def test_every_command_round_trips(self, tmp_path, cmd):
        assert main(cmd + ["--out", str(tmp_path)]) == 0
        saved = json.loads((tmp_path / "run_config.json").read_text())
        cfg = load_run_config(tmp_path / "run_config.json")
        assert cfg.to_json() == saved

    def test_flags_override_file(self, tmp_path):
        cfg_path = tmp_path / "c.json"
        cfg_path.write_text(json.dumps({
            "schema_version": 1, "command": "orbit", "options": {"mu1": 0.8, "n": 7},
        }))
        assert main(["orbit", "--config", str(cfg_path), "--n", "9", "--out", str(tmp_path)]) == 0
        cfg = load_run_config(tmp_path / "run_config.json")
        assert cfg.options["mu1"] == 0.8 and cfg.options["n"] == 9
        _, rows = read_rows(tmp_path / "orbit.csv")
        assert len(rows) == 9

    @pytest.mark.parametrize("content", [
        {"schema_version": 1, "options": {"bogus": 1, "n": 3}},
        {"schema_version": 1, "extra": True},
        {"schema_version": 99},
        {"schema_version": 1, "command": "funcspace", "options": {"n_max": 2}},
    ])
    def test_bad_config(self, tmp_path, content):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(content))
        assert main(["orbit", "--config", str(p), "--n", "3", "--out", str(tmp_path)]) == 2


def test_workers_do_not_change_output(tmp_path):
    outs = []
    for w in ("1", "3"):
        d = tmp_path / w
        assert main(["bifurcation", "--axis", "mu1", "--from", "0.9", "--to", "1.05", "--steps", "8",
                     "--transient", "100", "--retained", "50", "--workers", w, "--out", str(d)]) == 0
        outs.append((d / "bifurcation.csv").read_bytes())
    assert outs[0] == outs[1]


def test_map_dump(tmp_path):
    assert run(tmp_path, "map-dump", "--mu1", "1.0", "--points", "101") == 0
    header, rows = read_rows(tmp_path / "map.csv")
    assert header == ["x_volts", "y_volts"] and len(rows) == 101
    assert float(rows[50][1]) == pytest.approx(2.63 * 3.8022814 / 4, rel=1e-6)


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "gnmchaos", "funcspace", "--n-max", "2", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    bad = subprocess.run([sys.executable, "-m", "gnmchaos", "funcspace"], capture_output=True, text=True,
                         cwd=tmp_path)
    assert bad.returncode == 2
