import json
import math

import numpy as np
import pytest

from reekit import cli, qcore
from reekit.qcore import HilbertLayout


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestMeasure:
    def test_dicke_closed_forms(self, capsys):
        code, out, _ = run_cli(["measure", "--n", "3", "--k", "2"], capsys)
        assert code == 0
        rows = {line.split(",")[0]: line.split(",")[1] for line in out.strip().split("\n")[1:]}
        assert float(rows["lambda_max"]) == pytest.approx(2 / 3, abs=1e-9)
        assert float(rows["E_R"]) == pytest.approx(2 * math.log2(3 / 2), abs=1e-9)

    def test_dur_values(self, capsys):
        code, out, _ = run_cli(
            ["measure", "--N", "4", "--x", "0.25", "--format", "json"], capsys
        )
        assert code == 0
        data = json.loads(out)
        results = {r["measure"]: r for r in data["results"]}
        assert results["E_R"]["value"] == pytest.approx(0.25)
        assert results["E_log"]["value"] == pytest.approx(math.log2(8 / 7), abs=1e-12)
        assert all("method" in r for r in data["results"])

    def test_maximally_mixed_file(self, tmp_path, capsys):
        rho = qcore.DensityOperator(HilbertLayout.qubits(2), np.eye(4).astype(complex) / 4)
        path = tmp_path / "state.json"
        path.write_text(json.dumps(qcore.density_to_json(rho)))
        code, out, _ = run_cli(["measure", "--state", str(path), "--format", "json"], capsys)
        assert code == 0
        results = {r["measure"]: r["value"] for r in json.loads(out)["results"]}
        assert results["E_R_numeric"] <= 1e-6
        assert results["G"] == pytest.approx(2.0, abs=1e-8)

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _, err = run_cli(["measure", "--state", str(path)], capsys)
        assert code == 2
        assert "line" in err and "column" in err

    def test_nonphysical_matrix(self, tmp_path, capsys):
        data = {"party_dims": [2], "matrix": [[1.5, 0.0], [0.0, 0.0], [0.0, 0.0], [-0.5, 0.0]]}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(data))
        code, _, err = run_cli(["measure", "--state", str(path)], capsys)
        assert code == 2
        assert "eigenvalue" in err


class TestFigure:
    def test_endpoints_grid(self, capsys):
        code, out, _ = run_cli(["figure", "er3", "--grid", "2", "--seed", "7"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "family,s,F,coF,E_R_numeric"
        assert len(lines) == 1 + 3 * 2  # three families, two grid points
        for line in lines[1:]:
            _, s, F, coF, _ = line.split(",")
            assert float(F) == pytest.approx(float(coF), abs=1e-9)

    def test_qudit_figure_linear(self, capsys):
        code, out, _ = run_cli(["figure", "erqudit", "--grid", "3", "--seed", "7"], capsys)
        assert code == 0
        rows = [line.split(",") for line in out.strip().split("\n")[1:]]
        lo, hi = 2 * math.log2(3) - 2, 2 * math.log2(3) - 1
        mid = float(rows[1][3])
        # CSV carries 9 significant digits
        assert mid == pytest.approx(0.5 * (lo + hi), abs=1e-6)

    def test_numeric_column_tracks_envelope(self, capsys):
        code, out, _ = run_cli(["figure", "er4b", "--grid", "2", "--seed", "3"], capsys)
        assert code == 0
        for line in out.strip().split("\n")[1:]:
            _, s, F, coF, num = line.split(",")
            assert abs(float(num) - float(coF)) < 2e-3

    def test_deterministic_output(self, capsys):
        _, first, _ = run_cli(["figure", "er3", "--grid", "2", "--seed", "11"], capsys)
        _, second, _ = run_cli(["figure", "er3", "--grid", "2", "--seed", "11"], capsys)
        assert first == second

    def test_unknown_id(self, capsys):
        with pytest.raises(SystemExit):
            cli.main(["figure", "er9"])


class TestVerify:
    def test_quick_suite_exits_zero(self, capsys):
        code, out, _ = run_cli(
            ["verify", "all", "--quick", "--samples", "400", "--seed", "2"], capsys
        )
        assert code == 0
        assert "suite: pass" in out

    def test_gmax_three_out_of_scope_still_passes(self, capsys):
        code, out, _ = run_cli(
            ["verify", "gmax", "--N", "3", "--samples", "10000", "--format", "json"], capsys
        )
        assert code == 0
        data = json.loads(out)
        assert data[0]["check"] == "g-max-out-of-scope"
        assert data[0]["values"]["max"] > 1.0

    def test_dur_selector(self, capsys):
        code, out, _ = run_cli(
            ["verify", "dur", "--N", "4", "--x", "0.3", "--samples", "2000"], capsys
        )
        assert code == 0


class TestTraceDown:
    def test_sequence(self, capsys):
        code, out, _ = run_cli(["trace-down", "--n", "4", "--k", "1"], capsys)
        assert code == 0
        values = [float(line.split(",")[1]) for line in out.strip().split("\n")[1:]]
        assert values[0] == pytest.approx(1.245112, abs=5e-6)
        assert values[1] == pytest.approx(0.433834, abs=5e-6)
        assert values[2] == pytest.approx(0.122556, abs=5e-6)

    def test_missing_args(self, capsys):
        code, _, err = run_cli(["trace-down", "--n", "4"], capsys)
        assert code == 2


class TestDur:
    def test_certificate_json(self, capsys):
        code, out, _ = run_cli(
            ["dur", "--N", "4", "--x", "0.25", "--samples", "2000", "--seed", "5"], capsys
        )
        assert code == 0
        data = json.loads(out)
        assert data["E_R"]["value"] == pytest.approx(0.25)
        assert data["certificate"]["passed"] is True

    def test_three_party_report(self, capsys):
        code, out, _ = run_cli(["dur", "--N", "3", "--x", "0.2", "--samples", "1000"], capsys)
        assert code == 0
        data = json.loads(out)
        assert "E_R" not in data
        assert data["g_max"]["value"] > 1.0


class TestSolve:
    def test_json_report(self, capsys):
        code, out, _ = run_cli(
            ["solve", "--n", "2", "--k", "0", "--k2", "1", "--x", "0.5",
             "--iterations", "40", "--format", "json"],
            capsys,
        )
        assert code == 0
        data = json.loads(out)
        assert data["report"]["value"] == pytest.approx(0.5 * math.log2(32 / 27), abs=1e-4)
        assert data["report"]["gap_note"] == "certified up to oracle optimality"

    def test_csv_trace(self, capsys):
        code, out, _ = run_cli(
            ["solve", "--n", "2", "--k", "0", "--k2", "1", "--x", "0.5",
             "--iterations", "20", "--format", "csv"],
            capsys,
        )
        assert code == 0
        assert out.startswith("iteration,value,gap")

    def test_deterministic(self, capsys):
        args = ["solve", "--N", "4", "--x", "0.3", "--iterations", "10", "--format", "json"]
        _, first, _ = run_cli(args, capsys)
        _, second, _ = run_cli(args, capsys)
        assert first == second
