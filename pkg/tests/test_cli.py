import json
import subprocess
import sys

import numpy as np
import pytest

from typelab.cli import main
from typelab.serialize import canonical_json, render_csv


@pytest.fixture
def seq_file(tmp_path):
    path = tmp_path / "seq.json"
    path.write_text(json.dumps({"points": list(range(-50, 51)), "window": 50}))
    return str(path)


@pytest.fixture
def measure_file(tmp_path):
    atoms = [[n, (1.0 + n * n) ** -2] for n in range(-50, 51)]
    path = tmp_path / "measure.json"
    path.write_text(json.dumps({"atoms": atoms, "window": 50}))
    return str(path)


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


class TestSubcommands:
    def test_energy(self, seq_file, capsys):
        code, out = run_cli(["energy", "--input", seq_file], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["points"] == 101

    def test_energy_interval(self, seq_file, capsys):
        code, out = run_cli(["energy", "--input", seq_file,
                             "--interval=-0.5,9.5"], capsys)
        assert code == 0
        assert json.loads(out)["delta"] == 10

    def test_partition_and_uniform(self, seq_file, capsys):
        code, out = run_cli(["partition", "--input", seq_file, "--d", "1.0"], capsys)
        assert code == 0
        bks = json.loads(out)["breakpoints"]
        assert 0.0 in bks
        code, out = run_cli(["uniform", "--input", seq_file, "--d", "1.0"], capsys)
        assert code == 0
        assert json.loads(out)["overall"] is True

    def test_classify(self, tmp_path, capsys):
        doc = {"intervals": [[2.0 ** n, 2.0 ** n + n] for n in range(1, 30)]}
        path = tmp_path / "ints.json"
        path.write_text(json.dumps(doc))
        code, out = run_cli(["classify", "--intervals", str(path)], capsys)
        assert code == 0
        assert json.loads(out)["classification"] == "convergent"

    def test_density(self, seq_file, capsys):
        code, out = run_cli(["density", "--input", seq_file, "--kind", "interior",
                             "--grid", "0.2:1.4:0.2"], capsys)
        assert code == 0
        assert json.loads(out)["kind"] == "interior"

    def test_type(self, measure_file, capsys):
        code, out = run_cli(["type", "--input", measure_file, "--separated",
                             "--grid", "0.2,0.5,1.0"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["two_sided"] is True
        assert doc["lower_bound_type"] == pytest.approx(2 * np.pi, rel=1e-6)

    def test_theorem(self, measure_file, capsys):
        code, out = run_cli(["theorem", "levinson", "--input", measure_file], capsys)
        assert code == 0
        assert json.loads(out)["conclusion"]["kind"] == "inconclusive"

    def test_construct_roundtrip(self, tmp_path, capsys):
        out_path = tmp_path / "generated.json"
        code, _ = run_cli(["construct", "arithmetic", "--param", "d=1",
                           "--param", "T=30", "--out", str(out_path)], capsys)
        assert code == 0
        code, out = run_cli(["energy", "--input", str(out_path)], capsys)
        assert code == 0
        assert json.loads(out)["points"] == 61

    def test_oracle(self, measure_file, tmp_path, capsys):
        csv_path = tmp_path / "curve.csv"
        code, out = run_cli(["oracle", "--input", measure_file, "--a-max", "12.6",
                             "--steps", "24", "--csv", str(csv_path)], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["knee"] is not None
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "a,sigma_min,cond"
        assert len(lines) == 25

    def test_csv_format(self, seq_file, capsys):
        code, out = run_cli(["energy", "--input", seq_file, "--format", "csv"], capsys)
        assert code == 0
        assert out.startswith("key,value")


class TestExitCodes:
    def test_unknown_subcommand(self, capsys):
        assert main(["nope"]) == 2

    def test_missing_file(self, capsys):
        assert main(["energy", "--input", "/does/not/exist.json"]) == 2

    def test_bad_document(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"points": [1, 1, 2], "window": 10}))
        assert main(["energy", "--input", str(path)]) == 2

    def test_theorem_missing_argument(self, measure_file, capsys):
        # suffgen needs --sequence; a clean usage error, not a traceback
        assert main(["theorem", "suffgen", "--input", measure_file]) == 2
        assert main(["theorem", "krein-lm"]) == 2

    def test_suite_verdict_failure_exits_one(self, capsys, monkeypatch):
        import typelab.cli as cli

        monkeypatch.setattr(cli, "run_suite", lambda threads: [
            {"check": "x", "status": "pass", "detail": ""},
            {"check": "y", "status": "fail", "detail": "boom"},
        ])
        assert main(["suite"]) == 1


class TestDeterminism:
    def test_repeat_runs_byte_identical(self, measure_file, capsys):
        _, first = run_cli(["type", "--input", measure_file, "--separated",
                            "--grid", "0.2,0.5,1.0"], capsys)
        _, second = run_cli(["type", "--input", measure_file, "--separated",
                             "--grid", "0.2,0.5,1.0"], capsys)
        assert first == second

    def test_canonical_float_format(self):
        assert canonical_json({"x": 0.1 + 0.2}) == '{"x": 0.3}'
        assert canonical_json({"x": -0.0}) == '{"x": 0}'
        assert canonical_json([float("inf"), None, True]) == '["inf", null, true]'

    def test_csv_flattening(self):
        text = render_csv({"b": [1.5, 2.0], "a": {"c": None}})
        assert text.splitlines() == ["key,value", "a.c,", "b[0],1.5", "b[1],2"]


class TestModuleEntry:
    def test_python_dash_m(self, measure_file):
        proc = subprocess.run(
            [sys.executable, "-m", "typelab", "--version"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout.startswith("typelab ")
