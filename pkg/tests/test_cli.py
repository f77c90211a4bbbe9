import json
import os
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from toricfloer import report as rep
from toricfloer.cli import main

from conftest import CORPUS, corpus_text

SCHEMA = json.loads(
    (resources.files("toricfloer") / "data" / "report.schema.json")
    .read_text())


def poly_path(name: str) -> str:
    return str(resources.files("toricfloer") / "data" / "polytopes"
               / f"{name}.poly")


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestExitCodes:
    def test_analyze_ok(self, capsys):
        code, out, _ = run_cli(["analyze", poly_path("p2")], capsys)
        assert code == 0
        assert "chi=3" in out and "fano=True" in out

    def test_missing_file(self, capsys):
        code, _, err = run_cli(["analyze", "/nonexistent.poly"], capsys)
        assert code == 2
        assert "error" in err

    def test_bad_file_reports_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.poly"
        bad.write_text("dim 2\nnormal 2 0 offset 0\n"
                       "normal 0 1 offset 0\nnormal -1 -1 offset -1\n")
        code, _, err = run_cli(["analyze", str(bad)], capsys)
        assert code == 2
        assert f"{bad}:2" in err and "non-primitive" in err

    def test_boundary_fiber(self, capsys):
        code, _, err = run_cli(
            ["hf", poly_path("p2"), "--fiber", "0,3"], capsys)
        assert code == 2
        assert "singular" in err

    def test_bad_fiber_arity(self, capsys):
        code, _, err = run_cli(
            ["hf", poly_path("p2"), "--fiber", "1"], capsys)
        assert code == 2


class TestCommands:
    def test_hf_rank_line(self, capsys):
        code, out, _ = run_cli(
            ["hf", poly_path("p2"), "--fiber", "3,3"], capsys)
        assert code == 0 and "HF rank (novikov coefficients): 4" in out
        code, out, _ = run_cli(
            ["hf", poly_path("p2"), "--fiber", "1,3"], capsys)
        assert code == 0 and "HF rank (novikov coefficients): 0" in out

    def test_hf_exp_mode(self, capsys):
        code, out, _ = run_cli(
            ["hf", poly_path("p2"), "--fiber", "3,3",
             "--coefficients", "exp"], capsys)
        assert code == 0 and "HF rank (exp coefficients): 4" in out

    def test_non_fano_warns(self, capsys):
        code, out, _ = run_cli(
            ["balanced", poly_path("f3"), "--mode", "novikov"], capsys)
        assert code == 0
        assert "non-Fano" in out

    def test_hf_non_fano_unsupported(self, capsys):
        code, out, _ = run_cli(
            ["hf", poly_path("f2"), "--fiber", "1,1"], capsys)
        assert code == 0
        assert "unsupported regime" in out
        assert "HF rank (novikov coefficients): None" in out

    def test_balanced_p2(self, capsys):
        code, out, _ = run_cli(["balanced", poly_path("p2")], capsys)
        assert code == 0
        assert "balanced fibers (novikov mode): 1" in out
        assert "Clifford torus" in out

    def test_critical_p1(self, capsys):
        code, out, _ = run_cli(["critical", poly_path("p1")], capsys)
        assert code == 0
        assert "critical points: 2 (Euler characteristic 2)" in out


class TestJson:
    @pytest.mark.parametrize("name", CORPUS)
    def test_analyze_schema(self, name, capsys):
        code, out, _ = run_cli(["analyze", poly_path(name), "--json"], capsys)
        assert code == 0
        jsonschema.validate(json.loads(out), SCHEMA)

    def test_hf_schema(self, capsys):
        _, out, _ = run_cli(
            ["hf", poly_path("f1"), "--fiber", "1/5,2/5", "--json"], capsys)
        doc = json.loads(out)
        jsonschema.validate(doc, SCHEMA)
        assert doc["hf"]["rank"] == 0
        assert doc["hf"]["fiber"] == ["1/5", "2/5"]

    def test_balanced_schema(self, capsys):
        _, out, _ = run_cli(
            ["balanced", poly_path("p1xp1"), "--mode", "holonomy", "--json"],
            capsys)
        doc = json.loads(out)
        jsonschema.validate(doc, SCHEMA)
        assert len(doc["balanced"]["solutions"]) == 4

    def test_critical_schema(self, capsys):
        _, out, _ = run_cli(["critical", poly_path("p2"), "--json"], capsys)
        doc = json.loads(out)
        jsonschema.validate(doc, SCHEMA)
        assert doc["critical"]["count"] == 3
        assert all(cp["matched_balanced"] is not None
                   for cp in doc["critical"]["points"])

    def test_byte_identical(self):
        env = dict(os.environ)
        runs = [subprocess.run(
            [sys.executable, "-m", "toricfloer.cli", "balanced",
             poly_path("p2"), "--mode", "holonomy", "--json"],
            capture_output=True, env=env) for _ in range(2)]
        assert runs[0].returncode == runs[1].returncode == 0
        assert runs[0].stdout == runs[1].stdout

    def test_float_formatting(self):
        from fractions import Fraction
        assert rep.format_float(1 / 3) == "0.33333333333333331"
        assert rep.format_rational(Fraction(3)) == "3"
        assert rep.format_rational(Fraction(-7, 2)) == "-7/2"


class TestGolden:
    @pytest.mark.parametrize("name", CORPUS)
    def test_analyze_golden(self, name, capsys):
        golden = (resources.files("toricfloer") / "data" / "golden"
                  / f"{name}_analyze.json").read_text()
        code, out, _ = run_cli(["analyze", poly_path(name), "--json"], capsys)
        assert code == 0
        assert out == golden

    @pytest.mark.parametrize("name", ("p2", "p1xp1", "f1"))
    def test_balanced_golden(self, name, capsys):
        golden = (resources.files("toricfloer") / "data" / "golden"
                  / f"{name}_balanced.json").read_text()
        code, out, _ = run_cli(["balanced", poly_path(name), "--json"],
                               capsys)
        assert code == 0
        assert out == golden
