import io
import json
import subprocess
import sys

import pytest

from cli_cases import CASES, case_id, fx
from rptkit import cli, combinatorics, cumulants, diagrams, power_counting, variational


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv,expected", CASES, ids=[case_id(a) for a, _ in CASES])
def test_exit_codes(argv, expected, capsys):
    code, out, err = run(argv, capsys)
    assert code == expected
    if expected:
        assert err
    if expected != 0:
        assert out == ""


@pytest.mark.parametrize("argv,expected", [c for c in CASES if c[1] == 0],
                         ids=[case_id(a) for a, e in CASES if e == 0])
def test_repeatable(argv, expected, capsys):
    first = run(argv, capsys)[1]
    second = run(argv, capsys)[1]
    assert first == second and first


class TestBell:
    def test_csv(self, capsys):
        assert run(["bell", "--max", "3"], capsys)[1] == "n,bell_n\n0,1\n1,1\n2,2\n3,5\n"

    def test_zero(self, capsys):
        assert run(["bell", "--max", "0"], capsys)[1] == "n,bell_n\n0,1\n"

    def test_json_matches_library(self, capsys):
        doc = json.loads(run(["bell", "--max", "40", "--format", "json"], capsys)[1])
        assert [int(r["bell_n"]) for r in doc["bell"]] == combinatorics.bell_numbers(40)


class TestCumulants:
    def test_gaussian(self, capsys):
        doc = json.loads(run(["cumulants", "--input", fx("gaussian.json")], capsys)[1])
        assert doc["values"] == [{"index": [2], "value": "1"}]

    def test_matches_library(self, capsys):
        with open(fx("random_moments.json")) as fh:
            table = cumulants.MomentTable.from_json(json.load(fh))
        for method, fn in (("series", cumulants.cumulants_from_moments_series),
                           ("partition", cumulants.cumulants_from_moments_partition)):
            out = run(["cumulants", "--input", fx("random_moments.json"), "--method", method],
                      capsys)[1]
            assert json.loads(out) == fn(table).to_json()

    def test_both_has_null_discrepancy(self, capsys):
        doc = json.loads(run(["cumulants", "--input", fx("random_moments.json"),
                              "--method", "both"], capsys)[1])
        assert doc["discrepancy"] is None

    def test_stdin(self, capsys, monkeypatch):
        with open(fx("gaussian.json")) as fh:
            monkeypatch.setattr(sys, "stdin", io.StringIO(fh.read()))
        code, out, _ = run(["cumulants", "--input", "-"], capsys)
        assert code == 0
        assert json.loads(out)["values"] == [{"index": [2], "value": "1"}]


class TestDiagram:
    def analyze(self, name, capsys, *extra):
        code, out, _ = run(["diagram", "--input", fx(name), "--analyze", *extra], capsys)
        assert code == 0
        return json.loads(out)

    def test_double_edge(self, capsys):
        doc = self.analyze("double_edge.json", capsys)
        assert doc["one_particle_irreducible"] is True
        assert doc["divergence"]["loop_degree"] == 0

    def test_dumbbell(self, capsys):
        assert self.analyze("dumbbell.json", capsys)["one_particle_irreducible"] is False

    def test_el4(self, capsys):
        doc = self.analyze("charge_el4.json", capsys)
        assert doc["el"] == 4 and doc["divergence"]["paper_degree"] == 4
        assert doc["divergence"]["per_line_exponent"] == "1/2"
        assert doc["prime"] is True

    def test_sobolev_flag(self, capsys):
        doc = self.analyze("double_edge.json", capsys, "--sobolev-index=-5/2")
        assert doc["divergence"]["shifted_degree"] == "-5/2"
        assert doc["divergence"]["classification"] == "convergent"

    def test_matches_library(self, capsys):
        with open(fx("charge_el4.json")) as fh:
            d = diagrams.from_json(json.load(fh))
        assert self.analyze("charge_el4.json", capsys) == \
            json.loads(json.dumps(cli.analyze_diagram(d)))
        out = run(["diagram", "--input", fx("charge_el4.json"), "--dot"], capsys)[1]
        assert out == diagrams.to_dot(d)


class TestIdentities:
    def test_bell_egf(self, capsys):
        doc = json.loads(run(["identities", "--check", "bell-egf", "--order", "16"], capsys)[1])
        assert doc["reports"][0]["mismatch"] is None

    def test_2var(self, capsys):
        doc = json.loads(run(["identities", "--check", "2var", "--order", "10"], capsys)[1])
        assert doc["reports"] == [r.to_json() for r in variational.check_2var_identity(10)]
        assert doc["reports"][1]["mismatch"] == {"order": [0], "lhs": "2", "rhs": "0"}

    def test_2nvar(self, capsys):
        doc = json.loads(run(["identities", "--check", "2nvar", "--n", "1", "--order", "10"],
                             capsys)[1])
        assert doc["reports"][0]["mismatch"] == {"order": [0], "lhs": "2", "rhs": "0"}


class TestFeynman:
    def test_equal(self, capsys):
        doc = json.loads(run(["feynman", "--alpha", "1", "--beta", "1"], capsys)[1])
        assert float(doc["value"]) == 1.0 and float(doc["abs_error"]) == 0.0

    def test_half(self, capsys):
        doc = json.loads(run(["feynman", "--alpha", "2", "--beta", "1"], capsys)[1])
        assert abs(float(doc["value"]) - 0.5) <= 1e-10
        assert float(doc["value"]) == power_counting.feynman_combine(2.0, 1.0).value

    def test_sweep_csv(self, capsys):
        lines = run(["feynman", "--sweep", "--size", "5"], capsys)[1].split("\n")
        assert lines[0] == "alpha,beta,value,reference,abs_error"
        assert len(lines) == 27 and lines[-1] == ""
        assert all(float(row.split(",")[4]) <= 1e-10 for row in lines[1:-1])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rptkit", "bell", "--max", "4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == "n,bell_n\n0,1\n1,1\n2,2\n3,5\n4,15\n"
