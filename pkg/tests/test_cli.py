import json

import pytest
from click.testing import CliRunner

import cli
from services import canonicalizer, msc_core

A9_GF7 = "[[5,0,0,0],[1,3,2,0]]"


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli.cli, list(args))


class TestClassify:
    def test_fixed_point(self, runner):
        result = invoke(runner, "classify", "--field", "7^1", "--msc", A9_GF7)
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["label"] == {"class": "general", "family": 9, "params": []}
        assert data["witness"] == [["1", "0"], ["0", "1"]]
        assert data["field"] == "7^1"

    def test_zero_is_trivial(self, runner):
        result = invoke(runner, "classify", "--field", "5^1", "--msc", "[[0,0,0,0],[0,0,0,0]]")
        assert result.exit_code == 0
        assert json.loads(result.stdout)["label"]["class"] == "trivial"

    def test_extension_is_reported(self, runner):
        result = invoke(runner, "classify", "--field", "7^1", "--msc", "[[1,0,0,3],[0,0,0,0]]")
        assert result.exit_code == 0
        assert json.loads(result.stdout)["field"] == "7^2"

    def test_table_format(self, runner):
        result = invoke(runner, "classify", "--field", "7^1", "--msc", A9_GF7, "--format", "table")
        assert result.exit_code == 0
        assert "general/A9()" in result.stdout

    @pytest.mark.parametrize("msc", ["[[1,0,0],[0,0,0,0]]", "not json", "[[1,0,0,0],[0,0,0,\"x\"]]", "{}"])
    def test_malformed_input_is_a_usage_error(self, runner, msc):
        result = invoke(runner, "classify", "--field", "7^1", "--msc", msc)
        assert result.exit_code == 2

    def test_bad_field(self, runner):
        result = invoke(runner, "classify", "--field", "6^1", "--msc", A9_GF7)
        assert result.exit_code == 2


class TestIsom:
    def test_sign_pair(self, runner):
        result = invoke(runner, "isom", "--field", "7^1",
                        "--msc", "[[1,0,0,1],[2,0,0,0]]", "--msc2", "[[1,0,0,1],[5,0,0,0]]")
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["isomorphic"] is True
        assert data["field"] == "7^1"

    def test_not_isomorphic_is_still_success(self, runner):
        result = invoke(runner, "isom", "--field", "7^1",
                        "--msc", "[[0,0,0,0],[0,0,0,0]]", "--msc2", A9_GF7)
        assert result.exit_code == 0
        assert json.loads(result.stdout) == {"isomorphic": False, "witness": None, "field": "7^1"}

    def test_brute(self, runner):
        result = invoke(runner, "isom", "--field", "3^1", "--brute",
                        "--msc", "[[1,0,0,0],[0,2,2,0]]", "--msc2", "[[1,0,0,0],[0,2,2,0]]")
        assert result.exit_code == 0
        assert json.loads(result.stdout)["isomorphic"] is True

    def test_brute_respects_the_bound(self, runner):
        result = invoke(runner, "isom", "--field", "7^1", "--brute", "--max-q", "5",
                        "--msc", A9_GF7, "--msc2", A9_GF7)
        assert result.exit_code == 2


class TestOracleCommands:
    def test_orbit(self, runner):
        result = invoke(runner, "orbit", "--field", "3^1", "--msc", "[[0,0,0,0],[0,0,0,0]]")
        assert result.exit_code == 0
        assert json.loads(result.stdout)["size"] == 1

    def test_census_csv(self, runner):
        result = invoke(runner, "census", "--field", "2^1", "--format", "csv")
        assert result.exit_code == 0
        assert result.stdout.startswith("representative,size,subset")

    def test_census_table(self, runner):
        result = invoke(runner, "census", "--field", "2^1", "--format", "table")
        assert result.exit_code == 0
        assert "256 matrices" in result.stdout

    def test_census_bound(self, runner):
        result = invoke(runner, "census", "--field", "5^1")
        assert result.exit_code == 2


class TestMaterialize:
    def test_family_9(self, runner):
        result = invoke(runner, "materialize", "--field", "7^1", "--family", "A9")
        assert result.exit_code == 0
        assert json.loads(result.stdout)["entries"] == [["5", "0", "0", "0"], ["1", "3", "2", "0"]]

    def test_params(self, runner):
        result = invoke(runner, "materialize", "--field", "7^1", "--family", "A2", "--params", "[1, 2, 0]")
        assert result.exit_code == 0

    @pytest.mark.parametrize("family, params", [("A13", "[]"), ("A2", "[1]"), ("A2", "{}"), ("B2", "[]")])
    def test_bad_requests(self, runner, family, params):
        result = invoke(runner, "materialize", "--field", "7^1", "--family", family, "--params", params)
        assert result.exit_code == 2


class TestVerify:
    def test_bridges(self, runner):
        result = invoke(runner, "verify", "--suite", "bridges")
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["ok"] is True

    def test_selected_fields(self, runner):
        result = invoke(runner, "verify", "--suite", "traces", "--suite", "witness",
                        "--field", "5^1", "--samples", "10", "--format", "table")
        assert result.exit_code == 0
        assert result.stdout.rstrip().endswith("OK")

    def test_injected_fault_fails(self, runner, monkeypatch):
        monkeypatch.setattr(msc_core, "transform", lambda A, g: A)
        result = invoke(runner, "verify", "--suite", "traces", "--field", "5^1", "--samples", "20")
        assert result.exit_code == 1
        assert json.loads(result.stdout)["ok"] is False

    def test_unknown_suite(self, runner):
        result = invoke(runner, "verify", "--suite", "nope")
        assert result.exit_code == 2


class TestRun:
    def test_returns_exit_codes(self, capsys):
        assert cli.run(["materialize", "--field", "7^1", "--family", "A12"]) == 0
        assert json.loads(capsys.readouterr().out)["entries"][1] == ["1", "0", "0", "0"]
        assert cli.run(["materialize", "--field", "7^1", "--family", "A13"]) == 2

    def test_fault_exit_code(self, monkeypatch):
        monkeypatch.setattr(msc_core, "transform", lambda A, g: A)
        assert cli.run(["verify", "--suite", "traces", "--field", "5^1", "--samples", "20"]) == 1

    def test_pipeline_fault_exit_code(self, monkeypatch, capsys):
        monkeypatch.setattr(canonicalizer, "normalize_label", lambda label: label)
        assert cli.run(["verify", "--suite", "invariance", "--field", "7^1", "--samples", "400"]) == 1
        [report] = json.loads(capsys.readouterr().out)["suites"]
        assert report["suite"] == "invariance"
        assert report["failed"] > 0
