"""CLI behavior: subcommands, formats, exit codes, remote mode."""

import csv
import io
import json

import httpx
import pytest
from fastapi.testclient import TestClient

from mcf import cli
from mcf.service.app import create_app


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture()
def phi_file(tmp_path):
    return write_json(
        tmp_path / "phi.json",
        {
            "generator": {"minpoly": [-1, -1, 1], "interval": ["1", "2"]},
            "values": [{"coords": ["0", "1"]}],
        },
    )


@pytest.fixture()
def spec_file(tmp_path):
    return write_json(tmp_path / "spec.json", {"m": 2, "pre": [[], []], "period": [[1], [1]]})


class TestExpandCommand:
    def test_json_output(self, phi_file, capsys):
        assert cli.main(["expand", phi_file, "--max-iter", "10"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["status"]["kind"] == "cycle"
        assert report["status"]["preperiod"] == 0 and report["status"]["cycle"] == 1

    def test_rational_pair_terminates(self, tmp_path, capsys):
        f = write_json(tmp_path / "pair.json", {"values": ["7/3", "5/2"]})
        assert cli.main(["expand", f]) == 0
        assert json.loads(capsys.readouterr().out)["status"]["kind"] == "terminated"

    def test_cubic_pair_runs(self, tmp_path, capsys):
        f = write_json(
            tmp_path / "cbrt.json",
            {
                "generator": {"minpoly": [-2, 0, 0, 1], "interval": ["1", "2"]},
                "values": [{"coords": ["0", "1", "0"]}, {"coords": ["0", "0", "1"]}],
            },
        )
        assert cli.main(["expand", f, "--max-iter", "200"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["status"]["kind"] in ("cycle", "truncated")

    def test_csv_format(self, phi_file, capsys):
        assert cli.main(["expand", phi_file, "--format", "csv"]) == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0] == ["n", "a1"]
        assert rows[1] == ["0", "1"]

    def test_missing_file(self, capsys):
        assert cli.main(["expand", "/nonexistent.json"]) == 2

    def test_bad_json(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert cli.main(["expand", str(bad)]) == 2

    def test_semantic_error(self, tmp_path, capsys):
        f = write_json(
            tmp_path / "mix.json",
            {
                "generator": {"minpoly": [-4, 0, 1], "interval": ["1", "3"]},
                "values": [{"coords": ["0", "1"]}],
            },
        )
        assert cli.main(["expand", f]) == 2


class TestVerifyCommands:
    def test_forward_text(self, spec_file, capsys):
        assert cli.main(["verify-forward", spec_file, "--horizon", "150", "--format", "text"]) == 0
        out = capsys.readouterr().out
        assert "overall: pass" in out

    def test_forward_batch(self, tmp_path, capsys):
        f = write_json(
            tmp_path / "batch.json",
            [
                {"m": 1, "pre": [[1]], "period": [[2]]},
                {"m": 2, "pre": [[], []], "period": [[1], [1]]},
            ],
        )
        assert cli.main(["verify-forward", f, "--batch", "--format", "text"]) == 0
        assert "2/2 specs passed" in capsys.readouterr().out

    def test_converse(self, tmp_path, capsys):
        f = write_json(
            tmp_path / "sqrt2.json",
            {
                "generator": {"minpoly": [-2, 0, 1], "interval": ["1", "2"]},
                "values": [{"coords": ["0", "1"]}],
            },
        )
        assert cli.main(["verify-converse", f, "--max-order", "4", "--format", "text"]) == 0
        assert "consistent" in capsys.readouterr().out

    def test_horizon_too_small(self, spec_file):
        assert cli.main(["verify-forward", spec_file, "--horizon", "2"]) == 2


class TestCubicCommand:
    def test_json(self, tmp_path, capsys):
        f = write_json(tmp_path / "cubic.json", {"p": 0, "q": 0, "r": 2, "z": 1})
        assert cli.main(["cubic", f, "--depth", "12"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["n_matrix"] == {
            "matrix": [[1, 2, 0], [0, 1, 2], [1, 0, 1]],
            "trace": 3,
            "determinant": 5,
            "second_invariant": 3,
        }

    def test_degenerate_exits_2(self, tmp_path, capsys):
        f = write_json(tmp_path / "bad.json", {"p": 0, "q": 0, "r": 8, "z": 1})
        assert cli.main(["cubic", f, "--depth", "5"]) == 2

    def test_csv_error_columns(self, tmp_path, capsys):
        f = write_json(tmp_path / "cubic.json", {"p": 0, "q": 0, "r": 2, "z": 1})
        assert cli.main(["cubic", f, "--depth", "8", "--format", "csv"]) == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0] == ["n", "rep_err1", "rep_err2", "jacobi_err1", "jacobi_err2"]
        assert len(rows) == 10


class TestLrsFitCommand:
    def test_fibonacci(self, tmp_path, capsys):
        f = write_json(tmp_path / "fib.json", [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89])
        assert cli.main(["lrs-fit", f, "--max-order", "4"]) == 0
        assert json.loads(capsys.readouterr().out)["fit"]["coeffs"] == ["1", "1"]

    def test_no_fit(self, tmp_path, capsys):
        primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71]
        f = write_json(tmp_path / "primes.json", {"terms": primes})
        assert cli.main(["lrs-fit", f, "--max-order", "4", "--format", "text"]) == 0
        assert "no recurrence" in capsys.readouterr().out

    def test_powers(self, tmp_path, capsys):
        f = write_json(tmp_path / "pow.json", [6**n for n in range(12)])
        assert cli.main(["lrs-fit", f, "--max-order", "3"]) == 0
        assert json.loads(capsys.readouterr().out)["fit"]["order"] == 1


class TestConvergentsCommand:
    def test_csv(self, tmp_path, capsys):
        f = write_json(tmp_path / "q.json", {"m": 1, "quotients": [[1]] * 6})
        assert cli.main(["convergents", f, "--format", "csv"]) == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0] == ["n", "A1", "A2", "conv1"]
        assert rows[-1] == ["5", "13", "8", "13/8"]


class TestRemoteMode:
    def test_round_trip_through_http(self, phi_file, capsys, monkeypatch):
        app_client = TestClient(create_app())

        def fake_post(url, json=None, timeout=None):
            path = url.replace("http://fake", "")
            return app_client.post(path, json=json)

        monkeypatch.setattr(httpx, "post", fake_post)
        assert cli.main(["expand", phi_file, "--server", "http://fake"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["status"]["kind"] == "cycle"

    def test_remote_input_error_maps_to_2(self, tmp_path, capsys, monkeypatch):
        app_client = TestClient(create_app())

        def fake_post(url, json=None, timeout=None):
            return app_client.post(url.replace("http://fake", ""), json=json)

        monkeypatch.setattr(httpx, "post", fake_post)
        f = write_json(tmp_path / "bad.json", {"p": 0, "q": 0, "r": 8, "z": 1})
        assert cli.main(["cubic", f, "--server", "http://fake"]) == 2


def test_internal_consistency_maps_to_3(spec_file, monkeypatch, capsys):
    from mcf.service import handlers

    def boom(request):
        raise ArithmeticError("cycle matrix 1 disagrees with matrix 0")

    monkeypatch.setattr(handlers, "verify_forward", boom)
    assert cli.main(["verify-forward", spec_file]) == 3
    assert "internal consistency" in capsys.readouterr().err


def test_console_script_help():
    import subprocess

    result = subprocess.run(["mcf", "--help"], capture_output=True, text=True)
    assert result.returncode == 0
    assert "expand" in result.stdout and "lrs-fit" in result.stdout


def test_round_trip_reports_reparse(tmp_path, capsys):
    # every report re-parses under its own schema
    from mcf.service import schemas

    f = write_json(tmp_path / "pair.json", {"values": ["7/3", "5/2"]})
    cli.main(["expand", f])
    schemas.ExpansionReportModel.model_validate(json.loads(capsys.readouterr().out))

    f = write_json(tmp_path / "spec.json", {"m": 1, "pre": [[1]], "period": [[2]]})
    cli.main(["verify-forward", f, "--horizon", "100"])
    schemas.ForwardReportModel.model_validate(json.loads(capsys.readouterr().out))

    f = write_json(tmp_path / "cubic.json", {"p": 1, "q": 1, "r": 1, "z": 0})
    cli.main(["cubic", f, "--depth", "10"])
    schemas.CubicReportModel.model_validate(json.loads(capsys.readouterr().out))
