import json

import pytest

from cdex.cli import main
from cdex.model import CdeProblem, save_problem_file

from conftest import FIXTURES

PROBLEM = str(FIXTURES / "six_client_problem.json")
MATRIX = str(FIXTURES / "six_client_matrix.json")
MATRIX5 = str(FIXTURES / "six_client_matrix_gf5.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", "--problem", PROBLEM)
    assert code == 0
    assert "diameter rho      = 4" in out
    assert "capability delta  = 1" in out
    assert "degree bound      = 180" in out


def test_analyze_structured(capsys):
    code, out, _ = run(capsys, "analyze", "--problem", PROBLEM, "--format", "structured")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "capability"
    assert doc["rho"] == 4
    assert doc["delta"] == 1
    assert doc["rho_per_client"] == [4] * 6


def test_analyze_trivial_problem_notes_convention(tmp_path, capsys):
    path = tmp_path / "p.json"
    save_problem_file(path, CdeProblem(k=2, n=3, holdings=[[1, 2]] * 3), 3)
    code, out, _ = run(capsys, "analyze", "--problem", str(path))
    assert code == 0
    assert "no decoding is needed" in out


def test_analyze_infeasible_exit_2(tmp_path, capsys):
    path = tmp_path / "p.json"
    save_problem_file(path, CdeProblem(k=2, n=2, holdings=[[], [1, 2]]), 3)
    code, _, err = run(capsys, "analyze", "--problem", str(path))
    assert code == 2
    assert "client 1" in err


def test_analyze_missing_file_exit_1(capsys):
    code, _, err = run(capsys, "analyze", "--problem", "no-such-file.json")
    assert code == 1
    assert err


def test_analyze_output_and_figure(tmp_path, capsys):
    out_path = tmp_path / "report.txt"
    code, _, _ = run(
        capsys, "analyze", "--problem", PROBLEM,
        "--output", str(out_path), "--figure",
    )
    assert code == 0
    assert "diameter rho" in out_path.read_text()
    fig = out_path.with_suffix(".png")
    assert fig.exists() and fig.stat().st_size > 0


def test_verify_pass_and_fail(capsys):
    code, out, _ = run(
        capsys, "verify", "--problem", PROBLEM, "--matrix", MATRIX5, "--delta", "1"
    )
    assert code == 0
    assert "PASS" in out
    code, out, _ = run(
        capsys, "verify", "--problem", PROBLEM, "--matrix", MATRIX, "--delta", "1"
    )
    assert code == 4
    assert "FAIL" in out
    assert "binding client" in out


def test_verify_default_delta_is_capability(capsys):
    code, out, _ = run(capsys, "verify", "--problem", PROBLEM, "--matrix", MATRIX5)
    assert code == 0
    assert "target delta      = 1" in out


def test_verify_support_violation_exit_1(tmp_path, capsys):
    doc = json.loads(open(MATRIX).read())
    doc["entries"][1][0] = 2
    path = tmp_path / "tampered.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "verify", "--problem", PROBLEM, "--matrix", str(path))
    assert code == 1
    assert "support" in err.lower()


def test_construct_round_trip(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    with pytest.warns(UserWarning):  # q = 5 is below the degree bound
        code, out, _ = run(
            capsys, "construct", "--problem", PROBLEM, "--field", "5",
            "--output", "e.json",
        )
    assert code == 0
    assert "PASS" in out
    code, _, _ = run(capsys, "verify", "--problem", PROBLEM, "--matrix", "e.json")
    assert code == 0
    code, out, _ = run(
        capsys, "simulate", "--problem", PROBLEM, "--matrix", "e.json",
        "--exhaustive", "--packets", "1,2,0,1,2,1",
    )
    assert code == 0
    assert "all plans recovered" in out


def test_simulate_exhaustive_large_field_exit_5(tmp_path, capsys, monkeypatch):
    # enumeration decoding over GF(1009) cannot fit any sane budget
    monkeypatch.chdir(tmp_path)
    code, _, _ = run(
        capsys, "construct", "--problem", PROBLEM, "--field", "1009",
        "--output", "big.json",
    )
    assert code == 0
    code, _, err = run(
        capsys, "simulate", "--problem", PROBLEM, "--matrix", "big.json",
        "--exhaustive", "--packets", "1,2,0,1,2,1",
    )
    assert code == 5
    assert "decode enumeration" in err


def test_construct_small_field_exit_3(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, err = run(
        capsys, "construct", "--problem", PROBLEM, "--field", "2", "--output", "e.json"
    )
    assert code == 3
    assert "exhaust" in err.lower()


def test_construct_structured(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run(
        capsys, "construct", "--problem", PROBLEM, "--field", "1009",
        "--output", "e.json", "--format", "structured",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "construct"
    assert doc["passed"] is True
    assert doc["matrix_file"] == "e.json"


def test_decode_round(capsys):
    code, out, _ = run(
        capsys, "decode", "--problem", PROBLEM, "--matrix", MATRIX,
        "--client", "1", "--broadcast", "2,0,2,1,2,1", "--held", "1=1,3=0,6=1",
    )
    assert code == 0
    assert "status   = unique" in out
    assert "distance = 0" in out


def test_decode_structured(capsys):
    code, out, _ = run(
        capsys, "decode", "--problem", PROBLEM, "--matrix", MATRIX,
        "--client", "1", "--broadcast", "2,0,2,1,2,1", "--held", "1=1,3=0,6=1",
        "--format", "structured",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["recovered"] == {"2": 2, "4": 1, "5": 2}
    assert doc["estimate"] == [1, 2, 0, 1, 2, 1]


def test_decode_bad_held_exit_1(capsys):
    code, _, err = run(
        capsys, "decode", "--problem", PROBLEM, "--matrix", MATRIX,
        "--client", "1", "--broadcast", "2,0,2,1,2,1", "--held", "1=1",
    )
    assert code == 1
    assert "holdings" in err


def test_simulate_monte_carlo(capsys):
    code, out, _ = run(
        capsys, "simulate", "--problem", PROBLEM, "--field", "1009",
        "--trials", "40", "--seed", "9",
    )
    assert code == 0
    assert "pass fraction" in out
    assert "floor 1 - d/q" in out


def test_simulate_structured_combined(tmp_path, capsys):
    fig = tmp_path / "mc.png"
    code, out, _ = run(
        capsys, "simulate", "--problem", PROBLEM, "--matrix", MATRIX5,
        "--exhaustive", "--packets", "1,2,0,1,2,1",
        "--field", "1009", "--trials", "25", "--seed", "4",
        "--format", "structured", "--figure", str(fig),
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["exhaustive"]["ok"] is True
    assert doc["monte_carlo"]["trials"] == 25
    assert fig.exists() and fig.stat().st_size > 0


def test_simulate_exhaustive_reports_witness(capsys):
    code, out, _ = run(
        capsys, "simulate", "--problem", PROBLEM, "--matrix", MATRIX5,
        "--exhaustive", "--delta", "2", "--packets", "1,2,0,1,2,1",
    )
    assert code == 0
    assert "VIOLATION FOUND" in out
    assert "witness plan" in out


def test_simulate_trace_log(tmp_path, capsys):
    log = tmp_path / "traces.jsonl"
    code, _, _ = run(
        capsys, "simulate", "--problem", PROBLEM, "--matrix", MATRIX5,
        "--exhaustive", "--packets", "1,2,0,1,2,1", "--trace-log", str(log),
    )
    assert code == 0
    lines = [json.loads(line) for line in log.read_text().splitlines()]
    assert len(lines) == 31  # empty plan + every (client, value)
    assert all(rec["all_recovered"] for rec in lines)
    assert lines[0]["plan"] == {}
    assert all(rec["packets"] == [1, 2, 0, 1, 2, 1] for rec in lines)


def test_simulate_zero_trials_exit_1(capsys):
    code, _, err = run(capsys, "simulate", "--problem", PROBLEM, "--trials", "0")
    assert code == 1
    assert "nothing to simulate" in err


def test_simulate_budget_exit_5(capsys):
    code, _, err = run(
        capsys, "simulate", "--problem", PROBLEM, "--matrix", MATRIX5,
        "--exhaustive", "--delta", "2", "--budget", "5",
        "--packets", "1,2,0,1,2,1",
    )
    assert code == 5
    assert "budget" in err.lower()


def test_nonprime_field_exit_1(capsys):
    code, _, err = run(
        capsys, "simulate", "--problem", PROBLEM, "--field", "10", "--trials", "5"
    )
    assert code == 1
    assert "not prime" in err
