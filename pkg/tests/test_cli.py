import json
import subprocess
import sys

import pytest

from ropdb.cli import main
from ropdb.chainprob import chain_instance
from ropdb.generators import running_example, write_generated


@pytest.fixture
def ex_dir(tmp_path):
    return write_generated(*running_example(), tmp_path / "ex")


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_json(capsys, ex_dir):
    code, out, _ = run_cli(capsys, "eval", "--instance", str(ex_dir),
                           "--query", str(ex_dir / "query.txt"), "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["read_once"] is True
    assert report["expression"] == "(w1*v1 + w2*v2)*u1 + w3*(v3*u2 + v4*u3)"
    assert report["probability"] == pytest.approx(0.254746112, abs=1e-9)
    assert set(report["stats"]) == {"n", "k", "m_H", "beta_H", "m_co", "m_C", "m_T",
                                    "depth", "row_decomps", "table_decomps"}
    assert list(report) == sorted(report)


def test_eval_output_is_byte_stable(capsys, ex_dir):
    first = run_cli(capsys, "eval", "--instance", str(ex_dir), "--format", "json")
    second = run_cli(capsys, "eval", "--instance", str(ex_dir), "--format", "json")
    assert first == second


def test_eval_chain_exits_two(capsys, tmp_path):
    d = write_generated(*chain_instance(3), tmp_path / "c")
    code, out, _ = run_cli(capsys, "eval", "--instance", str(d))
    assert code == 2
    assert "read_once: false" in out


def test_cotable_modes(capsys, ex_dir):
    code, out, _ = run_cli(capsys, "cotable", "--instance", str(ex_dir),
                           "--mode", "cooccurrence")
    assert code == 0 and len(out.splitlines()) == 12
    assert all(len(line.split("\t")) == 2 for line in out.splitlines())
    _, out, _ = run_cli(capsys, "cotable", "--instance", str(ex_dir))
    assert len(out.splitlines()) == 8
    _, out, _ = run_cli(capsys, "cotable", "--instance", str(ex_dir), "--format", "json")
    adj = json.loads(out)
    assert adj["u1"] == ["v1", "v2"]


def test_oracle_and_stats(capsys, ex_dir):
    code, out, _ = run_cli(capsys, "oracle", "--instance", str(ex_dir))
    assert code == 0 and out.strip().endswith("oracle: ok")
    code, out, _ = run_cli(capsys, "stats", "--instance", str(ex_dir), "--format", "json")
    assert code == 0 and json.loads(out)["m_H"] == 20


def test_plan_flag(capsys, ex_dir, tmp_path):
    plan = tmp_path / "plan.txt"
    plan.write_text("(project () (join (scan R) (join (scan S) (scan T))))\n")
    code, out, _ = run_cli(capsys, "eval", "--instance", str(ex_dir), "--plan", str(plan))
    assert code == 0 and "w3*(v3*u2 + v4*u3)" in out


def test_gen_and_chain(capsys, tmp_path):
    code, _, _ = run_cli(capsys, "gen", "--family", "random", "--k", "3", "--seed", "4",
                         "--out", str(tmp_path / "r"))
    assert code == 0 and (tmp_path / "r" / "query.txt").is_file()
    code, out, _ = run_cli(capsys, "chain", "--n", "3")
    assert code == 0 and float(out) == 0.5
    code, out, _ = run_cli(capsys, "chain", "--n", "2", "--p", "0.5,0.5,0.5",
                           "--format", "json")
    assert json.loads(out) == {"n": 2, "probability": 0.375}


@pytest.mark.parametrize("argv,code_tag", [
    (["eval", "--instance", "/no/such/dir"], "domain_error"),
    (["chain", "--n", "2", "--p", "0.5,0.5"], "domain_error"),
    (["chain", "--n", "1", "--p", "uniform:1.5"], "domain_error"),
])
def test_input_errors(capsys, argv, code_tag):
    code, _, err = run_cli(capsys, *argv)
    assert code == 1 and err.startswith(f"error[{code_tag}]")


def test_query_errors_are_reported(capsys, ex_dir, tmp_path):
    bad = tmp_path / "q.txt"
    bad.write_text("Q() :- R(x), R(y).")
    code, _, err = run_cli(capsys, "eval", "--instance", str(ex_dir), "--query", str(bad))
    assert code == 1 and err.startswith("error[self_join]")


def test_cap_from_environment(tmp_path, ex_dir):
    env = {"ROPDB_ENUM_CAP": "0", "PATH": ""}
    proc = subprocess.run([sys.executable, "-m", "ropdb.cli", "eval", "--instance",
                           str(ex_dir)], capture_output=True, text=True, env=env)
    assert proc.returncode == 1 and "cap must be at least 1" in proc.stderr
