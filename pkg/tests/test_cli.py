import json
import subprocess
import sys

import pytest

from blockforge.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_supply_and_verify_round_trip(tmp_path, capsys):
    sup = tmp_path / "mds.pts"
    code, _, err = run_cli(["supply", "--field", "5", "--k", "3", "--n", "4",
                            "--mode", "mds", "--out", str(sup)], capsys)
    assert code == 0
    report = json.loads(err)
    assert report["result"]["report"]["s_independence"] == 2
    assert (tmp_path / "mds.pts.json").exists()

    g = tmp_path / "k4.g"
    code, _, _ = run_cli(["graph", "complete", "--n", "4", "--out", str(g)], capsys)
    assert code == 0

    b = tmp_path / "b.pts"
    code, _, err = run_cli(["construct", "--recipe", "cherry", "--graph", str(g),
                            "--supply", str(sup), "--s", "2", "--out", str(b)], capsys)
    assert code == 0
    assert json.loads(err)["result"]["points"] == 31

    code, out, _ = run_cli(["verify", "--set", str(b), "--s", "2"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["result"]["result"] == "pass"
    assert rep["result"]["subspaces_checked"] == 31

    gen = tmp_path / "code.mat"
    code, _, _ = run_cli(["convert", "--set", str(b), "--out", str(gen)], capsys)
    assert code == 0
    code, out, _ = run_cli(["mincheck", "--code", str(gen), "--s", "2"], capsys)
    assert code == 0
    assert json.loads(out)["result"]["result"] == "pass"


def test_verify_failure_exit_code(tmp_path, capsys):
    # points of a single hyperplane of PG(2,2)
    b = tmp_path / "hyper.pts"
    b.write_text("field 2 1 0 1\ndims 3 3\n1 0 0\n0 1 0\n1 1 0\n")
    code, out, _ = run_cli(["verify", "--set", str(b), "--s", "1"], capsys)
    assert code == 1
    rep = json.loads(out)
    assert rep["result"]["result"] == "fail"
    assert rep["result"]["counterexample"] is not None


def test_verify_jobs_byte_identical(tmp_path, capsys):
    sup = tmp_path / "mds.pts"
    run_cli(["supply", "--field", "5", "--k", "3", "--n", "4", "--out", str(sup)], capsys)
    g = tmp_path / "k4.g"
    run_cli(["graph", "complete", "--n", "4", "--out", str(g)], capsys)
    b = tmp_path / "b.pts"
    run_cli(["construct", "--recipe", "cherry", "--graph", str(g),
             "--supply", str(sup), "--s", "2", "--out", str(b)], capsys)
    outputs = set()
    for jobs in ("1", "4", "16"):
        code, out, _ = run_cli(["--jobs", jobs, "verify", "--set", str(b), "--s", "2"],
                               capsys)
        assert code == 0
        # the config echo records the worker count; strip it before comparing
        payload = json.loads(out)
        payload["config"].pop("jobs")
        outputs.add(json.dumps(payload, sort_keys=True))
    assert len(outputs) == 1


def test_sampled_verify_deterministic(tmp_path, capsys):
    b = tmp_path / "hyper.pts"
    b.write_text("field 2 1 0 1\ndims 3 3\n1 0 0\n0 1 0\n1 1 0\n")
    runs = set()
    for _ in range(2):
        code, out, _ = run_cli(["--seed", "7", "verify", "--set", str(b),
                                "--s", "1", "--sampled", "50"], capsys)
        assert code == 1
        runs.add(out)
    assert len(runs) == 1


def test_budget_env_exit_code(tmp_path, capsys, monkeypatch):
    b = tmp_path / "hyper.pts"
    b.write_text("field 2 1 0 1\ndims 3 3\n1 0 0\n0 1 0\n1 1 0\n")
    monkeypatch.setenv("BLOCKFORGE_BUDGET_SUBSPACES", "2")
    code, _, err = run_cli(["verify", "--set", str(b), "--s", "1"], capsys)
    assert code == 2
    assert "budget 'subspaces' exceeded" in err


def test_oracle_subcommand(capsys):
    code, out, _ = run_cli(["oracle", "--field", "2", "--k", "3", "--s", "1"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["result"]["size"] == 6 and rep["result"]["exact"]


def test_spectra_text_format(tmp_path, capsys):
    g = tmp_path / "k5.g"
    run_cli(["graph", "complete", "--n", "5", "--out", str(g)], capsys)
    code, out, _ = run_cli(["--format", "text", "spectra", "--graph", str(g)], capsys)
    assert code == 0
    assert "lambda_bound: 1.0" in out


def test_bench_subcommand(tmp_path, capsys):
    sup = tmp_path / "mds.pts"
    run_cli(["supply", "--field", "5", "--k", "3", "--n", "4", "--out", str(sup)], capsys)
    g = tmp_path / "k4.g"
    run_cli(["graph", "complete", "--n", "4", "--out", str(g)], capsys)
    b = tmp_path / "b.pts"
    run_cli(["construct", "--recipe", "cherry", "--graph", str(g),
             "--supply", str(sup), "--s", "2", "--out", str(b)], capsys)
    code, out, err = run_cli(["bench", "--set", str(b), "--s", "2"], capsys)
    assert code == 0
    assert "subspaces" in err  # timing on stderr only
    assert json.loads(out)["result"]["subspaces_checked"] == 31


def test_cq_informational_bound(tmp_path, capsys):
    b = tmp_path / "hyper.pts"
    b.write_text("field 2 1 0 1\ndims 3 3\n1 0 0\n0 1 0\n1 1 0\n")
    code, out, _ = run_cli(["verify", "--set", str(b), "--s", "1", "--cq", "1.5"],
                           capsys)
    rep = json.loads(out)
    assert rep["result"]["improved_lower_bound"] == 9  # ceil(1.5 * 3 * 2)


def test_pipe_graph_to_spectra():
    cmd = (f"{sys.executable} -m blockforge graph lps --p 5 --q 13 2>/dev/null | "
           f"{sys.executable} -m blockforge spectra --tol 1e-6")
    proc = subprocess.run(cmd, shell=True, capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0
    rep = json.loads(proc.stdout)
    assert rep["result"]["n"] == 2184 and rep["result"]["bipartite"]
    assert rep["result"]["lambda_bound"] <= 2 * 5 ** 0.5 + 1e-6


def test_pipe_construct_to_verify(tmp_path):
    sup = tmp_path / "mds.pts"
    g = tmp_path / "k4.g"
    for argv in (["supply", "--field", "5", "--k", "3", "--n", "4", "--out", str(sup)],
                 ["graph", "complete", "--n", "4", "--out", str(g)]):
        assert main(argv) == 0
    cmd = (f"{sys.executable} -m blockforge construct --recipe cherry "
           f"--graph {g} --supply {sup} --s 2 2>/dev/null | "
           f"{sys.executable} -m blockforge verify --set - --s 2")
    proc = subprocess.run(cmd, shell=True, capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["result"] == "pass"


def test_graph_transform_subcommands(tmp_path, capsys):
    g = tmp_path / "c6.g"
    g.write_text("graph 6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n0 5\n")
    code, out, _ = run_cli(["graph", "power", "--in", str(g), "--u", "2"], capsys)
    assert code == 0
    assert out.startswith("graph 6 12\n")  # C6^2 is 4-regular
    code, out, _ = run_cli(["graph", "blowup", "--in", str(g), "--D", "2"], capsys)
    assert code == 0
    assert out.startswith("graph 12 30\n")  # 6 clique edges + 6*4 cross edges
    code, out, _ = run_cli(["graph", "from-file", "--in", str(g)], capsys)
    assert code == 0
    from blockforge.expander import parse_graph
    assert parse_graph(out).adjacency == parse_graph(g.read_text()).adjacency


def test_supply_random_mode(tmp_path, capsys):
    out_path = tmp_path / "r.pts"
    code, _, err = run_cli(["supply", "--field", "3", "--k", "4", "--n", "12",
                            "--mode", "random", "--s", "1", "--t", "12",
                            "--seed", "1", "--out", str(out_path)], capsys)
    assert code == 0
    rep = json.loads(err)
    assert rep["result"]["provenance"] == "random-verified"
    assert rep["result"]["report"]["s_independence"] >= 1


def test_bad_arguments_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--s", "2"])  # missing --set
    assert exc.value.code == 2
    code = main(["verify", "--set", "/nonexistent/file.pts", "--s", "2"])
    capsys.readouterr()
    assert code == 2
