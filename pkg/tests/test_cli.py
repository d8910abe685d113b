#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import json
from montest.cli import main
from montest.functions import read_function


def _write(tmp_path, text, name="f.txt"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_gen_is_deterministic(tmp_path):
    """Assert gen writes byte-identical files for the same seed."""

    paths = [str(tmp_path / name) for name in ("a.txt", "b.txt")]
    for path in paths:
        argv = ["gen", "--dist", "mu", "--k", "2", "--m", "5"]
        assert main(argv + ["--seed", "3", "--out", path]) == 0

    with open(paths[0]) as first, open(paths[1]) as second:
        assert first.read() == second.read()
    assert read_function(paths[0]).n == 4


def test_gen_without_out_writes_function_to_stdout(capsys):
    """Assert the summary goes to stderr when the function goes to stdout."""

    assert main(["gen", "--dist", "nu", "--k", "2", "--m", "5"]) == 0
    captured = capsys.readouterr()
    assert captured.out.splitlines()[0].startswith("4 ")
    assert "n: 4" in captured.err


def test_dist_reports_exact_ratio(tmp_path, capsys):
    """Test dist on the two-point decreasing function."""

    path = _write(tmp_path, "2 2\n1\n0\n")

    assert main(["dist", path, "--json"]) == 0
    result = json.loads(capsys.readouterr().out)["result"]
    assert result["distance"] == 1
    assert result["ratio"] == "1/2"
    assert result["pairs"] == [[0, 1]]


def test_test_exit_codes(tmp_path, capsys):
    """Assert accept-majority exits 0 and reject-majority exits 1."""

    monotone = _write(tmp_path, "4 4\n0\n1\n1\n3\n", "up.txt")
    decreasing = _write(tmp_path, "2 2\n1\n0\n", "down.txt")
    argv = ["test", "--algo", "exhaustive", "--trials", "3"]

    assert main(argv + ["--input", monotone]) == 0
    assert "accept: 3" in capsys.readouterr().out
    assert main(argv + ["--input", decreasing, "--json"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["aggregates"]["verdict_counts"] == {
        "accept": 0,
        "reject": 3,
    }
    assert report["aggregates"]["witnesses"] == [[0, 1]] * 3


def test_test_writes_reproducible_report(tmp_path):
    """Assert two identical test runs write identical reports."""

    paths = [str(tmp_path / name) for name in ("a.json", "b.json")]
    for path in paths:
        argv = ["test", "--dist", "nu", "--k", "3", "--m", "5"]
        main(argv + ["--trials", "5", "--seed", "11", "--out", path])

    with open(paths[0]) as first, open(paths[1]) as second:
        assert first.read() == second.read()


def test_test_rejects_unusable_tester(tmp_path, capsys):
    """Assert the improved tester with eps * n < 2 is a usage error."""

    path = _write(tmp_path, "2 2\n0\n1\n")

    assert main(["test", "--input", path, "--eps", "1/2"]) == 2
    assert "exhaustive" in capsys.readouterr().err


def test_pairs_with_eps(tmp_path, capsys):
    """Test pairs reports detecting endpoints when eps is given."""

    path = _write(tmp_path, "4 4\n3\n2\n1\n0\n")

    assert main(["pairs", path, "--eps", "1", "--json"]) == 0
    result = json.loads(capsys.readouterr().out)["result"]
    assert len(result["pairs"]) == 2
    assert len(result["detecting"]) == 2


def test_verify_exhaustive_lemmas():
    """Assert the exhaustive cut and good-assignment checks verify."""

    assert main(["verify", "--lemma", "cut", "--k", "4", "--exhaustive"]) == 0
    argv = ["verify", "--lemma", "goodalpha", "--k", "2", "--m", "5"]
    assert main(argv + ["--exhaustive"]) == 0


def test_verify_unknown_lemma_is_usage_error(capsys):
    """Assert bad usage exits 2 with a message instead of raising."""

    assert main(["verify", "--lemma", "nope"]) == 2
    assert "error" in capsys.readouterr().err
    assert main([]) == 2


def test_grid_constant_function(tmp_path, capsys):
    """Test grid on a constant function over the 2 x 2 grid."""

    path = _write(tmp_path, "4 2\n1\n1\n1\n1\n")

    assert main(["grid", "--input", path, "--d", "2", "--b", "1"]) == 0
    assert "violating_pairs: 0" in capsys.readouterr().out
    assert main(["grid", "--input", path, "--d", "2", "--b", "2"]) == 2


def test_grid_decreasing_function(tmp_path, capsys):
    """Assert a decreasing line function violates the grid order."""

    path = _write(tmp_path, "4 4\n3\n2\n1\n0\n")

    argv = ["grid", "--input", path, "--d", "2", "--b", "1", "--json"]
    assert main(argv) == 0
    result = json.loads(capsys.readouterr().out)["result"]
    assert result["violating_pairs"] > 0
    assert result["distance"] >= result["disjoint_pairs"] > 0
    assert result["line_distance"] == 3


def test_experiment_is_deterministic(capsys):
    """Assert the experiment report depends only on its arguments."""

    argv = ["experiment", "--k", "2", "--m", "5", "--algo", "exhaustive"]
    argv += ["--trials", "4", "--budgets", "1,4", "--json"]
    outputs = []
    for _ in range(2):
        assert main(argv) == 0
        outputs.append(capsys.readouterr().out)

    assert outputs[0] == outputs[1]
    rows = json.loads(outputs[0])["aggregates"]["rows"]
    assert [row["budget"] for row in rows] == [1, 4]
    assert rows[0]["max_queries"] <= 1


def test_zero_trials_is_usage_error(tmp_path, capsys):
    """Assert commands that need trials exit 2 when given none."""

    path = _write(tmp_path, "2 2\n0\n1\n")
    argv = ["experiment", "--k", "2", "--m", "5", "--trials", "0"]

    assert main(argv) == 2
    assert "trial" in capsys.readouterr().err
    argv = ["test", "--input", path, "--algo", "exhaustive", "--trials", "0"]
    assert main(argv) == 2


def test_non_ascii_digit_is_parse_error(tmp_path, capsys):
    """Assert a superscript digit is reported with its line number."""

    path = _write(tmp_path, "2 5\n0\n²\n")

    assert main(["dist", path]) == 2
    assert "line 3" in capsys.readouterr().err


def test_output_does_not_depend_on_jobs(capsys):
    """Assert one worker and four workers print identical reports."""

    commands = [
        ["test", "--dist", "nu", "--k", "3", "--m", "5", "--trials", "8"],
        ["experiment", "--k", "2", "--m", "5", "--trials", "6"],
    ]
    for argv in commands:
        outputs = []
        for jobs in ("1", "4"):
            main(argv + ["--seed", "5", "--json", "--jobs", jobs])
            outputs.append(capsys.readouterr().out)
        assert outputs[0] == outputs[1]
        assert json.loads(outputs[0])["trials"]
