"""End-to-end tests for the ``softqn-bench`` command-line interface."""

import pytest

from softqn.cli import _resolve_params, build_parser, main


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "softqn-bench" in capsys.readouterr().out


def test_missing_subcommand_is_usage_error(capsys):
    assert main([]) == 2


def test_seed_out_of_range_is_usage_error(capsys):
    assert main(["toy", "--seed", "-1"]) == 2
    assert main(["toy", "--seed", str(2**64)]) == 2


def test_toy_run_writes_csvs(tmp_path, capsys):
    code = main(["toy", "--out", str(tmp_path)])
    assert code == 0
    printed = capsys.readouterr().out.splitlines()
    names = sorted(p.rsplit("/", 1)[-1] for p in printed)
    assert "toy_long.csv" in names
    assert any(n.startswith("fig_toy_") for n in names)
    for line in printed:
        assert (tmp_path / line.rsplit("/", 1)[-1]).is_file()


def test_unknown_method_exits_two(tmp_path, capsys):
    assert main(["toy", "--method", "bogus", "--out", str(tmp_path)]) == 2
    assert "bogus" in capsys.readouterr().err


def test_unknown_cutest_problem_exits_two(tmp_path, capsys):
    code = main(["cutest", "--problem", "NOSUCH", "--trials", "1", "--out", str(tmp_path)])
    assert code == 2
    assert "NOSUCH" in capsys.readouterr().err


def test_unknown_config_key_exits_two(tmp_path, capsys):
    cfg = tmp_path / "bench.ini"
    cfg.write_text("[toy]\nbogus = 1\n")
    assert main(["toy", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "bogus" in err


def test_malformed_config_exits_two(tmp_path, capsys):
    cfg = tmp_path / "bench.ini"
    cfg.write_text("not an ini file [[[")
    assert main(["toy", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert main(["toy", "--config", str(tmp_path / "absent.ini"), "--out", str(tmp_path)]) == 2


def test_missing_dataset_exits_three(tmp_path, capsys):
    code = main(["logreg", "--dataset", str(tmp_path / "absent.libsvm"), "--out", str(tmp_path)])
    assert code == 3
    err = capsys.readouterr().err
    assert "LIBSVM" in err  # tells the user how to obtain a dataset


def test_malformed_dataset_exits_three(tmp_path, capsys):
    bad = tmp_path / "bad.libsvm"
    bad.write_text("+1 7:not_a_number\n")
    code = main(["logreg", "--dataset", str(bad), "--out", str(tmp_path)])
    assert code == 3
    assert "bad.libsvm" in capsys.readouterr().err


def test_cli_flags_override_config(tmp_path):
    cfg = tmp_path / "bench.ini"
    cfg.write_text("[qp]\ntrials = 3\nseed = 7\n")
    parser = build_parser()

    from softqn.experiments import QP_DEFAULTS

    args = parser.parse_args(["qp", "--config", str(cfg), "--trials", "2"])
    params = _resolve_params(args, QP_DEFAULTS)
    assert params["trials"] == 2  # command line wins
    assert params["seed"] == 7  # config still supplies the rest

    args = parser.parse_args(["qp", "--config", str(cfg)])
    params = _resolve_params(args, QP_DEFAULTS)
    assert params["trials"] == 3


def test_nonpositive_trials_rejected(tmp_path, capsys):
    assert main(["qp", "--trials", "0", "--out", str(tmp_path)]) == 2


def test_method_list_parsing():
    parser = build_parser()
    from softqn.experiments import QP_DEFAULTS

    args = parser.parse_args(["qp", "--method", "softqn, sgd"])
    params = _resolve_params(args, QP_DEFAULTS)
    assert params["methods"] == ["softqn", "sgd"]


def test_proptest_quick_sweep_passes(capsys):
    assert main(["proptest"]) == 0
    out = capsys.readouterr().out
    assert "all checks passed" in out
    assert out.count("PASS") == 10


def test_console_script_is_installed():
    import shutil
    import subprocess

    exe = shutil.which("softqn-bench")
    if exe is None:
        pytest.skip("console script not on PATH (package not installed)")
    proc = subprocess.run([exe, "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "proptest" in proc.stdout
