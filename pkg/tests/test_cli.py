import json
import os

import pytest

from betticurve import cli
from betticurve.cli import EXIT_OK, EXIT_RESOURCE, EXIT_SELFTEST_FAIL, EXIT_USAGE


def read_csv(path):
    comments, rows = [], []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            (comments if line.startswith("#") else rows).append(line)
    header = rows[0].split(",")
    body = [r.split(",") for r in rows[1:]]
    return comments, header, body


def run_cli(tmp_path, *argv):
    return cli.main(list(argv))


class TestCurveCommand:
    def test_basic_csv(self, tmp_path):
        out = str(tmp_path / "c.csv")
        code = run_cli(tmp_path, "curve", "--n", "8", "--trials", "50",
                       "--t-min", "0.05", "--t-max", "0.25", "--steps", "5",
                       "--output", out)
        assert code == EXIT_OK
        comments, header, body = read_csv(out)
        assert header == ["t", "n", "trials", "mean", "variance", "stderr", "oracle_p"]
        assert len(body) == 5
        assert comments[0] == f"# format_version: {cli.FORMAT_VERSION}"
        config = json.loads(comments[1].split("# config: ", 1)[1])
        assert config["n"] == 8 and config["trials"] == 50

    def test_plot_script_written(self, tmp_path):
        out = str(tmp_path / "c.csv")
        run_cli(tmp_path, "curve", "--n", "6", "--trials", "10",
                "--grid", "0.1,0.2", "--output", out)
        gp = str(tmp_path / "c.gp")
        assert os.path.exists(gp)
        assert "c.csv" in open(gp).read()

    def test_single_step_grid(self, tmp_path):
        out = str(tmp_path / "one.csv")
        code = run_cli(tmp_path, "curve", "--n", "5", "--trials", "10",
                       "--t-min", "0.1", "--t-max", "0.1", "--steps", "1",
                       "--output", out)
        assert code == EXIT_OK
        _, _, body = read_csv(out)
        assert len(body) == 1

    def test_oracle_column_empty_beyond_domain(self, tmp_path):
        out = str(tmp_path / "c.csv")
        run_cli(tmp_path, "curve", "--n", "6", "--trials", "10",
                "--grid", "0.1,0.4", "--output", out)
        _, header, body = read_csv(out)
        k = header.index("oracle_p")
        assert body[0][k] != ""
        assert body[1][k] == ""

    def test_oracle_column_zero_for_two_points(self, tmp_path):
        out = str(tmp_path / "c.csv")
        run_cli(tmp_path, "curve", "--n", "2", "--trials", "10",
                "--grid", "0.1,0.2", "--output", out)
        _, header, body = read_csv(out)
        k = header.index("oracle_p")
        assert all(float(row[k]) == 0.0 for row in body)

    def test_json_format(self, tmp_path):
        out = str(tmp_path / "c.json")
        code = run_cli(tmp_path, "curve", "--n", "6", "--trials", "20",
                       "--grid", "0.1,0.2", "--fmt", "json", "--output", out)
        assert code == EXIT_OK
        doc = json.load(open(out))
        assert doc["format_version"] == cli.FORMAT_VERSION
        assert doc["config"]["n"] == 6
        assert len(doc["columns"]["mean"]) == 2

    def test_config_round_trip_reproduces_bytes(self, tmp_path):
        out1 = str(tmp_path / "a.csv")
        run_cli(tmp_path, "curve", "--n", "7", "--trials", "40", "--seed", "9",
                "--grid", "0.05,0.15,0.25", "--output", out1)
        comments, _, _ = read_csv(out1)
        config = cli.RunConfig.from_dict(json.loads(comments[1].split("# config: ", 1)[1]))
        config.output = str(tmp_path / "b.csv")
        assert cli.run(config) == EXIT_OK
        _, _, body1 = read_csv(out1)
        _, _, body2 = read_csv(config.output)
        assert body1 == body2

    def test_sphere_euler_smoke(self, tmp_path):
        out = str(tmp_path / "s.csv")
        code = run_cli(tmp_path, "curve", "--manifold", "sphere",
                       "--invariant", "euler", "--n", "6", "--trials", "10",
                       "--grid", "0.3,0.8", "--output", out)
        assert code == EXIT_OK


class TestOracleCommand:
    def test_table(self, tmp_path):
        out = str(tmp_path / "o.csv")
        code = run_cli(tmp_path, "oracle", "--n", "12",
                       "--t-min", "0.05", "--t-max", "0.3", "--steps", "6",
                       "--output", out)
        assert code == EXIT_OK
        _, header, body = read_csv(out)
        assert header == ["r", "n", "p", "expected_b1", "variance_b1"]
        assert len(body) == 6
        for row in body:
            p = float(row[2])
            assert 0.0 <= p <= 1.0
            assert float(row[3]) == p

    def test_two_points_all_zero(self, tmp_path):
        out = str(tmp_path / "o.csv")
        run_cli(tmp_path, "oracle", "--n", "2", "--grid", "0.1,0.2,0.3",
                "--output", out)
        _, _, body = read_csv(out)
        assert all(float(row[2]) == 0.0 for row in body)

    def test_out_of_domain_is_usage_error(self, tmp_path, capsys):
        code = run_cli(tmp_path, "oracle", "--n", "10", "--grid", "0.1,0.5",
                       "--output", str(tmp_path / "x.csv"))
        assert code == EXIT_USAGE
        assert "error:" in capsys.readouterr().err


class TestConvergeCommand:
    def test_table(self, tmp_path):
        out = str(tmp_path / "v.csv")
        code = run_cli(tmp_path, "converge", "--t", "0.1",
                       "--n-values", "4,8,16", "--trials", "100",
                       "--target", "0.5", "--output", out)
        assert code == EXIT_OK
        _, header, body = read_csv(out)
        assert header == ["n", "t", "trials", "mean", "variance", "stderr",
                          "abs_error", "target"]
        assert [row[0] for row in body] == ["4", "8", "16"]
        for row in body:
            assert float(row[6]) == pytest.approx(abs(float(row[3]) - 0.5))

    def test_missing_args_usage_error(self, tmp_path):
        assert run_cli(tmp_path, "converge", "--t", "0.1") == EXIT_USAGE
        assert run_cli(tmp_path, "converge", "--n-values", "4,8",
                       "--target", "0.5") == EXIT_USAGE


class TestExitCodes:
    def test_invalid_grid_usage(self, tmp_path):
        code = run_cli(tmp_path, "curve", "--n", "5", "--trials", "10",
                       "--grid", "0.3,0.1", "--output", str(tmp_path / "x.csv"))
        assert code == EXIT_USAGE

    def test_missing_grid_usage(self, tmp_path):
        code = run_cli(tmp_path, "curve", "--n", "5", "--trials", "10",
                       "--output", str(tmp_path / "x.csv"))
        assert code == EXIT_USAGE

    def test_budget_maps_to_resource(self, tmp_path, monkeypatch):
        from betticurve.errors import SimplexBudgetError

        def boom(*a, **k):
            raise SimplexBudgetError("simplex budget 100 exceeded", 100)

        monkeypatch.setattr(cli.estimator, "estimate_curve", boom)
        code = run_cli(tmp_path, "curve", "--n", "5", "--trials", "10",
                       "--grid", "0.1", "--output", str(tmp_path / "x.csv"))
        assert code == EXIT_RESOURCE


class TestSelftest:
    def test_passes(self, capsys):
        code = cli.main(["selftest", "--trials", "600"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "all checks passed" in out
        assert out.count("PASS") >= 7
        assert "FAIL" not in out

    def test_too_few_trials_is_usage_error(self):
        assert cli.main(["selftest", "--trials", "100"]) == EXIT_USAGE

    def test_failure_exit_code(self, monkeypatch, capsys):
        def fake_checks(config):
            yield ("doomed", False, "forced failure")

        monkeypatch.setattr(cli, "_selftest_checks", fake_checks)
        code = cli.main(["selftest", "--trials", "600"])
        assert code == EXIT_SELFTEST_FAIL
        assert "FAIL doomed" in capsys.readouterr().out


class TestWorkers:
    def test_env_variable_respected(self, monkeypatch):
        monkeypatch.setenv("BETTI_WORKERS", "3")
        args = cli.build_parser().parse_args(["curve", "--grid", "0.1"])
        assert cli.config_from_args(args).workers == 3

    def test_flag_wins_over_env(self, monkeypatch):
        monkeypatch.setenv("BETTI_WORKERS", "3")
        args = cli.build_parser().parse_args(
            ["curve", "--grid", "0.1", "--workers", "2"])
        assert cli.config_from_args(args).workers == 2

    def test_worker_count_preserves_output_bytes(self, tmp_path):
        outs = []
        for workers in ("1", "3"):
            out = str(tmp_path / f"w{workers}.csv")
            run_cli(tmp_path, "curve", "--n", "9", "--trials", "30",
                    "--seed", "4", "--grid", "0.08,0.16,0.24",
                    "--workers", workers, "--output", out)
            _, header, body = read_csv(out)
            outs.append(body)
        assert outs[0] == outs[1]
