"""CLI behavior: grammar, determinism, exit codes, formats."""

import json
import math

import pytest

from polyspec.cli import main

PI = "3.141592653589793"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEigs:
    def test_rectangle_example(self, capsys):
        code, out, _ = run(
            capsys, "eigs", "--shape", "rect", "--a", PI, "--b", PI,
            "--bc", "dirichlet", "--lambda-max", "10",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "value,multiplicity"
        assert len(lines) == 5  # 2, 5, 8, 10
        assert lines[-1] == "10,2"

    def test_empty_table_has_header_only(self, capsys):
        code, out, _ = run(
            capsys, "eigs", "--shape", "rect", "--a", "1", "--b", "1",
            "--bc", "dirichlet", "--lambda-max", "1",
        )
        assert code == 0
        assert out == "value,multiplicity\n"

    def test_json_round_trips(self, capsys):
        code, out, _ = run(
            capsys, "eigs", "--shape", "equilateral", "--side", "1",
            "--bc", "neumann", "--lambda-max", "100", "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["entries"][0] == [0.0, 1]


class TestDet:
    def test_square_json(self, capsys):
        code, out, _ = run(capsys, "det", "--shape", "square", "--a", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["difference"] < 1e-12
        want = 0.5 * math.log(8.0 * math.pi**1.5 / math.gamma(0.25) ** 2)
        assert payload["zeta_prime_zero_divisor_series"] == pytest.approx(want, abs=1e-12)
        assert payload["determinant"] == pytest.approx(math.exp(-want), rel=1e-12)


class TestHeatAndFit:
    def test_heat_csv_columns(self, capsys):
        code, out, _ = run(
            capsys, "heat", "--shape", "isoright", "--leg", "1",
            "--bc", "dirichlet", "--t-grid", "0.1:0.5:3", "--method", "theta",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "t,value,method,tail_bound"
        assert len(lines) == 4

    def test_remainder_fit_summary(self, capsys):
        code, out, _ = run(
            capsys, "remainder-fit", "--shape", "rect", "--a", "1", "--b", "2",
            "--bc", "dirichlet", "--t-grid", "0.1:0.01:4",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "t,minus_t_log_R,c_hat"
        summary = json.loads(lines[-1])
        assert summary["c_hat"] == pytest.approx(1.0, rel=0.05)
        assert summary["sharp_rate_expected"] == pytest.approx(1.0)


class TestNgonAndTorus:
    def test_ngon_csv(self, capsys):
        code, out, _ = run(capsys, "ngon-limit", "--n", "3..6")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "n,hausdorff,a_m1,a_mhalf,a_0,gap"
        assert len(lines) == 5

    def test_torus_json(self, capsys):
        code, out, _ = run(capsys, "torus", "--basis", "1,0,0,1", "--t", "0.1")
        assert code == 0
        payload = json.loads(out)
        assert payload["mismatch"] < 1e-12
        assert payload["shortest_vector_multiplicity"] == 4


class TestVerifySubcommand:
    def test_single_check_passes(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--suite", "divisor-log-product,unit-square-determinant"
        )
        assert code == 0
        assert out.count("PASS") == 2

    def test_unknown_check_is_usage_error(self, capsys):
        code, _, err = run(capsys, "verify", "--suite", "no-such-check")
        assert code == 2
        assert "unknown check" in err


class TestConfigAndDeterminism:
    def test_byte_identical_output(self, tmp_path, capsys):
        argv = [
            "heat", "--shape", "equilateral", "--side", "1", "--bc", "neumann",
            "--t-grid", "0.05:1:5",
        ]
        first = tmp_path / "one.csv"
        second = tmp_path / "two.csv"
        assert main(argv + ["--out", str(first)]) == 0
        assert main(argv + ["--out", str(second), "--threads", "4"]) == 0
        capsys.readouterr()
        assert first.read_bytes() == second.read_bytes()

    def test_config_file_sets_format(self, tmp_path, capsys):
        config = tmp_path / "polyspec.toml"
        config.write_text('format = "json"\ntolerance = 1e-11\n')
        code, out, _ = run(
            capsys, "heat", "--shape", "square", "--a", "1", "--bc", "dirichlet",
            "--t-grid", "0.1:0.1:1", "--config", str(config),
        )
        assert code == 0
        assert json.loads(out)[0]["t"] == 0.1

    def test_cli_flag_overrides_config(self, tmp_path, capsys):
        config = tmp_path / "polyspec.toml"
        config.write_text('format = "json"\n')
        code, out, _ = run(
            capsys, "heat", "--shape", "square", "--a", "1", "--bc", "dirichlet",
            "--t-grid", "0.1:0.1:1", "--config", str(config), "--format", "csv",
        )
        assert code == 0
        assert out.startswith("t,value")

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        config = tmp_path / "polyspec.toml"
        config.write_text("workers = 3\n")
        code, _, err = run(
            capsys, "det", "--shape", "square", "--a", "1", "--config", str(config)
        )
        assert code == 2
        assert "unknown config" in err

    def test_env_var_thread_default(self, capsys, monkeypatch):
        monkeypatch.setenv("POLYSPEC_THREADS", "2")
        code, out, _ = run(capsys, "det", "--shape", "square", "--a", "1")
        assert code == 0

    def test_bad_thread_count(self, capsys):
        code, _, err = run(
            capsys, "det", "--shape", "square", "--a", "1", "--threads", "0"
        )
        assert code == 2


class TestExitCodes:
    def test_unknown_flag_is_exit_2(self, capsys):
        assert main(["eigs", "--nonsense"]) == 2
        capsys.readouterr()

    def test_missing_shape_parameter(self, capsys):
        code, _, err = run(
            capsys, "eigs", "--shape", "rect", "--a", "1",
            "--bc", "dirichlet", "--lambda-max", "10",
        )
        assert code == 2
        assert "needs" in err

    def test_invalid_value_is_exit_2(self, capsys):
        code, _, err = run(
            capsys, "eigs", "--shape", "rect", "--a", "-1", "--b", "1",
            "--bc", "dirichlet", "--lambda-max", "10",
        )
        assert code == 2

    def test_unsupported_shape_for_zeta_is_exit_2(self, capsys):
        code, _, err = run(
            capsys, "zeta", "--shape", "box", "--dims", "1,2", "--s", "2"
        )
        assert code == 2
        assert "error" in err

    def test_help_screens(self, capsys):
        for sub in ("eigs", "zeta", "det", "heat", "remainder-fit",
                    "ngon-limit", "torus", "verify"):
            assert main([sub, "--help"]) == 0
            capsys.readouterr()
