import os
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "pathlap.cli"]


def run_cli(*args, env_extra=None, cwd=None):
    env = dict(os.environ)
    env.pop("PATHLAP_SEED", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, env=env, cwd=cwd, timeout=600
    )


class TestParsing:
    def test_help_exits_zero(self):
        assert run_cli("--help").returncode == 0
        assert run_cli("generate", "--help").returncode == 0

    def test_unknown_flag_exits_two_naming_it(self):
        result = run_cli("generate", "--bogus-flag", "1")
        assert result.returncode == 2
        assert "--bogus-flag" in result.stderr

    def test_bad_choice_exits_two(self):
        result = run_cli("generate", "--model", "XX")
        assert result.returncode == 2
        assert "--model" in result.stderr


class TestGenerate:
    def test_smoke_writes_two_files(self, tmp_path):
        result = run_cli(
            "generate", "--model", "ba", "--n", "25", "--case", "base",
            "--train", "10", "--test", "5", "--seed", "7", "--out", str(tmp_path),
        )
        assert result.returncode == 0, result.stderr
        train = tmp_path / "ba_n25_base_train.jsonl"
        test = tmp_path / "ba_n25_base_test.jsonl"
        assert train.exists() and test.exists()
        assert len(train.read_text().splitlines()) == 11
        assert len(test.read_text().splitlines()) == 6

    def test_rerun_identical_bytes(self, tmp_path):
        outs = []
        for sub in ("one", "two"):
            out = tmp_path / sub
            result = run_cli(
                "generate", "--model", "ws", "--n", "20", "--case", "exponential",
                "--train", "4", "--test", "2", "--seed", "3", "--out", str(out),
            )
            assert result.returncode == 0, result.stderr
            outs.append(out)
        for name in ("ws_n20_exponential_train.jsonl", "ws_n20_exponential_test.jsonl"):
            assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()

    def test_generation_error_exits_three(self, tmp_path):
        result = run_cli(
            "generate", "--model", "er", "--n", "30", "--p", "1e-6",
            "--train", "2", "--test", "1", "--seed", "1", "--out", str(tmp_path),
        )
        assert result.returncode == 3
        assert "error" in result.stderr

    def test_env_seed_fallback(self, tmp_path):
        flagged = tmp_path / "flagged"
        env = tmp_path / "env"
        r1 = run_cli(
            "generate", "--model", "ba", "--n", "15", "--train", "3", "--test", "1",
            "--seed", "42", "--out", str(flagged),
        )
        r2 = run_cli(
            "generate", "--model", "ba", "--n", "15", "--train", "3", "--test", "1",
            "--out", str(env), env_extra={"PATHLAP_SEED": "42"},
        )
        assert r1.returncode == 0 and r2.returncode == 0
        name = "ba_n15_base_train.jsonl"
        assert (flagged / name).read_bytes() == (env / name).read_bytes()


class TestConfigPrecedence:
    def test_config_file_then_flag_overrides(self, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("model = BA\nn = 15\ntrain = 3\ntest = 1\nseed = 11\n")
        from_config = tmp_path / "cfg_out"
        r1 = run_cli("generate", "--config", str(config), "--out", str(from_config))
        assert r1.returncode == 0, r1.stderr
        assert (from_config / "ba_n15_base_train.jsonl").exists()

        overridden = tmp_path / "flag_out"
        r2 = run_cli(
            "generate", "--config", str(config), "--n", "12", "--out", str(overridden)
        )
        assert r2.returncode == 0, r2.stderr
        assert (overridden / "ba_n12_base_train.jsonl").exists()

    def test_unknown_config_key_exits_two(self, tmp_path):
        config = tmp_path / "bad.cfg"
        config.write_text("mystery = 5\n")
        result = run_cli("generate", "--config", str(config))
        assert result.returncode == 2
        assert "mystery" in result.stderr


class TestSimulate:
    def test_single_run_report(self):
        result = run_cli("simulate", "--model", "ba", "--n", "20", "--seed", "4")
        assert result.returncode == 0, result.stderr
        lines = result.stdout.strip().splitlines()
        assert lines[0].split("\t") == ["case", "n", "iterations", "converged", "epsilon", "final_value"]
        fields = lines[1].split("\t")
        assert fields[0] == "base"
        assert fields[3] == "true"

    def test_emit_trajectory(self, tmp_path):
        out = tmp_path / "history.csv"
        result = run_cli(
            "simulate", "--model", "ba", "--n", "10", "--seed", "2",
            "--emit-trajectory", str(out),
        )
        assert result.returncode == 0, result.stderr
        lines = out.read_text().splitlines()
        assert lines[0].startswith("step,node_0")
        header_fields = len(lines[0].split(","))
        assert header_fields == 11
        # one row per state including the initial one
        report_iterations = int(result.stdout.splitlines()[1].split("\t")[2])
        assert len(lines) == 1 + report_iterations + 1

    def test_repeat_reports_both_cases(self):
        result = run_cli("simulate", "--model", "ba", "--n", "15", "--seed", "1", "--repeat", "5")
        assert result.returncode == 0, result.stderr
        lines = result.stdout.strip().splitlines()
        assert lines[0].split("\t") == ["case", "repeats", "median_iterations", "converged"]
        cases = {line.split("\t")[0] for line in lines[1:]}
        assert cases == {"base", "exponential"}


class TestSpectralAndEvaluate:
    def test_spectral_table(self):
        result = run_cli("spectral", "--model", "ws", "--n", "16", "--seed", "5")
        assert result.returncode == 0, result.stderr
        lines = result.stdout.strip().splitlines()
        assert lines[0].split("\t") == ["k", "components", "zero_multiplicity", "fiedler"]
        assert len(lines) >= 2
        first = lines[1].split("\t")
        assert first[0] == "1"
        assert first[1] == "1"  # sampled backbone is connected
        assert first[1] == first[2]

    def test_evaluate_tsv(self, tmp_path):
        gen = run_cli(
            "generate", "--model", "ba", "--n", "15", "--train", "6", "--test", "3",
            "--seed", "8", "--out", str(tmp_path),
        )
        assert gen.returncode == 0, gen.stderr
        result = run_cli("evaluate", str(tmp_path / "ba_n15_base_test.jsonl"))
        assert result.returncode == 0, result.stderr
        lines = result.stdout.strip().splitlines()
        assert lines[0].split("\t") == [
            "model", "n", "case", "split", "strategy", "rmse", "mape", "time_ms",
        ]
        assert len(lines) == 3  # both strategies
        for line in lines[1:]:
            fields = line.split("\t")
            assert fields[0] == "BA" and fields[1] == "15"
            assert float(fields[5]) >= 0.0
