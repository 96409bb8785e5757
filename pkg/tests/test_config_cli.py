"""Configuration and command-line interface tests."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from incentive_bandits import ConfigError, load_config
from incentive_bandits.cli import main
from incentive_bandits.config import (
    ExperimentConfig,
    parse_seed_spec,
    random_instance,
    table1_n5,
    table1_n10,
)
from incentive_bandits.reporting import format_float


class TestPresets:
    def test_n5_values(self):
        inst = table1_n5()
        assert inst.theta0 == (29.0, 1.0, 14.0, 26.0, 15.0)
        assert inst.r0 == (14.0, -24.0, -4.0, 19.0, 29.0)
        assert (inst.c_low, inst.c_high) == (-20.0, 60.0)
        np.testing.assert_allclose(inst.s0, [0, -38, -18, 5, 15])

    def test_n10_values(self):
        inst = table1_n10()
        assert inst.n == 10
        assert inst.theta0 == (0.0, 44.0, 51.0, 65.0, 9.0, 35.0, 69.0, 91.0, 51.0, 44.0)
        assert inst.r0 == (-4.0, 8.0, 22.0, -12.0, -2.0, 46.0, -8.0, 16.0, 38.0, 14.0)
        assert (inst.c_low, inst.c_high) == (-20.0, 60.0)

    def test_preset_defaults_in_config(self):
        config = load_config(overrides={"preset": "table1_n5"})
        assert config.m == 30
        assert config.alpha == 1.0
        assert config.instance.varsigma == 0.1
        assert config.seeds == (1, 2, 3, 4, 5)
        assert config.checkpoints is None  # geometric default applied at run time

    def test_unknown_preset(self):
        with pytest.raises(ConfigError, match="unknown preset"):
            load_config(overrides={"preset": "table1_n7"})


class TestConfigValidation:
    def test_gamma_bound_violation_names_inequality(self):
        instance = table1_n10().to_dict()
        instance["gamma"] = 100.0
        instance["c_high"] = instance["r_max"] + 100.0
        with pytest.raises(ConfigError, match="gamma <= R_max - R_min - 1"):
            load_config(overrides={"instance": instance})

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError, match="unknown config keys"):
            load_config(overrides={"preset": "table1_n5", "horizon": 10})

    def test_round_trip(self):
        config = load_config(
            overrides={
                "preset": "table1_n5",
                "T": 2_000,
                "seeds": (7, 8),
                "alpha": 2.0,
                "checkpoints": (100, 2_000),
                "setting_id": "trip",
            }
        )
        again = ExperimentConfig.from_json(config.to_json())
        assert again == config

    def test_varsigma_override_applies_to_instance(self):
        config = load_config(overrides={"preset": "table1_n5", "varsigma": 0.05})
        assert config.instance.varsigma == 0.05

    def test_seed_spec(self):
        assert parse_seed_spec("1..5") == (1, 2, 3, 4, 5)
        assert parse_seed_spec("4,9,2") == (4, 9, 2)
        with pytest.raises(ConfigError):
            parse_seed_spec("5..1")
        with pytest.raises(ConfigError):
            parse_seed_spec("a,b")

    def test_random_instance_valid_and_seeded(self):
        a = random_instance(4, seed=11)
        b = random_instance(4, seed=11)
        assert a == b
        assert a.n == 4


class TestFloatFormat:
    def test_nine_significant_digits(self):
        assert format_float(123.456789123456) == "123.456789"
        assert format_float(0.000123456789123) == "0.000123456789"
        assert format_float(float("nan")) == "nan"


class TestCli:
    def run_cli(self, *args):
        return CliRunner().invoke(main, list(args), catch_exceptions=False)

    def test_verify_examples(self):
        result = self.run_cli("verify-examples")
        assert result.exit_code == 0
        assert "FAIL" not in result.output
        assert "checks passed" in result.output

    def test_run_writes_artifacts(self, tmp_path):
        out = tmp_path / "exp"
        result = self.run_cli(
            "run", "--preset", "table1_n5", "--T", "120", "--seeds", "1..2",
            "--out", str(out),
        )
        assert result.exit_code == 0, result.output
        csv_path = out / "table1_n5.csv"
        manifest_path = out / "table1_n5.manifest.json"
        summary_path = out / "table1_n5.summary.json"
        assert csv_path.exists() and manifest_path.exists() and summary_path.exists()

        lines = csv_path.read_text().strip().splitlines()
        header = lines[0].split(",")
        assert header == [
            "setting_id", "seed", "t", "phase", "chosen",
            "sum_incentives", "regret_cum", "diameter", "l1_to_oracle",
        ]
        # 2 seeds x 2 checkpoints (t=100 and t=T=120)
        assert len(lines) == 1 + 2 * 2

        manifest = json.loads(manifest_path.read_text())
        assert manifest["config"]["seeds"] == [1, 2]
        assert manifest["oracle"]["target_arm"] == 4
        assert "created_at" in manifest

    def test_repeat_run_is_byte_identical(self, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            result = self.run_cli(
                "run", "--preset", "table1_n5", "--T", "150", "--seeds", "1..2",
                "--out", str(out),
            )
            assert result.exit_code == 0
        assert (out_a / "table1_n5.csv").read_bytes() == (out_b / "table1_n5.csv").read_bytes()

    def test_strategic_run_reports_rent(self, tmp_path):
        result = self.run_cli(
            "run", "--preset", "table1_n5", "--T", "80", "--seeds", "1",
            "--agent", "strategic", "--out", str(tmp_path / "s"),
        )
        assert result.exit_code == 0, result.output
        assert "rent gain" in result.output

    def test_run_rejects_bad_config(self):
        runner = CliRunner()
        result = runner.invoke(main, ["run", "--preset", "nope"])
        assert result.exit_code != 0
        assert "unknown preset" in result.output

    def test_estimate_replay(self, tmp_path):
        replay = tmp_path / "history.csv"
        replay.write_text("pi_1,pi_2,chosen\n5,0,2\n0,3.5,2\n")
        result = self.run_cli("estimate", "--replay", str(replay), "--save-polytope",
                              str(tmp_path / "poly.json"))
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output[: result.output.rfind("}") + 1])
        assert doc["n"] == 2
        assert doc["obs_count"] == 2
        assert doc["lower"][1] == pytest.approx(5.0)
        assert (tmp_path / "poly.json").exists()

    def test_estimate_flags_inconsistent_history(self, tmp_path):
        replay = tmp_path / "history.csv"
        replay.write_text("pi_1,pi_2,chosen\n0,10,1\n10,0,2\n")
        runner = CliRunner()
        result = runner.invoke(main, ["estimate", "--replay", str(replay)])
        assert result.exit_code == 2
