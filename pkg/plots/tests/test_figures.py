"""Figure-generation tests.

The fixture data comes from the primary package's external interfaces only:
the acceptance CSVs under ``artifacts/acceptance`` when present, otherwise a
fresh run of the ``incentive-bandits`` CLI into a temp directory.
"""

from __future__ import annotations

import json
import math
import shutil
import subprocess
import sys
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from incentive_plots import (
    FigureSpec,
    MissingColumnError,
    l1_stats,
    load_runs,
    plot_l1,
    plot_regret,
    regret_stats,
)

REPO_ROOT = Path(__file__).resolve().parent.parent.parent
ACCEPTANCE_DIR = REPO_ROOT / "artifacts" / "acceptance"


@pytest.fixture(scope="module")
def experiment_dir(tmp_path_factory) -> Path:
    """Directory holding at least one (CSV, summary JSON) pair."""
    if ACCEPTANCE_DIR.exists() and list(ACCEPTANCE_DIR.glob("*.csv")):
        return ACCEPTANCE_DIR
    out = tmp_path_factory.mktemp("runs")
    subprocess.run(
        [
            sys.executable, "-m", "incentive_bandits.cli", "run",
            "--preset", "table1_n5", "--T", "4000", "--seeds", "1..5",
            "--setting-id", "table1_n5", "--out", str(out),
        ],
        check=True,
        capture_output=True,
    )
    # test_figures expects the acceptance naming scheme
    shutil.move(out / "table1_n5.csv", out / "regret_table1_n5.csv")
    shutil.move(out / "table1_n5.summary.json", out / "regret_table1_n5.summary.json")
    return out


@pytest.fixture(scope="module")
def regret_csv(experiment_dir) -> Path:
    return sorted(experiment_dir.glob("regret_*.csv"))[0]


@pytest.fixture(scope="module")
def l1_csv(experiment_dir) -> Path:
    candidates = sorted(experiment_dir.glob("l1_*.csv"))
    return candidates[0] if candidates else sorted(experiment_dir.glob("regret_*.csv"))[0]


class TestReductionMatchesHarness:
    def test_reduction_matches_harness_convention_to_1e9(self, experiment_dir):
        """Same inputs, same numbers: an independent implementation of the
        harness aggregate (mean, population sd, se = sd/sqrt(n)) over the CSV
        agrees with the plotting reduction to 1e-9."""
        for csv_path in sorted(experiment_dir.glob("*.csv")):
            df = pd.read_csv(csv_path)
            stats = regret_stats(load_runs([csv_path], ("setting_id", "seed", "t", "regret_cum")))
            for (setting, t), block in df.groupby(["setting_id", "t"]):
                values = block["regret_cum"].to_numpy(dtype=float)
                want_mean = values.mean()
                want_sd = values.std(ddof=0)
                want_se = want_sd / math.sqrt(len(values))
                row = stats[(stats["setting_id"] == setting) & (stats["t"] == t)].iloc[0]
                assert abs(row["mean"] - want_mean) <= 1e-9
                assert abs(row["sd"] - want_sd) <= 1e-9
                assert abs(row["se"] - want_se) <= 1e-9

    def test_agreement_with_harness_summary_files(self, experiment_dir):
        """Against the full-precision summary JSONs the only slack is the
        CSV's documented 9-significant-digit float format."""
        pairs = [
            (csv, csv.with_name(csv.stem + ".summary.json"))
            for csv in sorted(experiment_dir.glob("*.csv"))
        ]
        pairs = [(c, s) for c, s in pairs if s.exists()]
        assert pairs, "no CSV/summary pairs found"
        for csv_path, summary_path in pairs:
            summary = json.loads(summary_path.read_text())
            stats = regret_stats(load_runs([csv_path], ("setting_id", "seed", "t", "regret_cum")))
            block = stats[stats["setting_id"] == summary["setting_id"]]
            assert list(block["t"]) == summary["checkpoints"]
            n = summary["n_runs"]
            np.testing.assert_allclose(block["mean"], summary["mean_regret"], rtol=2e-9)
            # sd propagates the per-value quantum relative to itself, not to the mean
            se_want = [sd / math.sqrt(n) for sd in summary["sd_regret"]]
            np.testing.assert_allclose(block["se"], se_want, rtol=1e-7, atol=1e-6)

    def test_single_seed_zero_width_band(self, regret_csv, tmp_path):
        df = pd.read_csv(regret_csv)
        one_seed = df[df["seed"] == df["seed"].iloc[0]]
        path = tmp_path / "single.csv"
        one_seed.to_csv(path, index=False)
        stats = regret_stats(load_runs([path], ("setting_id", "seed", "t", "regret_cum")))
        assert (stats["se"] == 0).all()


class TestRegretFigure:
    def test_files_created(self, regret_csv, tmp_path):
        spec = FigureSpec(csv_paths=(str(regret_csv),), kind="regret", out_dir=str(tmp_path))
        written = plot_regret(spec)
        assert [p.suffix for p in written] == [".png", ".svg"]
        assert all(p.stat().st_size > 1_000 for p in written)

    def test_mean_curve_is_sublinear(self, regret_csv):
        """Monotone increasing with decreasing per-round slope at checkpoints."""
        stats = regret_stats(load_runs([regret_csv], ("setting_id", "seed", "t", "regret_cum")))
        for _, block in stats.groupby("setting_id"):
            t = block["t"].to_numpy(dtype=float)
            mean = block["mean"].to_numpy()
            assert len(t) >= 3
            assert np.all(np.diff(mean) > 0)
            slopes = np.diff(mean) / np.diff(t)
            assert np.all(np.diff(slopes) < 0)

    def test_two_settings_two_curves(self, regret_csv, tmp_path):
        df = pd.read_csv(regret_csv)
        other = df.copy()
        other["setting_id"] = "shadow"
        other["regret_cum"] *= 1.1
        combined = tmp_path / "combined.csv"
        pd.concat([df, other], ignore_index=True).to_csv(combined, index=False)
        stats = regret_stats(load_runs([combined], ("setting_id", "seed", "t", "regret_cum")))
        assert stats["setting_id"].nunique() == 2
        spec = FigureSpec(csv_paths=(str(combined),), kind="regret", out_dir=str(tmp_path), stem="two")
        written = plot_regret(spec)
        svg = (tmp_path / "two.svg").read_text()
        assert "shadow" in svg

    def test_rerender_is_byte_stable(self, regret_csv, tmp_path):
        spec_a = FigureSpec(csv_paths=(str(regret_csv),), kind="regret", out_dir=str(tmp_path / "a"))
        spec_b = FigureSpec(csv_paths=(str(regret_csv),), kind="regret", out_dir=str(tmp_path / "b"))
        a = plot_regret(spec_a)
        b = plot_regret(spec_b)
        for pa, pb in zip(a, b):
            assert pa.read_bytes() == pb.read_bytes()


class TestL1Figure:
    def test_files_created(self, l1_csv, tmp_path):
        spec = FigureSpec(csv_paths=(str(l1_csv),), kind="l1", out_dir=str(tmp_path))
        written = plot_l1(spec)
        assert all(p.exists() and p.stat().st_size > 1_000 for p in written)

    def test_decreasing_trend(self, l1_csv):
        stats = l1_stats(load_runs([l1_csv], ("setting_id", "seed", "t", "l1_to_oracle")))
        for _, block in stats.groupby("setting_id"):
            med = block.sort_values("t")["median_l1"].to_numpy()
            assert med[-1] < med[0]

    def test_flat_synthetic_input(self, tmp_path):
        rows = []
        for seed in range(1, 4):
            for t in (100, 1000, 10_000):
                rows.append({"setting_id": "flat", "seed": seed, "t": t, "l1_to_oracle": 2.5})
        path = tmp_path / "flat.csv"
        pd.DataFrame(rows).to_csv(path, index=False)
        stats = l1_stats(load_runs([path], ("setting_id", "seed", "t", "l1_to_oracle")))
        assert (stats["median_l1"] == 2.5).all()
        spec = FigureSpec(csv_paths=(str(path),), kind="l1", out_dir=str(tmp_path), stem="flat")
        assert plot_l1(spec)


class TestErrors:
    def test_missing_column_named(self, tmp_path):
        path = tmp_path / "broken.csv"
        pd.DataFrame({"setting_id": ["x"], "seed": [1], "t": [10]}).to_csv(path, index=False)
        with pytest.raises(MissingColumnError, match="regret_cum"):
            load_runs([path], ("setting_id", "seed", "t", "regret_cum"))

    def test_cli_reports_missing_column(self, tmp_path):
        from incentive_plots.cli import main

        path = tmp_path / "broken.csv"
        pd.DataFrame({"setting_id": ["x"], "seed": [1], "t": [10]}).to_csv(path, index=False)
        assert main(["regret", str(path), "--out", str(tmp_path)]) == 1


class TestCli:
    def test_end_to_end(self, regret_csv, tmp_path, capsys):
        from incentive_plots.cli import main

        code = main(["regret", str(regret_csv), "--out", str(tmp_path), "--stem", "figure1"])
        assert code == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert len(out) == 2
        assert (tmp_path / "figure1.png").exists()
        assert (tmp_path / "figure1.svg").exists()
