"""Render experiment CSVs into the two standard figure families.

Input is the delimited output of the simulation harness (one row per seed and
checkpoint, columns ``setting_id,seed,t,phase,chosen,sum_incentives,
regret_cum,diameter,l1_to_oracle``). The regret figure shows the across-seed
mean cumulative regret with a shaded +/- standard-error band per setting; the
l1 figure shows per-seed distance to the oracle incentives against the
horizon with the median trend per setting.

Reductions follow the harness conventions exactly: population standard
deviation, standard error sd / sqrt(#seeds). Figures are regenerated from CSV
input only and carry no timestamps, so reruns are byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "incentive-plots"  # stable SVG element ids

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

__all__ = [
    "FigureSpec",
    "MissingColumnError",
    "load_runs",
    "regret_stats",
    "l1_stats",
    "plot_regret",
    "plot_l1",
]

REGRET_COLUMNS = ("setting_id", "seed", "t", "regret_cum")
L1_COLUMNS = ("setting_id", "seed", "t", "l1_to_oracle")


class MissingColumnError(ValueError):
    """A required CSV column is absent; the message names it."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input CSVs, figure kind, and output location."""

    csv_paths: tuple[str, ...]
    kind: str  # "regret" | "l1"
    out_dir: str
    stem: str | None = None

    def output_stem(self) -> str:
        return self.stem or self.kind


def load_runs(paths: Iterable[str | Path], required: Sequence[str]) -> pd.DataFrame:
    """Concatenate run CSVs, checking that every required column exists."""
    frames = []
    for path in paths:
        frame = pd.read_csv(path)
        for column in required:
            if column not in frame.columns:
                raise MissingColumnError(f"{path} is missing required column '{column}'")
        frames.append(frame)
    if not frames:
        raise ValueError("no CSV paths given")
    return pd.concat(frames, ignore_index=True)


def regret_stats(df: pd.DataFrame) -> pd.DataFrame:
    """Per (setting_id, t): mean, population sd, standard error, seed count."""
    grouped = df.groupby(["setting_id", "t"])["regret_cum"]
    stats = grouped.agg(
        mean="mean",
        sd=lambda x: float(np.std(x, ddof=0)),
        n="count",
    ).reset_index()
    stats["se"] = stats["sd"] / np.sqrt(stats["n"])
    return stats.sort_values(["setting_id", "t"]).reset_index(drop=True)


def l1_stats(df: pd.DataFrame) -> pd.DataFrame:
    """Per (setting_id, t): median l1 across seeds (NaN rows dropped)."""
    clean = df.dropna(subset=["l1_to_oracle"])
    stats = (
        clean.groupby(["setting_id", "t"])["l1_to_oracle"]
        .median()
        .reset_index(name="median_l1")
    )
    return stats.sort_values(["setting_id", "t"]).reset_index(drop=True)


def _save(fig: plt.Figure, out_dir: str | Path, stem: str) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for ext in ("png", "svg"):
        path = out / f"{stem}.{ext}"
        fig.savefig(path, metadata={"Date": None} if ext == "svg" else None)
        written.append(path)
    plt.close(fig)
    return written


def plot_regret(spec: FigureSpec) -> list[Path]:
    """Mean cumulative regret vs horizon with a +/- standard-error band."""
    df = load_runs(spec.csv_paths, REGRET_COLUMNS)
    stats = regret_stats(df)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for setting, block in stats.groupby("setting_id"):
        ax.plot(block["t"], block["mean"], marker="o", label=str(setting))
        ax.fill_between(
            block["t"],
            block["mean"] - block["se"],
            block["mean"] + block["se"],
            alpha=0.25,
        )
    ax.set_xscale("log")
    ax.set_xlabel("T")
    ax.set_ylabel("cumulative regret")
    ax.legend(title="setting")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return _save(fig, spec.out_dir, spec.output_stem())


def plot_l1(spec: FigureSpec) -> list[Path]:
    """Per-seed l1 distance to the oracle incentives vs horizon, with medians."""
    df = load_runs(spec.csv_paths, L1_COLUMNS)
    clean = df.dropna(subset=["l1_to_oracle"])
    stats = l1_stats(df)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for setting, block in clean.groupby("setting_id"):
        ax.scatter(block["t"], block["l1_to_oracle"], s=18, alpha=0.45)
        med = stats[stats["setting_id"] == setting]
        ax.plot(med["t"], med["median_l1"], marker="s", label=f"{setting} (median)")
    ax.set_xscale("log")
    ax.set_xlabel("T")
    ax.set_ylabel("l1 distance to oracle incentives")
    ax.legend(title="setting")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return _save(fig, spec.out_dir, spec.output_stem())
