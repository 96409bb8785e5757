"""Command-line interface.

Subcommands:

* ``run``: execute a replication experiment and write CSV + manifest +
  summary artifacts.
* ``verify-examples``: replay the built-in worked examples and oracle
  computations, printing one pass/fail line each.
* ``estimate``: run the set-membership estimator over a recorded
  (incentives, choice) history CSV.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__, estimator
from .agents import AgentMode, construct_rent, rent_gain
from .config import ExperimentConfig, load_config, parse_seed_spec
from .exceptions import ConfigError, DomainError, InconsistentHistory, NoRentError
from .harness import aggregate, run_replications
from .policy import oracle_incentives
from .reporting import write_manifest, write_runs_csv, write_summary_json, summary_table
from .worked_examples import run_checks


@click.group()
@click.version_option(version=__version__)
def main() -> None:
    """Simulators for repeated principal-agent games with hidden agent rewards."""


@main.command("run")
@click.option("--preset", type=str, default=None, help="Built-in instance (table1_n5, table1_n10).")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON experiment config; flags override its fields.")
@click.option("--agent", type=click.Choice(["truthful", "strategic"]), default=None)
@click.option("--T", "horizon", type=int, default=None, help="Horizon length.")
@click.option("--seeds", type=str, default=None, help="Seed list: '1..5' or '1,2,7'.")
@click.option("--m", "m_param", type=int, default=None, help="Exploration schedule parameter (>= 4).")
@click.option("--alpha", type=float, default=None, help="Confidence-width scale (> 0).")
@click.option("--varsigma", type=float, default=None, help="Oracle tie-breaking margin.")
@click.option("--setting-id", type=str, default=None)
@click.option("--workers", type=int, default=None, help="Parallel replications (default 1).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Output directory for CSV/manifest/summary.")
def run_cmd(preset, config_path, agent, horizon, seeds, m_param, alpha, varsigma,
            setting_id, workers, out_dir) -> None:
    """Run a replication experiment and write its artifacts."""
    overrides: dict = {
        "preset": preset,
        "agent": agent,
        "T": horizon,
        "seeds": parse_seed_spec(seeds) if seeds is not None else None,
        "m": m_param,
        "alpha": alpha,
        "varsigma": varsigma,
        "setting_id": setting_id,
        "workers": workers,
        "out_dir": out_dir,
    }
    try:
        config = load_config(config_path, overrides)
    except ConfigError as exc:
        raise click.ClickException(str(exc)) from exc
    _execute(config)


def _execute(config: ExperimentConfig) -> None:
    results = run_replications(
        config.instance,
        config.agent,
        T=config.T,
        seeds=config.seeds,
        m=config.m,
        alpha=config.alpha,
        checkpoints=config.checkpoints,
        keep_records=config.keep_records,
        workers=config.workers,
    )
    summary = aggregate(results)
    gain = None
    if config.agent == AgentMode.STRATEGIC.value:
        try:
            gain = rent_gain(config.instance, construct_rent(config.instance))
        except NoRentError:
            gain = 0.0
    click.echo(summary_table(config.setting_id, summary, rent_gain=gain))

    if config.out_dir is not None:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = write_runs_csv(out / f"{config.setting_id}.csv", config.setting_id, results)
        oracle = oracle_incentives(config.instance)
        manifest = {
            "setting_id": config.setting_id,
            "config": config.to_dict(),
            "oracle": {
                "target_arm": oracle.j_star,
                "incentives": list(oracle.pi),
                "value": oracle.value,
            },
            "rent_gain": gain,
            "package_version": __version__,
            "csv": csv_path.name,
        }
        write_manifest(out / f"{config.setting_id}.manifest.json", manifest)
        write_summary_json(out / f"{config.setting_id}.summary.json", config.setting_id, summary)
        click.echo(f"artifacts written to {out}")


@main.command("verify-examples")
def verify_examples_cmd() -> None:
    """Replay the worked examples; exit nonzero on any mismatch."""
    checks = run_checks()
    failed = 0
    for check in checks:
        status = "PASS" if check.ok else "FAIL"
        if not check.ok:
            failed += 1
            click.echo(f"{status}  {check.name}: got {check.got!r}, want {check.want!r}")
        else:
            click.echo(f"{status}  {check.name}")
    click.echo(f"{len(checks) - failed}/{len(checks)} checks passed")
    if failed:
        sys.exit(1)


@main.command("estimate")
@click.option("--replay", "replay_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="History CSV with columns pi_1..pi_n,chosen (1-based actions).")
@click.option("--r-min", type=float, default=-20.0, show_default=True, help="Reward interval floor.")
@click.option("--r-max", type=float, default=50.0, show_default=True, help="Reward interval ceiling.")
@click.option("--save-polytope", type=click.Path(dir_okay=False), default=None,
              help="Write the polytope checkpoint JSON here.")
def estimate_cmd(replay_path, r_min, r_max, save_polytope) -> None:
    """Run the estimator over a recorded history and print the bounds."""
    rows = Path(replay_path).read_text().strip().splitlines()
    if not rows:
        raise click.ClickException("replay file is empty")
    header = [h.strip() for h in rows[0].split(",")]
    n = sum(1 for h in header if h.startswith("pi_"))
    if n < 2 or "chosen" not in header:
        raise click.ClickException("replay header must be pi_1,...,pi_n,chosen")
    pi_cols = [header.index(f"pi_{k}") for k in range(1, n + 1)]
    chosen_col = header.index("chosen")
    bound = r_max - r_min
    polytope = estimator.ConstraintPolytope.empty(n, -bound, bound)
    try:
        for line_no, line in enumerate(rows[1:], start=2):
            parts = [p.strip() for p in line.split(",")]
            pi = np.array([float(parts[c]) for c in pi_cols])
            chosen = int(parts[chosen_col])
            polytope = estimator.observe(polytope, pi, chosen)
        bounds = estimator.solve(polytope)
    except (DomainError, ValueError, IndexError) as exc:
        raise click.ClickException(f"bad replay data: {exc}") from exc
    except InconsistentHistory as exc:
        click.echo(f"inconsistent history: {exc}", err=True)
        sys.exit(2)
    doc = {
        "n": n,
        "obs_count": polytope.obs_count,
        "lower": list(bounds.lower),
        "upper": list(bounds.upper),
        "point_estimate": list(estimator.point_estimate(bounds)),
        "diameter": estimator.diameter(bounds),
    }
    click.echo(json.dumps(doc, indent=2))
    if save_polytope is not None:
        Path(save_polytope).write_text(estimator.polytope_to_json(polytope) + "\n")
        click.echo(f"polytope checkpoint written to {save_polytope}", err=True)


if __name__ == "__main__":
    main()
