"""Delimited output and provenance records for experiment runs.

One CSV per experiment with fixed column order
``setting_id,seed,t,phase,chosen,sum_incentives,regret_cum,diameter,l1_to_oracle``
(one line per seed and checkpoint), a manifest JSON with every input needed to
replay the experiment, and a summary JSON mirroring the printed table. Floats
are rendered with 9 significant digits and '.' as the decimal separator.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from .harness import AggregateSummary, RunResult

__all__ = [
    "CSV_COLUMNS",
    "format_float",
    "write_runs_csv",
    "write_manifest",
    "write_summary_json",
    "summary_table",
]

CSV_COLUMNS = (
    "setting_id",
    "seed",
    "t",
    "phase",
    "chosen",
    "sum_incentives",
    "regret_cum",
    "diameter",
    "l1_to_oracle",
)


def format_float(x: float) -> str:
    return f"{x:.9g}"


def write_runs_csv(path: str | Path, setting_id: str, results: Sequence[RunResult]) -> Path:
    """Write one line per (seed, checkpoint); returns the path written."""
    path = Path(path)
    lines = [",".join(CSV_COLUMNS)]
    for result in results:
        for row in result.rows:
            lines.append(
                ",".join(
                    (
                        setting_id,
                        str(result.seed),
                        str(row.t),
                        row.phase.value,
                        str(row.chosen),
                        format_float(row.sum_incentives),
                        format_float(row.regret_cum),
                        format_float(row.diameter),
                        format_float(row.l1_to_oracle),
                    )
                )
            )
    path.write_text("\n".join(lines) + "\n")
    return path


def write_manifest(path: str | Path, payload: dict) -> Path:
    """Write the provenance manifest; adds a creation timestamp."""
    path = Path(path)
    doc = dict(payload)
    doc["created_at"] = datetime.now(timezone.utc).isoformat()
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def write_summary_json(path: str | Path, setting_id: str, summary: AggregateSummary, extra: dict | None = None) -> Path:
    path = Path(path)
    doc = {
        "setting_id": setting_id,
        "checkpoints": list(summary.checkpoints),
        "mean_regret": list(summary.mean_regret),
        "sd_regret": list(summary.sd_regret),
        "n_runs": summary.n_runs,
        "seeds": list(summary.seeds),
        "l1_mean": summary.l1_mean,
        "l1_median": summary.l1_median,
        "sd_convention": "population",
    }
    if extra:
        doc.update(extra)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def summary_table(setting_id: str, summary: AggregateSummary, rent_gain: float | None = None) -> str:
    """Human-readable per-checkpoint table printed after a run."""
    lines = [
        f"setting {setting_id}: {summary.n_runs} seed(s) {list(summary.seeds)}",
        f"{'t':>10}  {'mean regret':>14}  {'sd':>12}",
    ]
    for t, mean, sd in zip(summary.checkpoints, summary.mean_regret, summary.sd_regret):
        lines.append(f"{t:>10}  {format_float(mean):>14}  {format_float(sd):>12}")
    lines.append(
        f"final l1 to oracle: mean={format_float(summary.l1_mean)} "
        f"median={format_float(summary.l1_median)}"
    )
    if rent_gain is not None:
        lines.append(f"strategic rent gain per round: {format_float(rent_gain)}")
    return "\n".join(lines)
