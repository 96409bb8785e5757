"""Figure generation for incentive-bandits experiment CSVs."""

__version__ = "0.1.0"

from .figures import (
    FigureSpec,
    MissingColumnError,
    l1_stats,
    load_runs,
    plot_l1,
    plot_regret,
    regret_stats,
)

__all__ = [
    "__version__",
    "FigureSpec",
    "MissingColumnError",
    "l1_stats",
    "load_runs",
    "plot_l1",
    "plot_regret",
    "regret_stats",
]
