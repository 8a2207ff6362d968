"""Sweep configuration, execution and output."""
from .config import Caps, ExperimentConfig
from .plot import emit_plot_data, plot_csv, plot_rows, plot_svg, thresholds
from .sweep import (
    CSV_COLUMNS,
    TrialRecord,
    records_from_csv,
    records_to_csv,
    run_sweep,
    run_trial,
    summarize,
)

__all__ = [
    "Caps", "ExperimentConfig", "emit_plot_data", "plot_csv", "plot_rows", "plot_svg",
    "thresholds", "CSV_COLUMNS", "TrialRecord", "records_from_csv", "records_to_csv",
    "run_sweep", "run_trial", "summarize",
]
