"""Samplers, brute-force oracles, property sweeps and figure data."""

from .figures import emit_figure, figure_rows
from .oracles import brute_force_min_mi, search_saturating_model
from .samplers import FAMILIES, sample, sample_states
from .sweeps import KINDS, SweepReport, run_sweep

__all__ = [
    "FAMILIES",
    "KINDS",
    "SweepReport",
    "brute_force_min_mi",
    "emit_figure",
    "figure_rows",
    "run_sweep",
    "sample",
    "sample_states",
    "search_saturating_model",
]
