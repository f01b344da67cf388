"""CSV data for the bound-versus-correlation-distance plots."""

import numpy as np

from ..bounds import c0, classical_tight_bound, pinsker_bound, quantum_tight_bound
from ..errors import DomainError
from ..io import write_data_csv
from ..units import BITS, check_unit

_RANGES = {"fig1": 1.0, "fig2": 1.5}


def figure_grid(upper, step):
    """``0, step, 2 step, ...`` up to ``upper``, with ``upper`` itself included."""
    n = int(np.floor(upper / step + 1e-9))
    grid = step * np.arange(n + 1)
    if upper - grid[-1] > 1e-9 * max(1.0, upper):
        grid = np.append(grid, upper)
    return np.minimum(grid, upper)


def figure_rows(which, grid_step, unit=BITS):
    """Header and rows for ``fig1`` (classical bounds) or ``fig2`` (adds quantum)."""
    if which not in _RANGES:
        raise DomainError(f"figure must be 'fig1' or 'fig2', got {which!r}")
    if not grid_step > 0:
        raise DomainError("grid step must be positive")
    check_unit(unit)
    grid = figure_grid(_RANGES[which], grid_step)
    rows = []
    for c in grid:
        c = float(c)
        classical = classical_tight_bound(c, unit) if c <= 1.0 else None
        row = [c, pinsker_bound(c, unit), classical]
        if which == "fig2":
            row.append(quantum_tight_bound(c, unit))
        rows.append(row)
    header = ["C", "pinsker", "classical_tight"]
    if which == "fig2":
        header.append("quantum_tight")
    return header, rows


def emit_figure(which, grid_step, path, unit=BITS):
    """Write the figure data to ``path``; fig2 carries a ``# C0=`` comment line."""
    header, rows = figure_rows(which, grid_step, unit)
    comments = [f"C0={c0():.9g}"] if which == "fig2" else []
    write_data_csv(path, header, rows, comments)
    return path
