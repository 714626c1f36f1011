"""
condlab Visual Output.
Simple polyline renderings of result tables as SVG files (display only).
"""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from .compat import require_matplotlib
from .table import ResultTable
from ..exceptions import ParameterError


def plot_table(
    table: ResultTable,
    x: str,
    ys: Sequence[str],
    path: str | Path,
    title: str | None = None,
    logx: bool = False,
) -> Path:
    """
    Draws each column of ``ys`` against column ``x`` and saves the figure as SVG.

    The SVG is written without a timestamp and with a fixed hash salt, so identical
    tables produce identical files.

    Examples:
        >>> plot_table(table, "x", ["mass", "limit"], "wave.svg")  # doctest: +SKIP
    """
    require_matplotlib()
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    for name in (x, *ys):
        if name not in table.columns:
            raise ParameterError("column", name, f"table has columns {table.names}")

    out = Path(path).with_suffix(".svg")
    with matplotlib.rc_context({"svg.hashsalt": "condlab", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        try:
            xv = np.asarray(table[x], dtype=float)
            for name in ys:
                ax.plot(xv, np.asarray(table[name], dtype=float), marker="o", markersize=3, label=name)
            ax.set_xlabel(x)
            if logx:
                ax.set_xscale("log")
            if title:
                ax.set_title(title)
            ax.legend()
            fig.tight_layout()
            out.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(out, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return out
