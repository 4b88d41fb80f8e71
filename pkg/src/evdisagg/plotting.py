"""Static SVG rendering of power traces as stacked panels."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .model import PowerSeries

# stable ids inside the SVG output, so repeated runs produce stable files
matplotlib.rcParams["svg.hashsalt"] = "evdisagg"


def plot_traces(panels: list[tuple[str, PowerSeries]], path) -> None:
    """Draw one panel per labelled series and write an SVG file."""
    if not panels:
        raise ValueError("nothing to plot")
    fig, axes = plt.subplots(len(panels), 1, sharex=True,
                             figsize=(10, 2.2 * len(panels)), squeeze=False)
    for ax, (label, series) in zip(axes[:, 0], panels):
        minutes = range(len(series))
        ax.step(minutes, series.values, where="post", linewidth=0.8)
        ax.set_ylabel("kW")
        ax.set_title(label, fontsize=9, loc="left")
        ax.grid(alpha=0.3, linestyle=":")
    axes[-1, 0].set_xlabel(f"minutes since {panels[0][1].start_time.isoformat(sep=' ')}")
    fig.tight_layout()
    fig.savefig(Path(path), format="svg")
    plt.close(fig)
