"""Figures for benchmark runs.  Rendering only; the numbers come from the CSV rows."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_gaps(index: Sequence[int], gap: Sequence[int], slack: Sequence[int], path: str, title: str = "") -> None:
    """Two stacked panels: work between consecutive outputs, and how early each script was ready."""
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(8, 5))
    top.plot(index, gap, linewidth=0.8, color="tab:blue")
    top.set_ylabel("work between outputs")
    top.set_ylim(bottom=0)
    bottom.plot(index, slack, linewidth=0.8, color="tab:green")
    bottom.axhline(0, color="tab:red", linewidth=0.8, linestyle="--")
    bottom.set_ylabel("slack (work units)")
    bottom.set_xlabel("output index")
    if title:
        top.set_title(title)
    fig.tight_layout()
    # fixed metadata keeps repeated runs byte-identical
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
