"""Matplotlib rendering for the report paths.

Figures are written as SVG next to the delimited output. Rendering is
deterministic: a fixed hash salt keeps element ids stable and the SVG
date metadata is suppressed, so reruns produce byte-identical files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .covering import BallClass, ClassifiedCovering
from .experiments import SweepConfig, SweepRow
from .geometry import AxisBox, Segment, SinglePoint, ZeroSet

__all__ = ["render_sweep_figure", "render_heatmap_figure", "render_detection_figure"]

matplotlib.rcParams["svg.hashsalt"] = "zerocover"

_CLASS_STYLE = {
    BallClass.EPS_INSIDE: ("eps-inside", "tab:red"),
    BallClass.EPS_NEIGHBORING: ("eps-neighboring", "tab:orange"),
    BallClass.EPS_OUTSIDE: ("eps-outside", "tab:green"),
}


def _save(fig, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def render_sweep_figure(cfg: SweepConfig, rows: list[SweepRow], path) -> None:
    """Small multiples of mean filled fraction vs M_r.

    Panel grid: one row per sample size, one column per M_eps; colored
    lines for the three ball classes.
    """
    ns = sorted({row.n for row in rows})
    m_eps_values = sorted({row.m_eps for row in rows})
    fig, axes = plt.subplots(
        len(ns), len(m_eps_values),
        figsize=(3.2 * len(m_eps_values), 2.6 * len(ns)),
        squeeze=False, sharey=True,
    )
    for i, n in enumerate(ns):
        for j, m_eps in enumerate(m_eps_values):
            ax = axes[i][j]
            panel = [r for r in rows if r.n == n and r.m_eps == m_eps]
            m_rs = sorted({r.m_r for r in panel})
            for cls, (label, color) in _CLASS_STYLE.items():
                means = []
                for m_r in m_rs:
                    fr = [r.occupancy.filled_fractions[cls] for r in panel if r.m_r == m_r]
                    means.append(float(np.mean(fr)) if fr else np.nan)
                ax.plot(m_rs, means, marker="o", ms=3, color=color, label=label)
            ax.set_ylim(-0.05, 1.05)
            if i == len(ns) - 1:
                ax.set_xlabel("$M_r$")
            if j == 0:
                ax.set_ylabel(f"n={n}\nfilled fraction")
            if i == 0:
                ax.set_title(f"$M_\\epsilon$={m_eps:g}", fontsize=10)
    axes[0][0].legend(fontsize=7, loc="center right")
    fig.suptitle(f"{cfg.model_id}: filled fraction by ball class", fontsize=11)
    fig.tight_layout(rect=(0, 0, 1, 0.96))
    _save(fig, path)


def render_heatmap_figure(occupancies: dict[str, np.ndarray], path) -> None:
    """Fig-style binary tick strips: one row per model, a tick per occupied bin."""
    fig, axes = plt.subplots(len(occupancies), 1, figsize=(7, 0.9 * len(occupancies)), squeeze=False)
    for ax, (label, bits) in zip(axes[:, 0], occupancies.items()):
        bins = len(bits)
        centers = -1.0 + (np.arange(bins) + 0.5) * 2.0 / bins
        ax.vlines(centers[bits], 0.0, 1.0, color="black", lw=max(0.4, 140.0 / bins * 0.35))
        ax.set_xlim(-1.0, 1.0)
        ax.set_yticks([])
        ax.set_ylabel(label, rotation=0, ha="right", va="center", fontsize=9)
    axes[-1][0].set_xlabel("x")
    fig.tight_layout()
    _save(fig, path)


def _draw_zero_set(ax, zero_set: ZeroSet | None) -> None:
    if zero_set is None:
        return
    for comp in zero_set.components:
        if isinstance(comp, Segment):
            ax.plot([comp.start[0], comp.end[0]], [comp.start[1], comp.end[1]],
                    color="black", lw=2.0, zorder=5)
        elif isinstance(comp, SinglePoint):
            ax.plot([comp.point[0]], [comp.point[1]], "k*", ms=10, zorder=5)
        elif isinstance(comp, AxisBox):
            lo, hi = comp.lower, comp.upper
            ax.fill([lo[0], hi[0], hi[0], lo[0]], [lo[1], lo[1], hi[1], hi[1]],
                    color="black", alpha=0.6, zorder=5)


def render_detection_figure(classified: ClassifiedCovering, points: np.ndarray,
                            empty_centers: np.ndarray, zero_set: ZeroSet | None, path) -> None:
    """Single-trial view (2-d only): sample, classified centers, empty-ball estimate."""
    if classified.covering.dim != 2:
        raise ValueError("detection figures are rendered for 2-d coverings only")
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4.4), sharex=True, sharey=True)
    centers = classified.covering.centers
    ax1.scatter(points[:, 0], points[:, 1], s=2, color="0.6", alpha=0.4, linewidths=0)
    for cls, (label, color) in _CLASS_STYLE.items():
        sel = classified.classes == cls
        ax1.scatter(centers[sel, 0], centers[sel, 1], s=6, color=color, label=label, linewidths=0)
    _draw_zero_set(ax1, zero_set)
    ax1.set_title("sample and classified centers", fontsize=10)
    ax1.legend(fontsize=7, markerscale=2)

    ax2.scatter(centers[:, 0], centers[:, 1], s=4, color="0.85", linewidths=0)
    if len(empty_centers):
        ax2.scatter(empty_centers[:, 0], empty_centers[:, 1], s=10, color="tab:blue",
                    label="empty balls", linewidths=0)
        ax2.legend(fontsize=7, markerscale=2)
    _draw_zero_set(ax2, zero_set)
    ax2.set_title("empty-ball estimate", fontsize=10)
    for ax in (ax1, ax2):
        ax.set_aspect("equal")
    fig.tight_layout()
    _save(fig, path)
