"""Figure rendering for sweep outputs.

Figures are written next to the CSV so a sweep leaves a self-contained
result directory behind.
"""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bench import AVERAGE_LABEL

__all__ = ["render_rate_distortion", "render_monotonicity", "figure_path_for"]


def figure_path_for(csv_path: str, suffix: str = "") -> str:
    base, _ = os.path.splitext(csv_path)
    return f"{base}{suffix}.png"


def _curve_rows(rows):
    """Average rows if present, else everything; grouped by (schema, variant)."""
    averages = [r for r in rows if r["record"] == AVERAGE_LABEL]
    usable = averages or rows
    groups: dict[tuple, list] = {}
    for r in usable:
        if r["cr"] is None or r["prd"] is None:
            continue
        groups.setdefault((r["schema"], r["variant"]), []).append(r)
    return groups


def render_rate_distortion(rows, out_path: str, title: str = "Rate-distortion") -> str:
    """CR versus PRD, one curve per codec/variant; returns the figure path."""
    groups = _curve_rows(rows)
    fig, ax = plt.subplots(figsize=(7, 5))
    for (schema, variant), group in sorted(groups.items()):
        group = sorted(group, key=lambda r: r["prd"])
        label = f"{schema} {variant}".strip()
        ax.plot([r["prd"] for r in group], [r["cr"] for r in group],
                marker="o", markersize=3.5, label=label)
    ax.set_xlabel("PRD (%)")
    ax.set_ylabel("compression ratio")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if groups:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path


def render_monotonicity(results, out_path: str) -> str:
    """Bar chart of violation fractions per probe result."""
    fig, ax = plt.subplots(figsize=(6, 4))
    labels = [f"{r['record']}/{r['distance']}" for r in results]
    fracs = [r["violation_fraction"] for r in results]
    ax.bar(range(len(results)), fracs, color="steelblue")
    ax.axhline(0.10, color="firebrick", linestyle="--", linewidth=1,
               label="10% reference")
    ax.set_xticks(range(len(results)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("fraction of decreasing steps")
    ax.set_title("Distance growth monotonicity probe")
    ax.set_ylim(0, max(0.12, max(fracs, default=0.0) * 1.2))
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path
