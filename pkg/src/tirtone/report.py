"""Report emission: JSON and CSV serialization plus rendered figures.

JSON is the canonical form; CSV mirrors it for spreadsheet use. Figures
are rendered with the Agg backend so runs work headless.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .imgio import LdrFrame  # noqa: E402
from .metrics import MetricsReport  # noqa: E402

METRIC_ORDER = (
    "tmqi",
    "underexposure_pct",
    "overexposure_pct",
    "global_contrast_loss",
    "local_contrast_loss",
    "noise_visibility_db",
    "global_temporal_incoherence",
    "local_temporal_incoherence",
)

_FIG_DPI = 120


def save_report_json(report: MetricsReport, path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    return p


def save_report_csv(report: MetricsReport, path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    d = report.to_dict()
    fields = [f for f in METRIC_ORDER if f in d]
    with p.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        writer.writerow([repr(d[f]) for f in fields])
    return p


def save_compare_json(table: dict[str, MetricsReport], path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps({k: v.to_dict() for k, v in table.items()}, indent=2) + "\n")
    return p


def save_compare_csv(table: dict[str, MetricsReport], path) -> Path:
    """Metric rows by method columns, empty cell where not applicable."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    methods = list(table)
    dicts = {m: table[m].to_dict() for m in methods}
    with p.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric"] + methods)
        for metric in METRIC_ORDER:
            if not any(metric in dicts[m] for m in methods):
                continue
            row = [metric]
            for m in methods:
                row.append(repr(dicts[m][metric]) if metric in dicts[m] else "")
            writer.writerow(row)
    return p


def _frame_means(seq: Sequence[LdrFrame]) -> list[float]:
    return [float(f.data.mean()) for f in seq]


def fig_mean_series(series: dict[str, Sequence[LdrFrame]], path,
                    title: str = "Frame mean intensity") -> Path:
    """Plot the per-frame mean intensity of one or more runs over time."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(8, 4))
    for name, seq in series.items():
        means = _frame_means(seq)
        ax.plot(range(len(means)), means, marker=".", label=name)
    ax.set_xlabel("frame")
    ax.set_ylabel("mean intensity (8-bit)")
    ax.set_ylim(0, 255)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if len(series) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(p, dpi=_FIG_DPI)
    plt.close(fig)
    return p


def fig_compare(table: dict[str, MetricsReport], path) -> Path:
    """Bar panel per metric, one bar per method."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    methods = list(table)
    dicts = {m: table[m].to_dict() for m in methods}
    present = [f for f in METRIC_ORDER if any(f in dicts[m] for m in methods)]
    cols = 4
    rows = max(1, (len(present) + cols - 1) // cols)
    fig, axes = plt.subplots(rows, cols, figsize=(3.2 * cols, 2.6 * rows))
    axes = list(axes.flat) if hasattr(axes, "flat") else [axes]
    for ax, metric in zip(axes, present):
        names = [m for m in methods if metric in dicts[m]]
        values = [dicts[m][metric] for m in names]
        ax.bar(range(len(names)), values, color="#40658c")
        ax.set_xticks(range(len(names)))
        ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
        ax.set_title(metric, fontsize=9)
        ax.grid(True, axis="y", alpha=0.3)
    for ax in axes[len(present):]:
        ax.axis("off")
    fig.tight_layout()
    fig.savefig(p, dpi=_FIG_DPI)
    plt.close(fig)
    return p
