"""Grouped-bar figure of ABE vs FAABE errors per dataset."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from faabe.evaluation import METRIC_NAMES  # noqa: E402


def plot_summary(summary, out_path, methods=("ABE", "FAABE")):
    """One panel per metric; bars are methods grouped by dataset and similarity kind, on a log axis."""
    groups = list(dict.fromkeys((row.dataset, row.similarity) for row in summary))
    values = {(row.dataset, row.similarity, row.method): row.metrics for row in summary}
    several_kinds = len({kind for _, kind in groups}) > 1
    labels = [f"{d}\n{kind}" if several_kinds else d for d, kind in groups]
    x = np.arange(len(groups))
    width = 0.8 / len(methods)

    fig, axes = plt.subplots(2, 2, figsize=(11, 7))
    for ax, metric in zip(axes.flat, METRIC_NAMES):
        for offset, method in enumerate(methods):
            heights = [
                getattr(values[(d, kind, method)], metric) if (d, kind, method) in values else np.nan
                for d, kind in groups
            ]
            ax.bar(x - 0.4 + width * (offset + 0.5), heights, width, label=method)
        ax.set_title(metric.upper())
        ax.set_xticks(x)
        ax.set_xticklabels(labels, rotation=30, ha="right")
        ax.set_yscale("log")
    axes.flat[0].legend()
    fig.tight_layout()

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=200)
    plt.close(fig)
    return out_path
