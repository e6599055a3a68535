"""Figure rendering for score reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .scoring import LEXREL, ScoreReport


def write_score_figure(report: ScoreReport, path: str) -> None:
    """Bar chart of per-problem scores with the corpus aggregate, written
    alongside the delimited report output."""
    ids = sorted(report.per_problem)
    if report.fmt == LEXREL:
        values = [report.per_problem[i].f1 for i in ids]
        ylabel = "F1"
        agg = report.aggregates()["macroF1"]
        agg_label = f"macro F1 = {agg:.3f}"
    else:
        values = [1.0 if report.per_problem[i] else 0.0 for i in ids]
        ylabel = "exact match"
        agg = report.aggregates()["exactMatch"]
        agg_label = f"exact match = {agg:.3f}"

    width = max(6.0, 0.45 * len(ids) + 2.0)
    fig, ax = plt.subplots(figsize=(width, 4.0))
    ax.bar(range(len(ids)), values, color="#4878d0")
    ax.axhline(agg, color="#d65f5f", linestyle="--", linewidth=1.2, label=agg_label)
    ax.set_xticks(range(len(ids)))
    ax.set_xticklabels(ids, rotation=45, ha="right", fontsize=8)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel(ylabel)
    ax.set_title(f"explanation scores ({report.fmt})")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
