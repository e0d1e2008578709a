"""Figures for comparison runs (rendered off-screen)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .flow import METRICS, Comparison  # noqa: E402

TITLES = {
    "area_ge": "Area (GE)",
    "logic_levels": "Logic levels",
    "aig_nodes": "AIG nodes",
    "runtime_s": "Runtime (s)",
}


def plot_comparison(cmp: Comparison, path) -> None:
    """One panel per metric: each design's value relative to the first column."""
    fig, axes = plt.subplots(2, 2, figsize=(11, 7))
    groups = cmp.designs + ["total"]
    ncol = len(cmp.labels)
    width = 0.8 / ncol
    for ax, metric in zip(axes.flat, METRICS):
        rows = [vals for _, vals in cmp_table_all(cmp, metric)]
        for c, label in enumerate(cmp.labels):
            ratios = [(r[c] / r[0]) if r[0] else 1.0 for r in rows]
            xs = [g + (c - (ncol - 1) / 2) * width for g in range(len(groups))]
            ax.bar(xs, ratios, width, label=label)
        ax.axhline(1.0, color="black", linewidth=0.6)
        ax.set_xticks(range(len(groups)))
        ax.set_xticklabels(groups, rotation=20, fontsize=8)
        ax.set_title(f"{TITLES[metric]}, relative to {cmp.labels[0]}", fontsize=10)
        if metric == "runtime_s":
            ax.set_yscale("log")
    handles, labels = axes.flat[0].get_legend_handles_labels()
    fig.legend(handles, labels, loc="upper center", ncol=ncol, fontsize=9)
    fig.tight_layout(rect=(0, 0, 1, 0.95))
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmp_table_all(cmp: Comparison, metric: str):
    """(group, per-column values) for every design, then the total."""
    for i, name in enumerate(cmp.designs):
        yield name, dict(cmp.table(i))[metric]
    yield "total", dict(cmp.table(None))[metric]


def plot_passes(report, path) -> None:
    """Node count and depth after each pass of one flow run."""
    if not report.per_pass:
        return
    names = ["input"] + [p["name"] for p in report.per_pass]
    nodes = [report.per_pass[0]["nodes_before"]] + [p["nodes_after"] for p in report.per_pass]
    depth = [report.per_pass[0]["depth_before"]] + [p["depth_after"] for p in report.per_pass]
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(range(len(names)), nodes, marker="o", label="AIG nodes")
    ax.set_ylabel("AIG nodes")
    ax2 = ax.twinx()
    ax2.plot(range(len(names)), depth, marker="s", color="tab:red", label="AIG depth")
    ax2.set_ylabel("AIG depth")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax.set_title(f"{report.design}: {report.script} script")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
