"""Score table output: plain text, CSV and a bar chart."""

from __future__ import annotations

import csv
import io
import os

from .stats import ScoreTable


def format_table(table: ScoreTable, scale: float = 100.0) -> str:
    """One row per algorithm: "mean ± radius" per game, then overall mean / lower / upper.

    Scores are multiplied by ``scale`` (percent by default).
    """
    games = table.games
    head = ["algorithm"] + games + ["mean", "lower", "upper"]
    body = []
    for algo in table.algorithms:
        row = [algo]
        for g in games:
            c = table.cell(algo, g)
            row.append("-" if c is None else f"{c.mean * scale:.2f} ± {c.radius * scale:.2f}")
        tot = table.cell(algo, "ALL")
        row += [f"{tot.mean * scale:.2f}", f"{tot.lower * scale:.2f}", f"{tot.upper * scale:.2f}"]
        body.append(row)
    widths = [max(len(str(r[k])) for r in [head] + body) for k in range(len(head))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in [head] + body]
    lines.insert(1, "  ".join("-" * w for w in widths))
    if table.excluded:
        lines.append(f"({len(table.excluded)} scheduled matches without a record were excluded)")
    return "\n".join(lines) + "\n"


def table_csv(table: ScoreTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["algorithm", "game", "n", "mean", "lower", "upper", "radius"])
    for r in table.rows:
        w.writerow([r.algorithm, r.game, r.n, f"{r.mean:.6f}", f"{r.lower:.6f}", f"{r.upper:.6f}", f"{r.radius:.6f}"])
    return buf.getvalue()


def plot_table(table: ScoreTable, path) -> None:
    """Grouped bars of mean binary score per game with 95% CI whiskers."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    games = table.games + ["ALL"]
    algos = table.algorithms
    width = 0.8 / max(len(algos), 1)
    x = np.arange(len(games))
    fig, ax = plt.subplots(figsize=(max(4.0, 1.6 * len(games) + 1), 3.6))
    for k, algo in enumerate(algos):
        means, lo, hi = [], [], []
        for g in games:
            c = table.cell(algo, g)
            means.append(c.mean if c else np.nan)
            lo.append(c.mean - c.lower if c else 0.0)
            hi.append(c.upper - c.mean if c else 0.0)
        ax.bar(x + (k - (len(algos) - 1) / 2) * width, means, width, yerr=[lo, hi], capsize=3, label=algo)
    ax.axhline(0.0, color="black", linewidth=0.6)
    ax.set_xticks(x)
    ax.set_xticklabels(games, rotation=15)
    ax.set_ylim(-1.05, 1.05)
    ax.set_ylabel("mean binary score")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(table: ScoreTable, out_dir, stem: str = "scores") -> dict:
    """Write ``<stem>.txt``, ``<stem>.csv`` and ``<stem>.png``; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {k: os.path.join(out_dir, f"{stem}.{k}") for k in ("txt", "csv", "png")}
    with open(paths["txt"], "w") as fh:
        fh.write(format_table(table))
    with open(paths["csv"], "w") as fh:
        fh.write(table_csv(table))
    if table.rows:
        plot_table(table, paths["png"])
    else:
        paths.pop("png")
    return paths
