"""Report writers: aligned text tables, JSON, CSV, and PNG figures.

Accuracies are raw fractions in JSON/CSV and percent (2 decimals) in the
text table. Every JSON writer re-derives mean/std from the per-run list
before writing, so an emitted report can never be self-inconsistent.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .harness import GridResult, MetricsReport


def _check_consistent(report: MetricsReport) -> None:
    accs = np.array(report.accuracies)
    if not math.isclose(report.mean, float(accs.mean()), abs_tol=1e-12):
        raise AssertionError("report mean does not match its per-run accuracies")
    if not math.isclose(report.std, float(accs.std()), abs_tol=1e-12):
        raise AssertionError("report std does not match its per-run accuracies")
    if not all(0.0 <= a <= 1.0 for a in accs):
        raise AssertionError("per-run accuracy outside [0, 1]")


def write_report_json(path, report: MetricsReport) -> None:
    _check_consistent(report)
    Path(path).write_text(json.dumps(report.to_json_dict(), indent=2) + "\n", encoding="utf-8")


def write_grid_json(path, grid: GridResult) -> None:
    for cell in grid.cells:
        _check_consistent(cell.report)
    Path(path).write_text(json.dumps(grid.to_json_dict(), indent=2) + "\n", encoding="utf-8")


def render_runs_text(report: MetricsReport) -> str:
    lines = [f"run {i:>2}: accuracy {acc:7.4f}" for i, acc in enumerate(report.accuracies)]
    lines.append(f"mean {report.mean * 100:.2f}%  std {report.std * 100:.2f}%")
    return "\n".join(lines)


def render_grid_table(grid: GridResult, encoders=("tcn", "qtc"), cells=None) -> str:
    """Aligned table, one row per encoder, one column per (n,k) cell, percent."""
    if cells is None:
        cells = sorted({(c.n, c.k) for c in grid.cells})
    header = ["(n,k)"] + [f"({n},{k})" for n, k in cells]
    rows = [header]
    for encoder in encoders:
        row = [encoder.upper()]
        for n, k in cells:
            row.append(f"{grid.cell(encoder, n, k).report.mean * 100:.2f}")
        rows.append(row)
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows)


def write_grid_csv(path, grid: GridResult) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["encoder", "n", "k", "mean_accuracy", "std_accuracy"])
        for cell in grid.cells:
            writer.writerow([cell.encoder, cell.n, cell.k, repr(cell.report.mean), repr(cell.report.std)])


def write_runs_csv(path, report: MetricsReport) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run", "accuracy", "bank_seed"])
        for i, run in enumerate(report.runs):
            writer.writerow([i, repr(run.accuracy), run.bank_seed])


def plot_runs(path, report: MetricsReport) -> None:
    """Per-run accuracies with the mean as a horizontal line."""
    accs = np.array(report.accuracies) * 100
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar(np.arange(len(accs)), accs, color="#4878cf")
    ax.axhline(report.mean * 100, color="#d65f5f", linestyle="--",
               label=f"mean {report.mean * 100:.2f}%")
    ax.set_xlabel("run")
    ax.set_ylabel("accuracy (%)")
    cfg = report.config
    ax.set_title(f"{cfg.get('encoder', '?')} (n={cfg.get('n')}, k={cfg.get('k')})")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_grid(path, grid: GridResult, encoders=("tcn", "qtc"), cells=None) -> None:
    """Grouped bars (mean +- std) per (n,k) cell, one group shade per encoder."""
    if cells is None:
        cells = sorted({(c.n, c.k) for c in grid.cells})
    x = np.arange(len(cells))
    width = 0.8 / len(encoders)
    fig, ax = plt.subplots(figsize=(6.5, 4))
    colors = {"tcn": "#8c8c8c", "qtc": "#4878cf"}
    for i, encoder in enumerate(encoders):
        means = [grid.cell(encoder, n, k).report.mean * 100 for n, k in cells]
        stds = [grid.cell(encoder, n, k).report.std * 100 for n, k in cells]
        ax.bar(x + (i - (len(encoders) - 1) / 2) * width, means, width,
               yerr=stds, capsize=3, label=encoder.upper(),
               color=colors.get(encoder))
    ax.set_xticks(x)
    ax.set_xticklabels([f"({n},{k})" for n, k in cells])
    ax.set_xlabel("(filters n, kernel k)")
    ax.set_ylabel("accuracy (%)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def sibling(path, suffix: str) -> Path:
    """report.json -> report.png / report.csv etc."""
    p = Path(path)
    return p.with_suffix(suffix)
