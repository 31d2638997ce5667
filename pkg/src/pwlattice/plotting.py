"""Static figures for run artifacts (matplotlib, Agg backend)."""
from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .experiment import RunArtifacts  # noqa: E402

__all__ = ["render_figures"]


def _convergence(table, path: Path) -> None:
    it = [r[0] for r in table.rows]
    res = [r[1] for r in table.rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogy(it, np.maximum(res, 1e-300), marker="o")
    ax.set_xlabel("iteration k")
    ax.set_ylabel(r"$\|\varphi_k\|$")
    ax.set_title("Neumann-series residuals")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _error_vs_delta(table, path: Path) -> None:
    cols = table.columns
    d = [r[cols.index("delta")] for r in table.rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(d, [r[cols.index("bound_ratio")] for r in table.rows], "k--", label="bound")
    ax.plot(d, [r[cols.index("measured_ratio")] for r in table.rows], "o-", label="measured")
    ax.set_xlabel(r"$\delta$")
    ax.set_ylabel("per-step ratio")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _density(table, report: dict, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot([r[0] for r in table.rows], [r[1] for r in table.rows], "o-", label="min ball ratio")
    if report:
        ax.axhline(report["nominal"], color="k", ls="--", label=r"$1/\delta_e+1/\delta_o$")
        ax.axhline(report["necessary_threshold"], color="r", ls=":", label=r"$2\alpha/\pi$")
    ax.set_xlabel("r")
    ax.set_ylabel("counting ratio")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _heatmap(grid, path: Path) -> None:
    a = np.abs(grid.values)
    floor = a.max() * 1e-16 if a.max() > 0 else 1.0
    m_min, m_max, n_min, n_max = grid.window
    fig, ax = plt.subplots(figsize=(6, 3))
    im = ax.imshow(np.log10(np.maximum(a, floor)).T, origin="lower", aspect="auto",
                   extent=(m_min - 0.5, m_max + 0.5, n_min - 0.5, n_max + 0.5), cmap="viridis")
    fig.colorbar(im, ax=ax, label=r"$\log_{10}|F(m,n)|$")
    ax.set_xlabel("m")
    ax.set_ylabel("n")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_figures(art: RunArtifacts, out_dir) -> list[Path]:
    """Write a PNG for every table/grid that has a figure; returns the paths."""
    out = Path(out_dir)
    written = []
    if "convergence" in art.tables:
        written.append(out / "convergence.png")
        _convergence(art.tables["convergence"], written[-1])
    if "error_vs_delta" in art.tables:
        written.append(out / "error_vs_delta.png")
        _error_vs_delta(art.tables["error_vs_delta"], written[-1])
    if "density" in art.tables:
        written.append(out / "density.png")
        _density(art.tables["density"], art.reports.get("density"), written[-1])
    if art.grid is not None and math.prod(art.grid.values.shape) > 1:
        written.append(out / "heatmap.png")
        _heatmap(art.grid, written[-1])
    return written
