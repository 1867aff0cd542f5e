"""Matplotlib rendering of the CSV report data (file output only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_heatmap_figure(
    p1: np.ndarray, p2: np.ndarray, log10_speb: np.ndarray, path: str
) -> None:
    """Scatter map of log10 bound over Cartesian source coordinates."""
    fig, ax = plt.subplots(figsize=(6, 5))
    sc = ax.scatter(p1, p2, c=log10_speb, s=4, cmap="turbo", rasterized=True)
    fig.colorbar(sc, ax=ax, label=r"$\log_{10}$ SPEB (m$^2$)")
    ax.set_xlabel("$p_1$ (m)")
    ax.set_ylabel("$p_2$ (m)")
    ax.set_title("Worst-case position error bound over the near-field region")
    ax.set_aspect("equal", adjustable="datalim")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_benchmark_figure(
    rows: list[dict], sweep_var: str, path: str
) -> None:
    """Semilog curves of worst-case bound per design versus the sweep variable."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    designs = []
    for row in rows:
        if row["design"] not in designs:
            designs.append(row["design"])
    for design in designs:
        xs = [r[sweep_var] for r in rows if r["design"] == design and r.get("speb")]
        ys = [r["speb"] for r in rows if r["design"] == design and r.get("speb")]
        if xs:
            ax.semilogy(xs, ys, marker="o", label=design)
    ax.set_xlabel(sweep_var)
    ax.set_ylabel(r"worst-case SPEB (m$^2$)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
