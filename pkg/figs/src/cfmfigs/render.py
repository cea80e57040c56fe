"""Figure construction from validated CSV columns.

Everything here is deterministic for identical input: fixed figure sizes,
colour scale bounds taken from the data, a fixed SVG hash salt, and no
timestamp metadata in the output files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "cfm-figs"

import matplotlib.pyplot as plt
import numpy as np

POSITIVE_NOTE = "positive = fee income below hedging cost"


def save_figure(fig, out_path: str | Path, png: bool = False) -> None:
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fmt = "png" if png else "svg"
    metadata = None if png else {"Date": None}
    fig.savefig(out_path, format=fmt, metadata=metadata)
    plt.close(fig)


# ---------------------------------------------------------------------------
# path figures
# ---------------------------------------------------------------------------

def price_overlay_figure(steps: dict[str, list]):
    """Reference price and pool price on a single axis over time."""
    fig, ax = plt.subplots(figsize=(9.0, 4.5))
    ax.plot(steps["t"], steps["S"], label="reference price", linewidth=1.0)
    ax.plot(steps["t"], steps["pool_price"], label="pool price", linewidth=1.0)
    ax.set_xlabel("t")
    ax.set_ylabel("price of asset 2 (numeraire)")
    ax.legend(loc="best")
    ax.set_title("Reference vs pool price")
    fig.tight_layout()
    return fig


def fee_rate_pair_figure(steps: dict[str, list]):
    """Collected fee income and its no-arbitrage bound, side by side."""
    fig, (left, right) = plt.subplots(1, 2, figsize=(11.0, 4.0), sharex=True)
    left.plot(steps["t"], steps["fee_income"], linewidth=0.8)
    left.set_title("CFM fee income per step")
    right.plot(steps["t"], steps["hat_f"], linewidth=0.8, color="tab:orange")
    right.set_title("no-arbitrage fee bound per step")
    for ax in (left, right):
        ax.set_xlabel("t")
        ax.set_ylabel("numeraire per step")
    fig.tight_layout()
    return fig


# ---------------------------------------------------------------------------
# sweep figures
# ---------------------------------------------------------------------------

def pivot_cells(sweep: dict[str, list], lam: float, field: str):
    """(gammas, sigmas, grid) for one lambda; grid[i_sigma][i_gamma], NaN = absent."""
    rows = [i for i, value in enumerate(sweep["lambda"]) if value == lam]
    gammas = sorted({sweep["gamma"][i] for i in rows})
    sigmas = sorted({sweep["sigma"][i] for i in rows})
    grid = np.full((len(sigmas), len(gammas)), np.nan)
    for i in rows:
        grid[sigmas.index(sweep["sigma"][i]), gammas.index(sweep["gamma"][i])] = \
            sweep[field][i]
    return gammas, sigmas, grid


def _draw_heatmap(ax, gammas, sigmas, grid, vmin, vmax):
    image = ax.imshow(grid, origin="lower", aspect="auto", vmin=vmin, vmax=vmax,
                      cmap="viridis")
    ax.set_xticks(range(len(gammas)), [f"{g:g}" for g in gammas], rotation=45)
    ax.set_yticks(range(len(sigmas)), [f"{s:g}" for s in sigmas])
    ax.set_xlabel("gamma")
    ax.set_ylabel("sigma")
    return image


def _lambda_values(sweep: dict[str, list]) -> list[float]:
    return sorted(set(sweep["lambda"]))


def _color_bounds(sweep: dict[str, list], field: str):
    values = sweep[field]
    if not values:
        return 0.0, 1.0
    lo, hi = min(values), max(values)
    if lo == hi:
        hi = lo + 1.0
    return lo, hi


def _colorbar_label(sweep: dict[str, list], field: str) -> str:
    label = {"mean_diff": "mean(bound - fees)", "std_diff": "std(bound - fees)"}[field]
    if field == "mean_diff" and sweep[field] and min(sweep[field]) > 0.0:
        label += f"  ({POSITIVE_NOTE})"
    return label


def heatmap_figure(sweep: dict[str, list], field: str):
    """One heatmap over (gamma, sigma) per lambda, shared colour scale."""
    lams = _lambda_values(sweep)
    if not lams:
        fig, ax = plt.subplots(figsize=(6.0, 3.0))
        ax.set_axis_off()
        ax.text(0.5, 0.5, "no data", ha="center", va="center")
        return fig
    vmin, vmax = _color_bounds(sweep, field)
    fig, axes = plt.subplots(1, len(lams), figsize=(4.5 * len(lams) + 1.0, 4.0),
                             squeeze=False)
    image = None
    for ax, lam in zip(axes[0], lams):
        gammas, sigmas, grid = pivot_cells(sweep, lam, field)
        image = _draw_heatmap(ax, gammas, sigmas, grid, vmin, vmax)
        ax.set_title(f"lambda = {lam:g}")
    colorbar = fig.colorbar(image, ax=axes[0].tolist())
    colorbar.set_label(_colorbar_label(sweep, field))
    return fig


def multi_lambda_panel_figure(sweep: dict[str, list]):
    """Combined panel: mean row and std row of heatmaps across lambda."""
    lams = _lambda_values(sweep)
    if not lams:
        fig, ax = plt.subplots(figsize=(6.0, 3.0))
        ax.set_axis_off()
        ax.text(0.5, 0.5, "no data", ha="center", va="center")
        return fig
    fig, axes = plt.subplots(2, len(lams), figsize=(4.5 * len(lams) + 1.0, 7.5),
                             squeeze=False)
    for row, field in enumerate(("mean_diff", "std_diff")):
        vmin, vmax = _color_bounds(sweep, field)
        image = None
        for ax, lam in zip(axes[row], lams):
            gammas, sigmas, grid = pivot_cells(sweep, lam, field)
            image = _draw_heatmap(ax, gammas, sigmas, grid, vmin, vmax)
            ax.set_title(f"{field}, lambda = {lam:g}")
        colorbar = fig.colorbar(image, ax=axes[row].tolist())
        colorbar.set_label(_colorbar_label(sweep, field))
    return fig
