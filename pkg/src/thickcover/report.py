"""Delimited output and figure rendering for the CLI report path.

Figures render through the Agg backend straight to files next to the
CSV/JSON artifacts; nothing here ever opens a window.  PNG metadata is
pinned so repeated runs produce identical bytes.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = [
    "write_csv",
    "save_figure",
    "theta_table_figure",
    "push_sweep_figure",
    "grid_cover_figure",
    "ratio_histogram_figure",
    "census_figure",
    "class_size_figure",
]

_PNG_META = {"Software": "thickcover"}


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def save_figure(fig, path) -> None:
    fig.savefig(Path(path), dpi=150, metadata=_PNG_META,
                bbox_inches="tight")
    plt.close(fig)


def theta_table_figure(eps_values, thetas):
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.plot(eps_values, thetas, "o-", color="tab:blue")
    ax.set_xlabel("side-length scale")
    ax.set_ylabel("sampled minimum angle (rad)")
    ax.set_title("minimum triangle angle, sides in [eps/2, eps]")
    ax.grid(alpha=0.3)
    return fig


def push_sweep_figure(deltas, ks, ball_radius):
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.semilogx(deltas, ks, "o-", color="tab:red")
    ax.axhline(1.0, color="gray", lw=0.8)
    ax.set_xlabel("push distance")
    ax.set_ylabel("sampled maximal dilatation")
    ax.set_title(f"center push in the radius-{ball_radius:g} ball")
    ax.grid(alpha=0.3, which="both")
    return fig


def grid_cover_figure(grid, R):
    """Planar picture of a 2-d lattice cover: cube plus ball squares."""
    if grid.dim != 2:
        raise ValueError("only 2-d grids are drawn")
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.add_patch(plt.Rectangle((-R, -R), 2 * R, 2 * R, fill=False,
                               color="black", lw=1.5))
    rad = grid.ball_radius
    for cx in grid.axis_coordinates():
        for cy in grid.axis_coordinates():
            ax.add_patch(plt.Rectangle((cx - rad, cy - rad), 2 * rad, 2 * rad,
                                       alpha=0.18, color="tab:blue"))
            ax.plot([cx], [cy], "k.", ms=3)
    lim = R + grid.ball_radius + 0.1
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_aspect("equal")
    ax.set_title(f"{grid.count} sup-norm balls over the radius-{R:g} cube")
    return fig


def ratio_histogram_figure(ratios, lower_target):
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.hist(ratios, bins=40, color="tab:green", alpha=0.8)
    ax.axvline(lower_target, color="tab:red", lw=1.2,
               label=f"target {lower_target:g}")
    ax.axvline(1.0, color="gray", lw=0.8)
    ax.set_xlabel("net sup / norm")
    ax.set_ylabel("count")
    ax.set_title("sampling-map pinch across the family")
    ax.legend()
    return fig


def census_figure(degrees, hom, transitive, subgroup):
    fig, ax = plt.subplots(figsize=(5, 3.4))
    for label, ys in (("hom", hom), ("transitive", transitive),
                      ("subgroup", subgroup)):
        ax.plot(degrees, [math.log10(max(y, 1)) for y in ys], "o-",
                label=label)
    ax.set_xlabel("degree")
    ax.set_ylabel("log10 count")
    ax.set_xticks(list(degrees))
    ax.set_title("genus-2 cover census")
    ax.legend()
    ax.grid(alpha=0.3)
    return fig


def class_size_figure(edge_counts):
    fig, ax = plt.subplots(figsize=(5, 3.4))
    keys = sorted(edge_counts)
    ax.bar([str(k) for k in keys], [edge_counts[k] for k in keys],
           color="tab:purple", alpha=0.85)
    ax.set_xlabel("edges")
    ax.set_ylabel("isomorphism classes")
    ax.set_title("triangle-faced maps by size")
    return fig
