"""Serialization of contour grids: delimited output, SVG heatmaps, figures.

The CSV and SVG paths are deterministic (byte-identical for identical inputs):
numbers are formatted to 12 significant digits and no timestamps or random
identifiers are embedded.  The PNG path delegates to matplotlib for a
publication-style figure and makes no byte-level determinism promise.
"""

from __future__ import annotations

import io
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import TwoChoiceExperiment
from .datasets import atomic_write
from .errors import DegenerateExperimentError, UnsupportedFormatError
from .geometry import (
    REGION_ABOVE,
    REGION_BELOW,
    REGION_CLASSICAL,
    REGION_SINGULAR,
    ContourGrid,
    TrajectoryLine,
    contour,
    sample_trajectory,
    trajectory,
)

GRID_CSV_HEADER = "theta0,theta1,value,region"

_REGION_FILL = {
    REGION_BELOW: "#f7c5d5",  # light shade: below the classical band
    REGION_ABOVE: "#bfe8ee",  # dark shade: above the classical band
    REGION_CLASSICAL: "#ffffff",
    REGION_SINGULAR: "#404040",
}

TWO_PI = 2.0 * math.pi


def _fmt(x: float) -> str:
    """12-significant-digit decimal formatting, stable across runs."""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return format(float(x), ".12g")


def grid_csv(grid: ContourGrid) -> str:
    """Delimited grid dump: one row per (theta0, theta1) cell."""
    lines = [GRID_CSV_HEADER]
    thetas = grid.thetas
    for i, t0 in enumerate(thetas):
        for j, t1 in enumerate(thetas):
            lines.append(
                f"{_fmt(t0)},{_fmt(t1)},{_fmt(grid.values[i, j])},{grid.regions[i, j]}"
            )
    return "\n".join(lines) + "\n"


def _trajectory_polylines(line: TrajectoryLine, samples: int = 512) -> List[List[Tuple[float, float]]]:
    """Angle-space polylines for a c-space line, with the four mirror copies."""
    pairs = sample_trajectory(line, samples)
    if not pairs:
        return []
    principal = [(p.theta0, p.theta1) for p in pairs]
    copies = []
    for flip0 in (False, True):
        for flip1 in (False, True):
            copies.append(
                [
                    (TWO_PI - t0 if flip0 else t0, TWO_PI - t1 if flip1 else t1)
                    for (t0, t1) in principal
                ]
            )
    return copies


def _region_runs(regions_row: Sequence[str]) -> List[Tuple[int, int, str]]:
    """Run-length encode one row of region labels as (start, length, label)."""
    runs = []
    start = 0
    for j in range(1, len(regions_row) + 1):
        if j == len(regions_row) or regions_row[j] != regions_row[start]:
            runs.append((start, j - start, regions_row[start]))
            start = j
    return runs


def grid_svg(
    grid: ContourGrid,
    exp: TwoChoiceExperiment,
    size: int = 540,
    margin: int = 50,
) -> str:
    """Self-contained SVG heatmap of the region classification.

    The classical band is unshaded; sub- and super-classical cells carry the
    two shades; the classical-prediction level curve is always overlaid and
    the observed trajectory is added when the experiment has an observation.
    """
    res = grid.resolution
    plot = size - 2 * margin
    cell = plot / res

    def sx(theta: float) -> float:
        return margin + theta / TWO_PI * plot

    def sy(theta: float) -> float:
        return margin + plot - theta / TWO_PI * plot

    out = io.StringIO()
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">\n'
    )
    out.write(f'<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>\n')
    out.write(f"<!-- experiment {exp.label}: region heatmap of the phase plane -->\n")
    # heatmap: x is theta0, y is theta1; run-length merge along theta1 rows
    for i in range(res):
        x = margin + i * cell
        column = grid.regions[i, :]
        for start, length, label in _region_runs(column):
            fill = _REGION_FILL[label]
            if fill == "#ffffff":
                continue
            y = margin + plot - (start + length) * cell
            out.write(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(cell)}" '
                f'height="{_fmt(length * cell)}" fill="{fill}"/>\n'
            )
    # overlay curves
    curves: List[Tuple[str, TrajectoryLine]] = []
    try:
        curves.append(("#000000", trajectory(exp, grid.classical_value)))
    except DegenerateExperimentError:
        pass
    if exp.observed_pk is not None and 0.0 < exp.observed_pk < 1.0:
        try:
            curves.append(("#c01838", trajectory(exp, exp.observed_pk)))
        except DegenerateExperimentError:
            pass
    for color, line in curves:
        for polyline in _trajectory_polylines(line):
            points = " ".join(f"{_fmt(sx(t0))},{_fmt(sy(t1))}" for t0, t1 in polyline)
            out.write(
                f'<polyline points="{points}" fill="none" stroke="{color}" '
                f'stroke-width="1.5"/>\n'
            )
    # frame and axis labels
    out.write(
        f'<rect x="{margin}" y="{margin}" width="{plot}" height="{plot}" '
        f'fill="none" stroke="#000000" stroke-width="1"/>\n'
    )
    ticks = [(0.0, "0"), (math.pi, "pi"), (TWO_PI, "2pi")]
    for value, text in ticks:
        out.write(
            f'<text x="{_fmt(sx(value))}" y="{size - margin + 18}" font-size="12" '
            f'font-family="sans-serif" text-anchor="middle">{text}</text>\n'
        )
        out.write(
            f'<text x="{margin - 8}" y="{_fmt(sy(value) + 4)}" font-size="12" '
            f'font-family="sans-serif" text-anchor="end">{text}</text>\n'
        )
    out.write(
        f'<text x="{size / 2}" y="{size - 10}" font-size="13" '
        f'font-family="sans-serif" text-anchor="middle">theta0 (rad)</text>\n'
    )
    out.write(
        f'<text x="14" y="{size / 2}" font-size="13" font-family="sans-serif" '
        f'text-anchor="middle" transform="rotate(-90 14 {size / 2})">theta1 (rad)</text>\n'
    )
    out.write("</svg>\n")
    return out.getvalue()


def render_figure(grid: ContourGrid, exp: TwoChoiceExperiment, path) -> None:
    """Matplotlib rendering of the same panel (values, bands, overlays)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.2, 4.6))
    t = grid.thetas
    values = np.array(grid.values, dtype=float)
    mesh = ax.pcolormesh(
        t, t, values.T, shading="nearest", cmap="viridis", vmin=0.0, vmax=1.0
    )
    fig.colorbar(mesh, ax=ax, label="P(choice 0 | mixed condition)")
    below = np.where(grid.regions.T == REGION_BELOW, 1.0, np.nan)
    above = np.where(grid.regions.T == REGION_ABOVE, 1.0, np.nan)
    ax.contourf(t, t, below, levels=[0.5, 1.5], colors="#f7c5d5", alpha=0.45)
    ax.contourf(t, t, above, levels=[0.5, 1.5], colors="#bfe8ee", alpha=0.45)
    curves = [(grid.classical_value, "black", "classical prediction")]
    if exp.observed_pk is not None and 0.0 < exp.observed_pk < 1.0:
        curves.append((exp.observed_pk, "#c01838", "observed"))
    for target, color, label in curves:
        try:
            line = trajectory(exp, target)
        except DegenerateExperimentError:
            continue
        first = True
        for polyline in _trajectory_polylines(line):
            xs = [p[0] for p in polyline]
            ys = [p[1] for p in polyline]
            ax.plot(xs, ys, color=color, lw=1.4, label=label if first else None)
            first = False
    ax.set_xlim(0.0, TWO_PI)
    ax.set_ylim(0.0, TWO_PI)
    ax.set_xlabel(r"$\theta_0$ (rad)")
    ax.set_ylabel(r"$\theta_1$ (rad)")
    ax.set_title(exp.label)
    ax.legend(loc="upper right", fontsize=8, framealpha=0.9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def emit_contour(
    exp: TwoChoiceExperiment,
    resolution: int,
    fmt: str,
    path,
    grid: Optional[ContourGrid] = None,
) -> None:
    """Write a contour grid for the experiment in the requested format."""
    if grid is None:
        grid = contour(exp, resolution)
    if fmt == "csv":
        atomic_write(path, grid_csv(grid))
    elif fmt == "svg":
        atomic_write(path, grid_svg(grid, exp))
    elif fmt == "png":
        render_figure(grid, exp, path)
    else:
        raise UnsupportedFormatError(
            f"unsupported contour format {fmt!r} (expected csv, svg, or png)"
        )
