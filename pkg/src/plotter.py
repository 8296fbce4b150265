from typing import List, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import seaborn as sns  # noqa: E402

from src.atlas import AtlasEntry  # noqa: E402
from src.geodesic import CurveSample, Geodesic  # noqa: E402
from src.pendulum import PendulumState  # noqa: E402
from src.targets import AtlasGrid  # noqa: E402

SVG_HASHSALT = "sr-se2"
WITNESS_SAMPLES = 64


def _savefig(path: str) -> None:
    plt.rcParams["svg.hashsalt"] = SVG_HASHSALT
    plt.savefig(path, format="svg", bbox_inches="tight", metadata={"Date": None})
    plt.close()


def plot_geodesic(
    g: Geodesic,
    samples: List[CurveSample],
    cusps: Sequence[float],
    inflections: Sequence[float],
    path: str,
) -> None:
    """Planar projection of a geodesic, cusps as crosses and inflections as circles"""

    sns.set_theme(context="talk", style="darkgrid")
    plt.figure()

    x = [s.pose.x for s in samples]
    y = [s.pose.y for s in samples]
    plt.plot(x, y, label="geodesic")

    if cusps:
        cx, cy, _ = g.path(np.asarray(cusps))
        plt.scatter(cx, cy, marker="x", s=120, color="C3", zorder=3, label="cusp")
    if inflections:
        ix, iy, _ = g.path(np.asarray(inflections))
        plt.scatter(ix, iy, marker="o", s=60, facecolors="none", edgecolors="C2", zorder=3, label="inflection")

    plt.gca().set_aspect("equal", adjustable="datalim")
    plt.legend()
    plt.xlabel("x")
    plt.ylabel("y")
    plt.title(f"class {g.tag.value}, nu0={g.state0.nu:.4f}, c0={g.state0.c:.4f}")
    _savefig(path)


def _plot_witness(ax, entry: AtlasEntry, xi: float, color) -> None:
    g = Geodesic.from_state(PendulumState(entry.nu0, entry.c0))
    x, y, _ = g.path(np.linspace(0.0, entry.duration, WITNESS_SAMPLES))
    ax.plot(x / xi, y / xi, color=color, linewidth=1.0, alpha=0.8)


def plot_atlas(
    entries: List[AtlasEntry], grid: AtlasGrid, path: str, xi: float = 1.0, max_slices: int = 8
) -> None:
    """Exists regions over (x, y), one panel per final heading

    On a ring grid the witness minimizer of every target is drawn from the
    origin, in the colour of its verdict.
    """

    sns.set_theme(context="talk", style="darkgrid")

    headings = grid.headings
    step = max(1, int(np.ceil(len(headings) / max_slices)))
    slices = headings[::step]
    cols = min(4, len(slices))
    rows = int(np.ceil(len(slices) / cols))

    fig, axes = plt.subplots(rows, cols, figsize=(4 * cols, 4 * rows), squeeze=False)
    palette = sns.color_palette("rocket", 3)

    for ax, heading in zip(axes.flat, slices):
        panel = [e for e in entries if np.isclose(e.target.theta, heading, atol=1e-12)]
        colors = [palette[2] if e.exists else palette[1] if e.error is None else palette[0] for e in panel]
        if grid.kind == "ring":
            for e, color in zip(panel, colors):
                if e.has_witness:
                    _plot_witness(ax, e, xi, color)
        ax.scatter([e.target.x for e in panel], [e.target.y for e in panel], c=colors, s=12, marker="s")
        ax.set_aspect("equal")
        ax.set_title(f"theta = {heading:.3f}")

    for ax in list(axes.flat)[len(slices) :]:
        ax.axis("off")

    fig.suptitle("Exists (light), no solution (dark), failure (black)")
    _savefig(path)
