"""Figure rendering for the command-line report path.

Each writer takes already-computed columns and saves a single figure next
to the delimited output.  The format follows the file extension (png, pdf,
svg).  Figures are a convenience view; the delimited files remain the
authoritative output.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["plot_scan", "plot_ring"]

_COLORS = {
    "pw": "#444444",
    "tw_quad": "#d62728",
    "tw_exact": "#1f77b4",
    "density_normalized": "#1f77b4",
}


def plot_scan(
    thetas: Sequence[float],
    columns: Mapping[str, Sequence[float]],
    path: str,
    theta_pw: float | None = None,
    discontinuities: tuple[float, float] | None = None,
    title: str = "",
) -> None:
    """Angular distribution(s) against photon polar angle."""
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for name, vals in columns.items():
        ax.plot(
            thetas,
            vals,
            label=name,
            color=_COLORS.get(name),
            linewidth=1.4,
        )
    if theta_pw is not None:
        ax.axvline(theta_pw, color="0.6", linestyle=":", linewidth=1.0, label="theta_pw")
    if discontinuities is not None:
        for d in discontinuities:
            ax.axvline(d, color="0.8", linestyle="--", linewidth=0.8)
    ax.set_xlabel(r"photon polar angle $\theta_p$ (rad)")
    ax.set_ylabel("density (max-normalized)")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    ax.grid(alpha=0.25)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_ring(
    points: Sequence[tuple[float, float]],
    center: tuple[float, float],
    radius: float,
    path: str,
    title: str = "",
) -> None:
    """Sampled coincidence ring in the photon transverse-momentum plane."""
    fig, ax = plt.subplots(figsize=(5.2, 5.2))
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    ax.plot(xs, ys, ".", markersize=3, color="#1f77b4", label="samples")
    ax.plot(*center, "x", color="#d62728", label="center")
    ax.add_patch(
        plt.Circle(center, radius, fill=False, color="0.7", linewidth=0.8)
    )
    ax.set_aspect("equal")
    ax.set_xlabel(r"$\kappa_x$")
    ax.set_ylabel(r"$\kappa_y$")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False, loc="upper right")
    ax.grid(alpha=0.25)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
