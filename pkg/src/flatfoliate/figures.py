"""Deterministic matplotlib figures for the decay report.

Rendering is pinned to the Agg backend and a fixed Software metadata
string so that repeated runs produce byte-identical PNG files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

PNG_METADATA = {"Software": "flatfoliate"}


def save_decay_figure(rows: Sequence[dict], path: Union[str, Path]) -> None:
    """Bound versus box size next to the exact formula values."""
    sizes = [int(r["L"]) for r in rows]
    bounds = [float(r["bound"]) for r in rows]
    values = [float(r["formula_value"]) for r in rows]
    fig, (ax_bound, ax_value) = plt.subplots(1, 2, figsize=(8.0, 3.2))
    ax_bound.semilogy(sizes, bounds, marker="o", color="#1f6fb4")
    ax_bound.set_xlabel("box size L")
    ax_bound.set_ylabel("a-priori bound")
    ax_bound.set_title("bound decay")
    ax_bound.grid(True, which="both", alpha=0.3)
    ax_value.plot(sizes, values, marker="s", color="#b43f1f")
    ax_value.axhline(0.0, color="black", linewidth=0.8)
    ax_value.set_xlabel("box size L")
    ax_value.set_ylabel("formula value")
    ax_value.set_title("exact Euler number")
    ax_value.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=PNG_METADATA)
    plt.close(fig)


def save_crossings_figure(data, path: Union[str, Path]) -> None:
    """Torus positions of the boundary self-crossings for one run."""
    xs = [float(c.position[0]) for c in data.crossings]
    ys = [float(c.position[1]) for c in data.crossings]
    colors = ["#b43f1f" if c.swapped else "#1f6fb4" for c in data.crossings]
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    ax.scatter(xs, ys, c=colors, s=14)
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 1.0)
    ax.set_aspect("equal")
    ax.set_xlabel("x mod 1")
    ax.set_ylabel("y mod 1")
    ax.set_title(f"L={data.L}: {len(data.crossings)} crossings")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=PNG_METADATA)
    plt.close(fig)
