"""Optional matplotlib rendering of figure tables.

matplotlib is imported lazily so that the numerical library and CLI work
without it; install the ``plot`` extra to enable ``--png``.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

__all__ = ["PUBLICATION_PARAMS", "render_table"]

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
COLUMN_WIDTH = 3.4  # inches

PUBLICATION_PARAMS = {
    "font.family": "serif",
    "font.size": 8,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "mathtext.fontset": "stix",
    "figure.figsize": (COLUMN_WIDTH, COLUMN_WIDTH * GOLDEN * 1.2),
    "figure.dpi": 150,
    "savefig.dpi": 300,
    "lines.linewidth": 1.0,
    "svg.hashsalt": "udwcoherence",
}

LABELS = {
    "energy": r"$E/\Omega$",
    "duration": r"$\Omega T$",
    "coherence": r"$C/\bar\lambda$",
    "coherence_static": r"$C_0/\bar\lambda$",
    "coherence_moving": r"$C_\upsilon/\bar\lambda$",
    "swelling_ratio": r"$C_\upsilon/C_0$",
    "commutator_term": r"$\lambda^2[\Phi,\Phi^\dagger]/\bar\lambda^2$",
    "energy_cost": r"$\Delta E/\Omega\bar\lambda^2$",
}


def _pyplot():
    try:
        import matplotlib
    except ImportError as exc:
        raise RuntimeError("rendering needs matplotlib; install the 'plot' extra") from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def render_table(path: str, columns: Sequence[str], rows: Sequence[Sequence], plot: str,
                 ycols: Sequence[str], title: str = "") -> None:
    """Draw a surface over (energy, duration) or curves against the first column."""
    plt = _pyplot()
    index = {c: i for i, c in enumerate(columns)}
    with plt.rc_context(PUBLICATION_PARAMS):
        fig, ax = plt.subplots()
        if plot == "surface":
            E = np.array([r[index["energy"]] for r in rows], dtype=float)
            T = np.array([r[index["duration"]] for r in rows], dtype=float)
            Z = np.array([r[index[ycols[0]]] for r in rows], dtype=float)
            e_vals, t_vals = np.unique(E), np.unique(T)
            grid = Z.reshape(len(e_vals), len(t_vals)).T
            mesh = ax.pcolormesh(e_vals, t_vals, grid, shading="auto", cmap="viridis")
            fig.colorbar(mesh, ax=ax, label=LABELS.get(ycols[0], ycols[0]))
            ax.set_xlabel(LABELS["energy"])
            ax.set_ylabel(LABELS["duration"])
        else:
            xcol = columns[0]
            groups = {}
            for r in rows:
                key = tuple(r[i] for i, c in enumerate(columns) if c in ("dimension",))
                groups.setdefault(key, []).append(r)
            for key, group in groups.items():
                x = [r[index[xcol]] for r in group]
                for col in ycols:
                    label = LABELS.get(col, col) + (f" (n={key[0]})" if key else "")
                    ax.plot(x, [r[index[col]] for r in group], label=label)
            ax.set_xlabel(LABELS.get(xcol, xcol))
            if len(ycols) > 1 or groups.keys() != {()}:
                ax.legend(frameon=False)
        if title:
            ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
        plt.close(fig)
