"""Parameter grids behind each published figure panel.

Identifiers follow the figure numbering: 3 and 4 are the static surfaces in one
and three dimensions, 5 the commutator term, 6 and 7 the moving detector at
v = 0.8, and 8 the instantaneous (catalytic) protocol.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

__all__ = ["FigureSpec", "FIGURES", "figure_ids"]

ENERGY_RANGE = (0.01, 5.0)
DURATION_RANGE = (0.0, 3.0)
RADIUS = 1.0


@dataclass(frozen=True)
class FigureSpec:
    """One figure panel.

    ``kind`` selects the table (static, moving, commutator, catalysis);
    ``plot`` names the column drawn and whether it is a surface over (E, T)
    or curves against one swept variable.
    """
    kind: str
    dimension: Optional[int]
    phase_r: int = 1
    velocity: Tuple[float, ...] = (0.0,)
    energy: Optional[float] = None  # fixed energy for curve panels
    plot: str = "surface"
    columns: Tuple[str, ...] = field(default_factory=tuple)
    title: str = ""


def _build() -> Dict[str, FigureSpec]:
    figs = {}
    for num, n in (("3", 1), ("4", 3)):
        for panel, r in (("a", 1), ("b", 0)):
            figs[f"fig{num}{panel}"] = FigureSpec(
                "static", n, r, plot="surface", columns=("coherence",),
                title=f"C/lambda, n={n}, r={r}")
    figs["fig5"] = FigureSpec("commutator", None, plot="curve", columns=("commutator_term",),
                              title="commutator term vs T")
    for num, n, E in (("6", 1, 0.1), ("7", 3, 0.2)):
        for offset, r in ((0, 1), (3, 0)):
            a, b, c = "abcdef"[offset:offset + 3]
            figs[f"fig{num}{a}"] = FigureSpec("moving", n, r, (0.8,), plot="surface",
                                              columns=("coherence_moving",),
                                              title=f"C_0.8/lambda, n={n}, r={r}")
            figs[f"fig{num}{b}"] = FigureSpec("moving", n, r, (0.8,), plot="surface",
                                              columns=("swelling_ratio",),
                                              title=f"C_0.8/C_0, n={n}, r={r}")
            figs[f"fig{num}{c}"] = FigureSpec("moving", n, r, (0.8,), energy=E, plot="curve",
                                              columns=("coherence_static", "coherence_moving"),
                                              title=f"static vs moving, E={E}, n={n}, r={r}")
    for offset, n in ((0, 1), (3, 3)):
        for i, v in enumerate((0.0, 0.6, 0.8)):
            figs[f"fig8{'abcdef'[offset + i]}"] = FigureSpec(
                "catalysis", n, 1, (v,), plot="curve", columns=("coherence", "energy_cost"),
                title=f"catalysis, n={n}, v={v}")
    return figs


FIGURES: Dict[str, FigureSpec] = _build()


def figure_ids():
    return sorted(FIGURES)
