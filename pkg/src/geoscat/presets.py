"""Canned parameter sets for the bundled figure datasets.

Junction positions and bath parameters follow the published curves; the
coupling constants behind those curves were never stated, so every preset
uses the natural contact coupling with radius rho = 0.05 and c(G) = 0.
Figure reproduction is therefore qualitative: resonance positions and
trends are meaningful, exact curve heights are not.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import Junction, Rectangle, ResonatorGeometry, Triangle

#: Contact radius of the natural-coupling preset.
NATURAL_RHO = 0.05

#: Series cutoff used by all figure presets.
PRESET_LAMBDA_MAX = 1e5

RECT_2X1 = Rectangle(2.0, 1.0)
RECT_IN = Junction(0.2, 0.1)
RECT_OUT = (Junction(1.8, 0.9), Junction(0.2, 0.9), Junction(1.0, 0.5))

TRIANGLE = Triangle()
#: (i) near the lowest vertex -> center of mass.
TRI_PAIR_I = (Junction(0.1, 0.2), Junction(1.0, 5.0 / np.sqrt(3.0)))
#: (ii) ground-state maximum -> first-excited-state maximum.
TRI_PAIR_II = (Junction(1.195408, 2.392313), Junction(1.142144, 1.645060))
#: (iii) between the two most distant vertices.
TRI_PAIR_III = (Junction(0.1, 0.2), Junction(0.1, 6.6))


@dataclass(frozen=True)
class CurvePreset:
    """One output curve of a figure dataset."""

    name: str
    kind: str  # "transmission" | "current"
    geometry: ResonatorGeometry
    x1: Junction
    x2: Junction
    axis: str
    start: float
    stop: float
    count: int
    fixed: dict = field(default_factory=dict)


def _transmission_curves(figure, geometry, pairs, names):
    return tuple(
        CurvePreset(name=f"{figure}-{n}", kind="transmission",
                    geometry=geometry, x1=p1, x2=p2,
                    axis="lambda", start=0.05, stop=100.0, count=2000,
                    fixed={"Vg": 0.0})
        for (p1, p2), n in zip(pairs, names))


def _current_curves(figure, axis, start, stop, sweeps):
    x1, x2 = TRI_PAIR_I
    return tuple(
        CurvePreset(name=f"{figure}-{label}", kind="current",
                    geometry=TRIANGLE, x1=x1, x2=x2,
                    axis=axis, start=start, stop=stop, count=200,
                    fixed=dict(fixed))
        for label, fixed in sweeps)


FIGURES: dict[str, tuple[CurvePreset, ...]] = {
    # |t|^2 over energy for the rectangle, one incoming and three outgoing taps
    "fig2": _transmission_curves(
        "fig2", RECT_2X1,
        [(RECT_IN, out) for out in RECT_OUT],
        ["out-1.8-0.9", "out-0.2-0.9", "out-1.0-0.5"]),
    # |t|^2 over energy for the triangle, attachment cases (i)-(iii)
    "fig3": _transmission_curves(
        "fig3", TRIANGLE,
        [TRI_PAIR_I, TRI_PAIR_II, TRI_PAIR_III],
        ["case-i", "case-ii", "case-iii"]),
    # ballistic current vs bias for four Fermi levels
    "fig4": _current_curves(
        "fig4", "V", 0.0, 20.0,
        [(f"mu1-{m:g}", {"mu1": float(m), "beta": 25.0, "Vg": 0.0})
         for m in (1, 5, 10, 15)]),
    # ballistic current vs Fermi level for four biases
    "fig5": _current_curves(
        "fig5", "mu1", 0.0, 30.0,
        [(f"V-{v:g}", {"V": float(v), "beta": 25.0, "Vg": 0.0})
         for v in (1, 4, 10, 15)]),
    # temperature washout of the resonance structure at fixed bias
    "fig6": _current_curves(
        "fig6", "mu1", 0.0, 30.0,
        [(f"beta-{b:g}", {"V": 2.0, "beta": float(b), "Vg": 0.0})
         for b in (0.7, 0.5, 0.3, 0.1)]),
    # gate-voltage dependence up to the closing threshold
    "fig7": _current_curves(
        "fig7", "Vg", 0.0, 60.0,
        [(f"mu1-{m:g}", {"mu1": float(m), "V": 1.0, "beta": 25.0})
         for m in (5, 10, 15, 20)]),
    # gate-voltage dependence below threshold at large mu2
    "fig8": _current_curves(
        "fig8", "Vg", 0.0, 110.0,
        [(f"mu1-{m:g}", {"mu1": float(m), "mu2": 60.0, "beta": 25.0})
         for m in (0, 25, 40)]),
}
