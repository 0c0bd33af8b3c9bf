"""Mode-sum Green's functions of the resonator.

The off-diagonal value g = G(x1, x2; k) is a plain truncated eigenfunction
sum.  The diagonal value is logarithmically divergent; its regularized
finite part xi(x, k) subtracts the Weyl counterterm 1/(4 pi n) term by
term (n being the 1-based position in the ascending mode table) and adds
a manifold constant c(G), zero by default.  An optional closed-form tail
correction models the neglected modes above the cutoff by their mean
amplitude 1/|G| on the Weyl staircase anchored at the last tabulated
eigenvalue, which buys roughly one extra digit at a given cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import digamma

from ._sums import compensated_dot, compensated_sum
from .errors import (
    IdenticalJunctionError,
    OutsideManifoldError,
    PoleProximityError,
    TailToleranceError,
)
from .spectral import Junction, ModeTable, _point_xy

_FOUR_PI = 4.0 * np.pi

#: Fraction of the tail-correction magnitude reported as residual error
#: once the correction is applied (empirical, order-of-magnitude).
_TAIL_RESIDUAL_FRACTION = 0.1


def pole_guard_width(lam: float) -> float:
    """Half-width of the guard band around each eigenvalue."""
    return 1e-9 * max(1.0, abs(lam))


@dataclass(frozen=True)
class GreensConfig:
    """Evaluation parameters for the mode sums.

    lambda_max caps the series at min(table cutoff, lambda_max); None uses
    the full table.  c_g is the manifold regularization constant c(G),
    zero by default (a nonzero value only renormalizes the coupling).
    """

    lambda_max: float | None = None
    c_g: float = 0.0
    tail_tolerance: float = 1e-4
    tail_correction: bool = True

    def __post_init__(self):
        if self.lambda_max is not None and not self.lambda_max > 0.0:
            raise ValueError("lambda_max must be positive")
        if not self.tail_tolerance > 0.0:
            raise ValueError("tail_tolerance must be positive")


_DEFAULT_CONFIG = GreensConfig()


@dataclass(frozen=True)
class ResonatorQuantities:
    """Bundle of g, xi and derived junction quantities at one energy.

    Z_j = D_j / (2 pi) + xi_j and DD = g^2 - Z1 Z2, stored exactly as
    computed from the other fields.  n_modes and tail_estimate are
    evaluation diagnostics.
    """

    g: float
    xi1: float
    xi2: float
    z1: float
    z2: float
    dd: float
    lam: float
    n_modes: int = 0
    tail_estimate: float = 0.0


@lru_cache(maxsize=32)
def _amplitudes_at(table: ModeTable, x: float, y: float) -> np.ndarray:
    vals = table.eigenfunction_values((x, y))
    vals.setflags(write=False)
    return vals


@lru_cache(maxsize=32)
def _squared_amplitudes(table: ModeTable, x: float, y: float) -> np.ndarray:
    a = _amplitudes_at(table, x, y)
    w = a * a
    w.setflags(write=False)
    return w


@lru_cache(maxsize=16)
def _pair_amplitudes(table: ModeTable, x1: float, y1: float,
                     x2: float, y2: float) -> np.ndarray:
    w = _amplitudes_at(table, x1, y1) * _amplitudes_at(table, x2, y2)
    w.setflags(write=False)
    return w


def _require_interior(table: ModeTable, point) -> tuple[float, float]:
    x, y = _point_xy(point)
    if not table.geometry.contains(x, y, interior=True):
        raise OutsideManifoldError(
            f"junction ({x}, {y}) must lie strictly inside the manifold")
    return x, y


def effective_count(table: ModeTable, config: GreensConfig | None) -> int:
    """Number of modes participating under the config's series cutoff."""
    cfg = config or _DEFAULT_CONFIG
    if cfg.lambda_max is None or cfg.lambda_max >= table.lambda_max:
        return len(table)
    return table.prefix_count(cfg.lambda_max)


def _check_pole(table: ModeTable, lam: float, n_eff: int) -> None:
    nearest = table.nearest_eigenvalue(lam, n_limit=n_eff)
    if abs(nearest - lam) < pole_guard_width(lam):
        raise PoleProximityError(lam, nearest)


def _tail_terms(table: ModeTable, n_eff: int, lam: float,
                cfg: GreensConfig) -> tuple[float, float]:
    """Closed-form tail model and its residual-error estimate.

    Modes above the cutoff are modeled as lam_n ~ lam_N + (4 pi/|G|)(n - N)
    with mean squared amplitude 1/|G|; the resulting sum of
    1/(4 pi (n + c)) - 1/(4 pi n) telescopes into a digamma difference.
    """
    lam_n = float(table.eigenvalues[n_eff - 1])
    area = table.geometry.area
    b = area * (lam_n - lam) / _FOUR_PI
    if b + 1.0 <= 0.0:
        raise TailToleranceError(
            f"energy {lam!r} too close to the series cutoff for the tail model",
            achieved=np.inf)
    correction = (digamma(n_eff + 1.0) - digamma(b + 1.0)) / _FOUR_PI
    if cfg.tail_correction:
        return float(correction), _TAIL_RESIDUAL_FRACTION * abs(float(correction))
    return 0.0, abs(float(correction))


def green_offdiagonal(table: ModeTable, x1, x2, lam: float,
                      config: GreensConfig | None = None) -> float:
    """Truncated mode sum for G(x1, x2; k) at energy lam = k^2.

    Symmetric in the junctions by construction (identical term array and
    summation order).  Energies inside a pole guard band are rejected.
    """
    p1 = _require_interior(table, x1)
    p2 = _require_interior(table, x2)
    if p1 == p2:
        raise IdenticalJunctionError("junctions must be distinct")
    n_eff = effective_count(table, config)
    _check_pole(table, lam, n_eff)
    w = _pair_amplitudes(table, *p1, *p2)[:n_eff]
    rec = table.eigenvalues[:n_eff] - lam
    np.reciprocal(rec, out=rec)
    return compensated_dot(w, rec)


def xi(table: ModeTable, x, lam: float,
       config: GreensConfig | None = None) -> float:
    """Regularized diagonal Green's function value at a junction.

    Sum of |phi_n(x)|^2 / (lam_n - lam) - 1/(4 pi n) over the table prefix,
    plus the tail correction and the constant c(G).  Raises
    TailToleranceError when the achieved tail estimate exceeds the
    configured tolerance.
    """
    cfg = config or _DEFAULT_CONFIG
    p = _require_interior(table, x)
    n_eff = effective_count(table, cfg)
    if n_eff == 0:
        raise ValueError("mode table is empty")
    _check_pole(table, lam, n_eff)
    w = _squared_amplitudes(table, *p)[:n_eff]
    rec = table.eigenvalues[:n_eff] - lam
    np.reciprocal(rec, out=rec)
    partial = compensated_dot(w, rec) - table.counterterm_sum(n_eff)
    tail, estimate = _tail_terms(table, n_eff, lam, cfg)
    if estimate > cfg.tail_tolerance:
        raise TailToleranceError(
            f"tail tolerance {cfg.tail_tolerance:.3e} unreachable at cutoff "
            f"{table.eigenvalues[n_eff - 1]:.6g}", achieved=estimate)
    return partial + tail + cfg.c_g


def xi_difference(table: ModeTable, x, lam1: float, lam2: float) -> float:
    """Uniformly convergent difference xi(x, lam1) - xi(x, lam2).

    Computed term by term as |phi_n|^2 (lam1 - lam2) / ((lam_n - lam1)
    (lam_n - lam2)), which makes the antisymmetry in (lam1, lam2) exact.
    Serves as the counterterm-free oracle for xi.
    """
    p = _require_interior(table, x)
    n_eff = len(table)
    _check_pole(table, lam1, n_eff)
    _check_pole(table, lam2, n_eff)
    w = _squared_amplitudes(table, *p)
    lams = table.eigenvalues
    terms = w * (lam1 - lam2) / ((lams - lam1) * (lams - lam2))
    return compensated_sum(terms)


def resonator_quantities(table: ModeTable, x1, x2, lam: float,
                         d1: float = 0.0, d2: float = 0.0,
                         config: GreensConfig | None = None) -> ResonatorQuantities:
    """Evaluate g, xi_1, xi_2 and the derived Z_j, DD from one table prefix.

    All three sums share a single denominator pass so they carry one
    truncation error scale.
    """
    cfg = config or _DEFAULT_CONFIG
    p1 = _require_interior(table, x1)
    p2 = _require_interior(table, x2)
    if p1 == p2:
        raise IdenticalJunctionError("junctions must be distinct")
    n_eff = effective_count(table, cfg)
    if n_eff == 0:
        raise ValueError("mode table is empty")
    _check_pole(table, lam, n_eff)
    lams = table.eigenvalues[:n_eff]
    rec = lams - lam
    np.reciprocal(rec, out=rec)
    w12 = _pair_amplitudes(table, *p1, *p2)[:n_eff]
    w11 = _squared_amplitudes(table, *p1)[:n_eff]
    w22 = _squared_amplitudes(table, *p2)[:n_eff]
    g = compensated_dot(w12, rec)
    s1 = compensated_dot(w11, rec)
    s2 = compensated_dot(w22, rec)
    counterterm = table.counterterm_sum(n_eff)
    tail, estimate = _tail_terms(table, n_eff, lam, cfg)
    if estimate > cfg.tail_tolerance:
        raise TailToleranceError(
            f"tail tolerance {cfg.tail_tolerance:.3e} unreachable at cutoff "
            f"{lams[-1]:.6g}", achieved=estimate)
    xi1 = (s1 - counterterm) + tail + cfg.c_g
    xi2 = (s2 - counterterm) + tail + cfg.c_g
    z1 = d1 / (2.0 * np.pi) + xi1
    z2 = d2 / (2.0 * np.pi) + xi2
    dd = g * g - z1 * z2
    return ResonatorQuantities(g=g, xi1=xi1, xi2=xi2, z1=z1, z2=z2, dd=dd,
                               lam=lam, n_modes=n_eff, tail_estimate=estimate)


def clear_caches() -> None:
    """Drop the memoized per-point eigenfunction arrays."""
    _amplitudes_at.cache_clear()
    _squared_amplitudes.cache_clear()
    _pair_amplitudes.cache_clear()
