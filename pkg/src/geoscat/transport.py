"""Landauer-Buttiker transport integrals with resonance-aware quadrature.

The stationary current between the two leads is

    I = 2 pi * integral from V_g/2 to infinity of
        [f_beta(lam - mu2) - f_beta(lam - mu1)] |t(k1, k2, k)|^2 dlam,

with f_beta the Fermi-Dirac function.  The integrand varies rapidly near
resonator eigenvalues, so every eigenvalue inside the window becomes a
quadrature breakpoint with a narrow guard band excised around it, and
each panel is integrated adaptively (QUADPACK, embedded Gauss-Kronrod
pairs with recursion on the worst subinterval).  The infinite upper limit
is truncated where the Fermi window falls below a configurable tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import (
    ConductanceStepError,
    InsufficientSpectrumError,
    QuadratureError,
)
from .greens import GreensConfig, effective_count, pole_guard_width, resonator_quantities
from .scattering import CouplingParams, amplitudes, momenta, transfer_matrix
from .spectral import ModeTable

_TWO_PI = 2.0 * np.pi


def fermi(beta: float, lam: float) -> float:
    """Fermi-Dirac occupation 1/(exp(beta lam) + 1), overflow-safe.

    Saturates to exactly 0 or 1 far from the step.
    """
    if not beta > 0.0:
        raise ValueError("inverse temperature beta must be positive")
    x = beta * lam
    if x >= 0.0:
        e = math.exp(-x)
        return e / (1.0 + e)
    e = math.exp(x)
    return 1.0 / (1.0 + e)


def fermi_window(beta: float, lam: float, mu1: float, mu2: float) -> float:
    """Transport window f_beta(lam - mu2) - f_beta(lam - mu1)."""
    return fermi(beta, lam - mu2) - fermi(beta, lam - mu1)


@dataclass(frozen=True)
class BathPair:
    """Reservoir setting: inverse temperature, potentials, gate voltage.

    The bias V = mu2 - mu1 is nonnegative by convention, as is V_g.
    """

    beta: float
    mu1: float
    mu2: float
    v_g: float = 0.0

    def __post_init__(self):
        if not self.beta > 0.0:
            raise ValueError("beta must be positive")
        if self.mu2 < self.mu1:
            raise ValueError("bias V = mu2 - mu1 must be nonnegative")
        if self.v_g < 0.0:
            raise ValueError("gate voltage V_g must be nonnegative")

    @property
    def bias(self) -> float:
        return self.mu2 - self.mu1


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for the adaptive transport integrals."""

    abs_tol: float = 1e-8
    rel_tol: float = 1e-6
    window_tolerance: float = 1e-12
    panel_limit: int = 200

    def __post_init__(self):
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise ValueError("quadrature tolerances must be positive")
        if not 0.0 < self.window_tolerance < 1.0:
            raise ValueError("window_tolerance must lie in (0, 1)")


_DEFAULT_QUAD = QuadratureConfig()


@dataclass(frozen=True)
class QuadratureReport:
    """Value and diagnostics of one transport integral."""

    value: float
    error_estimate: float
    evaluations: int
    subintervals: int
    poles: tuple[float, ...]
    converged: bool = True


def _zero_report() -> QuadratureReport:
    return QuadratureReport(0.0, 0.0, 0, 0, ())


def _split_panels(lo: float, hi: float, breakpoints):
    """Split [lo, hi] at the given energies, excising each guard band."""
    points = np.asarray(breakpoints, dtype=np.float64)
    points = np.sort(points)
    i0, i1 = np.searchsorted(points, (lo, hi))
    poles = [float(p) for p in points[i0:i1]]
    panels = []
    cursor = lo
    for p in poles:
        guard = pole_guard_width(p)
        if p - guard > cursor:
            panels.append((cursor, p - guard))
        cursor = max(cursor, p + guard)
    if hi > cursor:
        panels.append((cursor, hi))
    return panels, tuple(poles)


def _integrate_panels(fn, panels, quad_cfg: QuadratureConfig):
    """QUADPACK on each panel; totals assembled in ascending panel order."""
    if not panels:
        return 0.0, 0.0, 0, 0, True
    per_panel_abs = quad_cfg.abs_tol / len(panels)
    total = 0.0
    err = 0.0
    neval = 0
    nsub = 0
    clean = True
    for a, b in panels:
        out = quad(fn, a, b, epsabs=per_panel_abs, epsrel=quad_cfg.rel_tol,
                   limit=quad_cfg.panel_limit, full_output=True)
        value, abserr, info = out[0], out[1], out[2]
        if len(out) > 3:
            clean = False
        total += value
        err += abserr
        neval += int(info["neval"])
        nsub += int(info["last"])
    return total, err, neval, nsub, clean


def _finish_report(total, err, neval, nsub, poles, clean,
                   quad_cfg: QuadratureConfig) -> QuadratureReport:
    tolerance = max(quad_cfg.abs_tol, quad_cfg.rel_tol * abs(total))
    converged = clean and err <= 10.0 * tolerance
    report = QuadratureReport(total, err, neval, nsub, poles, converged)
    if err > 100.0 * tolerance:
        raise QuadratureError(
            f"quadrature error estimate {err:.3e} far above tolerance "
            f"{tolerance:.3e}", report=report)
    return report


def _transmission_fn(table, x1, x2, coupling, v_g, greens_config):
    def t2(lam: float) -> float:
        k1, k2 = momenta(lam, v_g)
        q = resonator_quantities(table, x1, x2, lam, d1=coupling.d1,
                                 d2=coupling.d2, config=greens_config)
        return amplitudes(transfer_matrix(q, coupling), k1, k2).transmission
    return t2


def _require_spectrum(table, greens_config, lam_up: float) -> int:
    n_eff = effective_count(table, greens_config)
    cutoff = table.lambda_max
    if greens_config is not None and greens_config.lambda_max is not None:
        cutoff = min(cutoff, greens_config.lambda_max)
    if cutoff < lam_up:
        raise InsufficientSpectrumError(required=lam_up, available=cutoff)
    return n_eff


def current_for_transmission(t2, baths: BathPair,
                             quad_config: QuadratureConfig | None = None,
                             breakpoints=()) -> QuadratureReport:
    """Landauer-Buttiker current for an arbitrary transmission function.

    t2 maps energy to |t|^2; breakpoints are energies (e.g. resonator
    eigenvalues) excised and split around.  The integration domain starts
    at the channel threshold V_g/2 and is clipped where the Fermi window
    falls below window_tolerance on either side.
    """
    quad_cfg = quad_config or _DEFAULT_QUAD
    if baths.mu1 == baths.mu2:
        return _zero_report()
    margin = math.log(1.0 / quad_cfg.window_tolerance) / baths.beta
    lam_up = max(baths.mu1, baths.mu2) + margin
    lo = max(baths.v_g / 2.0, baths.mu1 - margin)
    if lam_up <= lo:
        return _zero_report()
    beta, mu1, mu2 = baths.beta, baths.mu1, baths.mu2

    def integrand(lam: float) -> float:
        return _TWO_PI * fermi_window(beta, lam, mu1, mu2) * t2(lam)

    panels, poles = _split_panels(lo, lam_up, breakpoints)
    total, err, neval, nsub, clean = _integrate_panels(integrand, panels, quad_cfg)
    return _finish_report(total, err, neval, nsub, poles, clean, quad_cfg)


def current(table: ModeTable, x1, x2, coupling: CouplingParams,
            baths: BathPair, quad_config: QuadratureConfig | None = None,
            greens_config: GreensConfig | None = None) -> QuadratureReport:
    """Stationary current for the given bath pair.

    The integration domain starts at the channel threshold V_g/2 and is
    clipped where the Fermi window drops below window_tolerance on either
    side; eigenvalues inside the domain become quadrature breakpoints.
    Nonnegative whenever mu2 >= mu1.
    """
    quad_cfg = quad_config or _DEFAULT_QUAD
    if baths.mu1 == baths.mu2:
        return _zero_report()
    margin = math.log(1.0 / quad_cfg.window_tolerance) / baths.beta
    lam_up = max(baths.mu1, baths.mu2) + margin
    n_eff = _require_spectrum(table, greens_config, lam_up)
    t2 = _transmission_fn(table, x1, x2, coupling, baths.v_g, greens_config)
    return current_for_transmission(
        t2, baths, quad_cfg, breakpoints=table.eigenvalues[:n_eff])


def zero_temperature_current(table: ModeTable, x1, x2,
                             coupling: CouplingParams, mu1: float, mu2: float,
                             v_g: float = 0.0,
                             quad_config: QuadratureConfig | None = None,
                             greens_config: GreensConfig | None = None
                             ) -> QuadratureReport:
    """Zero-temperature limit: 2 pi * integral of |t|^2 over the window
    (max(mu1, V_g/2), mu2), with the same pole handling as current()."""
    quad_cfg = quad_config or _DEFAULT_QUAD
    if mu2 < mu1:
        raise ValueError("mu2 must be >= mu1")
    lo = max(mu1, v_g / 2.0)
    if mu2 <= lo:
        return _zero_report()
    n_eff = _require_spectrum(table, greens_config, mu2)
    t2 = _transmission_fn(table, x1, x2, coupling, v_g, greens_config)

    def integrand(lam: float) -> float:
        return _TWO_PI * t2(lam)

    panels, poles = _split_panels(lo, mu2, table.eigenvalues[:n_eff])
    total, err, neval, nsub, clean = _integrate_panels(integrand, panels, quad_cfg)
    return _finish_report(total, err, neval, nsub, poles, clean, quad_cfg)


def _current_at_bias(table, x1, x2, coupling, baths: BathPair, v: float,
                     quad_config, greens_config) -> float:
    shifted = BathPair(baths.beta, baths.mu1, baths.mu1 + v, baths.v_g)
    return current(table, x1, x2, coupling, shifted,
                   quad_config, greens_config).value


def _sigma_estimate(table, x1, x2, coupling, baths, dv, quad_config,
                    greens_config) -> float:
    v = baths.bias
    at = lambda vv: _current_at_bias(table, x1, x2, coupling, baths, vv,
                                     quad_config, greens_config)
    if v - dv >= 0.0:
        return (at(v + dv) - at(v - dv)) / (2.0 * dv)
    # one-sided second-order stencil at the V = 0 boundary; I(0) = 0 exactly
    return (4.0 * at(v + dv) - at(v + 2.0 * dv) - 3.0 * at(v)) / (2.0 * dv)


def conductance(table: ModeTable, x1, x2, coupling: CouplingParams,
                baths: BathPair, dv: float,
                quad_config: QuadratureConfig | None = None,
                greens_config: GreensConfig | None = None,
                richardson_tolerance: float = 0.05) -> float:
    """Finite-difference conductance d I / d V at the bath pair's bias.

    Central differences away from V = 0, a one-sided second-order stencil
    at the boundary.  The estimate is recomputed with half the step; a
    discrepancy above richardson_tolerance (relative) raises
    ConductanceStepError.  The half-step estimate is returned.
    """
    if not dv > 0.0:
        raise ValueError("finite-difference step dv must be positive")
    coarse = _sigma_estimate(table, x1, x2, coupling, baths, dv,
                             quad_config, greens_config)
    fine = _sigma_estimate(table, x1, x2, coupling, baths, dv / 2.0,
                           quad_config, greens_config)
    if abs(coarse - fine) > richardson_tolerance * max(1.0, abs(fine)):
        raise ConductanceStepError(
            f"step {dv!r} too large: estimates {coarse!r} vs {fine!r} "
            f"differ beyond tolerance {richardson_tolerance!r}")
    return fine


def linear_response_conductance(table: ModeTable, x1, x2,
                                coupling: CouplingParams, mu: float,
                                beta: float, v_g: float = 0.0,
                                quad_config: QuadratureConfig | None = None,
                                greens_config: GreensConfig | None = None
                                ) -> QuadratureReport:
    """Linear-response conductance 2 pi * integral of |t|^2 times the
    thermal derivative -df/dlam centered at mu."""
    quad_cfg = quad_config or _DEFAULT_QUAD
    margin = math.log(1.0 / quad_cfg.window_tolerance) / beta + 2.0 / beta
    lam_up = mu + margin
    lo = max(v_g / 2.0, mu - margin)
    if lam_up <= lo:
        return _zero_report()
    n_eff = _require_spectrum(table, greens_config, lam_up)
    t2 = _transmission_fn(table, x1, x2, coupling, v_g, greens_config)

    def integrand(lam: float) -> float:
        occ = fermi(beta, lam - mu)
        return _TWO_PI * beta * occ * (1.0 - occ) * t2(lam)

    panels, poles = _split_panels(lo, lam_up, table.eigenvalues[:n_eff])
    total, err, neval, nsub, clean = _integrate_panels(integrand, panels, quad_cfg)
    return _finish_report(total, err, neval, nsub, poles, clean, quad_cfg)
