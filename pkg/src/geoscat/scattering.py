"""Junction transfer matrix and lead scattering amplitudes.

The 2x2 transfer matrix maps boundary values (u, u') across the scatterer
and is assembled from the resonator quantities g, Z_1, Z_2, DD and the
per-junction coupling constants (A_j, C_j, D_j).  Entries carry a global
unit phase factor i, fixed so that det L = -conj(C2) C1 / (conj(C1) C2),
hence det L = -1 for time-reversal-invariant equal couplings; reflection
and transmission probabilities are invariant under this phase.  With the
gate voltage V_g the incoming and outgoing leads carry unequal momenta
k_{1,2} = sqrt(lam +/- V_g / 2), and probability flux is conserved as
k1 (1 - |r|^2) = k2 |t|^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BelowThresholdError,
    DegenerateScatteringError,
    SingularTransferError,
)
from .greens import GreensConfig, ResonatorQuantities, resonator_quantities
from .spectral import ModeTable

_TWO_PI = 2.0 * np.pi


def momenta(lam: float, v_g: float) -> tuple[float, float]:
    """Lead momenta (k1, k2) at resonator energy lam under gate voltage V_g.

    k1 = sqrt(lam + V_g/2), k2 = sqrt(lam - V_g/2); lam = V_g/2 is the
    outgoing-channel threshold (k2 = 0), below it the channel is closed.
    """
    if v_g < 0.0:
        raise ValueError("gate voltage V_g must be nonnegative")
    half = 0.5 * v_g
    if lam < half:
        raise BelowThresholdError(
            f"energy {lam!r} below channel threshold V_g/2 = {half!r}")
    return float(np.sqrt(lam + half)), float(np.sqrt(max(lam - half, 0.0)))


@dataclass(frozen=True)
class CouplingParams:
    """Per-junction coupling constants (A_j, C_j, D_j), j = 1, 2.

    A and D are real, C complex and nonzero (C = 0 would decouple the lead).
    The symmetric flag marks A1 = A2, C1 = C2 real, D1 = D2, the
    time-reversal-invariant case used throughout the presets.
    """

    a1: float
    c1: complex
    d1: float
    a2: float
    c2: complex
    d2: float
    symmetric: bool = field(init=False)

    def __post_init__(self):
        c1 = complex(self.c1)
        c2 = complex(self.c2)
        if c1 == 0 or c2 == 0:
            raise ValueError("coupling constants C_j must be nonzero")
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)
        sym = (self.a1 == self.a2 and c1 == c2 and self.d1 == self.d2
               and c1.imag == 0.0)
        object.__setattr__(self, "symmetric", sym)

    @classmethod
    def make_symmetric(cls, a: float, c: float, d: float) -> "CouplingParams":
        if complex(c).imag != 0.0:
            raise ValueError("symmetric coupling requires real C")
        return cls(a, complex(c), d, a, complex(c), d)

    @classmethod
    def natural(cls, rho: float) -> "CouplingParams":
        """Coupling matched to a thin cylindrical contact of radius rho:
        A = 1/(2 rho), C = 1/sqrt(2 pi rho), D = -ln(rho)."""
        if not rho > 0.0:
            raise ValueError("contact radius must be positive")
        return cls.make_symmetric(
            0.5 / rho, 1.0 / np.sqrt(_TWO_PI * rho), -np.log(rho))


@dataclass(frozen=True)
class TransferMatrix:
    """Complex 2x2 transfer matrix and the energy it was built at."""

    l11: complex
    l12: complex
    l21: complex
    l22: complex
    lam: float

    @property
    def det(self) -> complex:
        return self.l11 * self.l22 - self.l12 * self.l21


@dataclass(frozen=True)
class Amplitudes:
    """Reflection and transmission amplitudes with the lead momenta."""

    r: complex
    t: complex
    k1: float
    k2: float
    lam: float

    @property
    def transmission(self) -> float:
        return abs(self.t) ** 2

    @property
    def reflection(self) -> float:
        return abs(self.r) ** 2


def transfer_matrix_general(q: ResonatorQuantities,
                            coupling: CouplingParams) -> TransferMatrix:
    """Transfer matrix for independent per-junction couplings.

    Z_j are rebuilt here from q.xi_j and the coupling's D_j, so q may have
    been evaluated with any (or zero) D parameters.
    """
    g = q.g
    if g == 0.0:
        raise SingularTransferError(
            "off-diagonal Green's function vanishes at this energy")
    a1, c1, d1 = coupling.a1, coupling.c1, coupling.d1
    a2, c2, d2 = coupling.a2, coupling.c2, coupling.d2
    z1 = d1 / _TWO_PI + q.xi1
    z2 = d2 / _TWO_PI + q.xi2
    dd = g * g - z1 * z2
    c1b = c1.conjugate()
    c2sq = (c2 * c2.conjugate()).real
    pre = 1j / (g * c2)
    l11 = pre * (c1 * z2 + (a1 / c1b) * dd)
    l12 = pre * (-dd / c1b)
    l21 = pre * (c2sq * (c1 - z1 * a1 / c1b) - c1 * a2 * z2
                 - (a1 * a2 / c1b) * dd)
    l22 = pre * ((a2 / c1b) * dd + c2sq * z1 / c1b)
    return TransferMatrix(l11, l12, l21, l22, q.lam)


def transfer_matrix_symmetric(q: ResonatorQuantities, a: float, c: float,
                              d: float) -> TransferMatrix:
    """Transfer matrix for equal, time-reversal-invariant couplings (real C).

    Specialization of transfer_matrix_general; det L = -1 up to rounding.
    """
    g = q.g
    if g == 0.0:
        raise SingularTransferError(
            "off-diagonal Green's function vanishes at this energy")
    if complex(c).imag != 0.0:
        raise ValueError("symmetric coupling requires real C")
    c = complex(c).real
    z1 = d / _TWO_PI + q.xi1
    z2 = d / _TWO_PI + q.xi2
    dd = g * g - z1 * z2
    csq = c * c
    pre = 1j / g
    l11 = pre * (z2 + (a / csq) * dd)
    l12 = pre * (-dd / csq)
    l21 = pre * (csq - a * (z1 + z2) - (a * a / csq) * dd)
    l22 = pre * ((a / csq) * dd + z1)
    return TransferMatrix(l11, l12, l21, l22, q.lam)


def transfer_matrix(q: ResonatorQuantities,
                    coupling: CouplingParams) -> TransferMatrix:
    """Dispatch to the symmetric form when the coupling allows it."""
    if coupling.symmetric:
        return transfer_matrix_symmetric(
            q, coupling.a1, coupling.c1.real, coupling.d1)
    return transfer_matrix_general(q, coupling)


def amplitudes(matrix: TransferMatrix, k1: float, k2: float) -> Amplitudes:
    """Solve the scattering ansatz for (r, t) at lead momenta (k1, k2)."""
    denom = (matrix.l21 - 1j * (k1 * matrix.l22 + k2 * matrix.l11)
             - k1 * k2 * matrix.l12)
    scale = (abs(matrix.l21) + k1 * abs(matrix.l22) + k2 * abs(matrix.l11)
             + k1 * k2 * abs(matrix.l12))
    if abs(denom) < 1e-14 * scale:
        raise DegenerateScatteringError(
            f"amplitude denominator vanishes at lam = {matrix.lam!r}")
    r = -(matrix.l21 + 1j * (k1 * matrix.l22 - k2 * matrix.l11)
          + k1 * k2 * matrix.l12) / denom
    t = -2j * k1 / denom
    return Amplitudes(r=r, t=t, k1=k1, k2=k2, lam=matrix.lam)


def transmission_amplitude_direct(q: ResonatorQuantities, a: float, c: float,
                                  d: float, k1: float, k2: float) -> complex:
    """Closed-form transmission amplitude for the symmetric coupling.

    Independent of the transfer-matrix assembly path (up to a constant
    phase); |t|^2 from both routes must agree.
    """
    g = q.g
    z1 = d / _TWO_PI + q.xi1
    z2 = d / _TWO_PI + q.xi2
    dd = g * g - z1 * z2
    csq = c * c
    denom = (csq - a * (z1 + z2) - (a * a / csq) * dd
             - 1j * k1 * ((a / csq) * dd + z1)
             - 1j * k2 * (z2 + (a / csq) * dd)
             + k1 * k2 * dd / csq)
    if denom == 0:
        raise DegenerateScatteringError(
            f"transmission denominator vanishes at lam = {q.lam!r}")
    return -2j * k1 * g / denom


def transmission_probability(table: ModeTable, x1, x2,
                             coupling: CouplingParams, lam: float,
                             v_g: float = 0.0,
                             config: GreensConfig | None = None) -> float:
    """|t|^2 at resonator energy lam: momenta -> resonator quantities ->
    transfer matrix -> amplitudes."""
    k1, k2 = momenta(lam, v_g)
    q = resonator_quantities(table, x1, x2, lam,
                             d1=coupling.d1, d2=coupling.d2, config=config)
    matrix = transfer_matrix(q, coupling)
    return amplitudes(matrix, k1, k2).transmission


def flux_residual(amp: Amplitudes) -> float:
    """Conserved-flux defect k1 (1 - |r|^2) - k2 |t|^2, normalized by the
    incident flux k1."""
    if amp.k1 == 0.0:
        return 0.0
    return (amp.k1 * (1.0 - abs(amp.r) ** 2)
            - amp.k2 * abs(amp.t) ** 2) / amp.k1
