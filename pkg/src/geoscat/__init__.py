"""Fermion transport through geometric scatterers.

A compact 2D Dirichlet resonator (rectangle or hemiequilateral triangle)
is coupled to two 1D leads at interior points.  The package enumerates
the resonator spectrum in closed form, evaluates mode-sum Green's
functions with series regularization, assembles the junction transfer
matrix, solves for reflection/transmission amplitudes at generally
unequal lead momenta, and integrates the Landauer-Buttiker current with
resonance-aware adaptive quadrature.
"""

from .errors import (
    BelowThresholdError,
    CacheError,
    CacheFormatError,
    CacheVersionError,
    ConductanceStepError,
    ConfigError,
    DegenerateScatteringError,
    GeometryMismatchError,
    GeoscatError,
    IdenticalJunctionError,
    InsufficientSpectrumError,
    ModeCapError,
    OutsideManifoldError,
    PoleProximityError,
    QuadratureError,
    SingularTransferError,
    TailToleranceError,
)
from .greens import (
    GreensConfig,
    ResonatorQuantities,
    green_offdiagonal,
    pole_guard_width,
    resonator_quantities,
    xi,
    xi_difference,
)
from .scattering import (
    Amplitudes,
    CouplingParams,
    TransferMatrix,
    amplitudes,
    flux_residual,
    momenta,
    transfer_matrix,
    transfer_matrix_general,
    transfer_matrix_symmetric,
    transmission_amplitude_direct,
    transmission_probability,
)
from .spectral import (
    DEFAULT_MODE_CAP,
    Junction,
    Mode,
    ModeTable,
    Rectangle,
    ResonatorGeometry,
    Shifted,
    Triangle,
    cache_load,
    cache_store,
    enumerate_modes,
    eval_eigenfunction,
    weyl_counterterm_rate,
)
from .transport import (
    BathPair,
    QuadratureConfig,
    QuadratureReport,
    conductance,
    current,
    current_for_transmission,
    fermi,
    fermi_window,
    linear_response_conductance,
    zero_temperature_current,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
