"""Exception types raised by the geoscat package."""


class GeoscatError(Exception):
    """Base class for all geoscat errors."""


class OutsideManifoldError(GeoscatError, ValueError):
    """A point lies outside the resonator (or on its boundary where forbidden)."""


class ModeCapError(GeoscatError):
    """Requested enumeration would exceed the configured mode-count cap."""


class CacheError(GeoscatError):
    """Base class for mode-table cache failures."""


class CacheFormatError(CacheError):
    """Cache file is truncated, has a bad magic number, or inconsistent contents."""


class CacheVersionError(CacheError):
    """Cache file was written with an unsupported format version."""


class GeometryMismatchError(CacheError):
    """Cache file was written for a different geometry than requested."""


class PoleProximityError(GeoscatError):
    """Evaluation energy lies within the guard band of a resonator eigenvalue."""

    def __init__(self, lam, nearest):
        self.lam = lam
        self.nearest = nearest
        super().__init__(
            f"energy {lam!r} is within the pole guard of eigenvalue {nearest!r}")


class IdenticalJunctionError(GeoscatError, ValueError):
    """The two lead junctions coincide."""


class TailToleranceError(GeoscatError):
    """Requested tail tolerance is unreachable at the configured series cutoff."""

    def __init__(self, message, achieved):
        self.achieved = achieved
        super().__init__(f"{message} (achieved tail estimate {achieved:.3e})")


class SingularTransferError(GeoscatError):
    """Off-diagonal Green's function vanishes; junctions are decoupled at this energy."""


class DegenerateScatteringError(GeoscatError):
    """Amplitude denominator vanishes; scattering system is degenerate."""


class BelowThresholdError(GeoscatError, ValueError):
    """Energy below the outgoing-channel threshold (lambda < V_g / 2)."""


class InsufficientSpectrumError(GeoscatError):
    """Mode table does not cover the required energy range."""

    def __init__(self, required, available):
        self.required = required
        self.available = available
        super().__init__(
            f"mode table covers eigenvalues up to {available!r} but the "
            f"transport integral requires lambda_max >= {required!r}")


class QuadratureError(GeoscatError):
    """Adaptive quadrature failed to converge; carries the partial report."""

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class ConductanceStepError(GeoscatError):
    """Finite-difference step too large: Richardson check exceeded tolerance."""


class ConfigError(GeoscatError):
    """Run configuration is invalid or inconsistent."""
