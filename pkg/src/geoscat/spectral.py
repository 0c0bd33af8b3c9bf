"""Resonator geometries with closed-form Dirichlet spectra.

Two compact billiards are supported: the axis-aligned rectangle
[0, c1] x [0, c2] and the hemiequilateral (30-60-90) triangle with
vertices (0, 0), (0, 4*sqrt(3)) and (3, sqrt(3)).  A third variant wraps
either of them and shifts every eigenvalue by a constant gate offset.
Eigenvalues are enumerated exactly up to a cutoff and kept in an
ascending mode table, which is the unit of caching for the Green's
function machinery.  Units follow the convention hbar^2 / 2m = 1.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    CacheError,
    CacheFormatError,
    CacheVersionError,
    GeometryMismatchError,
    ModeCapError,
    OutsideManifoldError,
)

_SQRT3 = np.sqrt(3.0)
_TRI_COEF = np.pi ** 2 / 108.0
_TRI_PREF = np.sqrt(2.0) / (3.0 * 3.0 ** 0.25)
_MEMBERSHIP_TOL = 1e-12

#: Default ceiling on the number of enumerated modes (memory guard).
DEFAULT_MODE_CAP = 20_000_000

_CACHE_MAGIC = b"GSMT"
_CACHE_VERSION = 1
_RECORD_DTYPE = np.dtype([("n1", "<u4"), ("n2", "<u4"), ("lam", "<f8")])


@dataclass(frozen=True)
class Rectangle:
    """Dirichlet rectangle [0, c1] x [0, c2]."""

    c1: float
    c2: float

    def __post_init__(self):
        if not (self.c1 > 0.0 and self.c2 > 0.0):
            raise ValueError("rectangle sides must be positive")

    @property
    def area(self) -> float:
        return self.c1 * self.c2

    @property
    def perimeter(self) -> float:
        return 2.0 * (self.c1 + self.c2)

    def eigenvalue(self, n1: int, n2: int) -> float:
        return (n1 * np.pi / self.c1) ** 2 + (n2 * np.pi / self.c2) ** 2

    def contains(self, x: float, y: float, *, interior: bool = False) -> bool:
        u, v = x / self.c1, y / self.c2
        tol = _MEMBERSHIP_TOL
        if interior:
            return tol < u < 1.0 - tol and tol < v < 1.0 - tol
        return -tol <= u <= 1.0 + tol and -tol <= v <= 1.0 + tol

    def _enumerate(self, lambda_max: float, cap: int):
        s = np.sqrt(lambda_max)
        m1 = int(self.c1 * s / np.pi)
        m2 = int(self.c2 * s / np.pi)
        if m1 < 1 or m2 < 1:
            return _empty_raw()
        if m1 * m2 > 4 * cap:
            raise ModeCapError(
                f"candidate grid {m1}x{m2} exceeds mode cap {cap}")
        i = np.arange(1, m1 + 1, dtype=np.float64)
        j = np.arange(1, m2 + 1, dtype=np.float64)
        lam = (i * np.pi / self.c1)[:, None] ** 2 + ((j * np.pi / self.c2) ** 2)[None, :]
        n1 = np.broadcast_to(i.astype(np.uint32)[:, None], lam.shape)
        n2 = np.broadcast_to(j.astype(np.uint32)[None, :], lam.shape)
        keep = lam <= lambda_max
        return n1[keep], n2[keep], lam[keep]

    def _eigenfunction_values(self, n1, n2, x: float, y: float):
        amp = 2.0 / np.sqrt(self.c1 * self.c2)
        u = np.pi * x / self.c1
        v = np.pi * y / self.c2
        return amp * np.sin(n1 * u) * np.sin(n2 * v)


@dataclass(frozen=True)
class Triangle:
    """Hemiequilateral Dirichlet triangle, vertices (0,0), (0,4*sqrt(3)), (3,sqrt(3)).

    Eigenvalues are pi^2/108 * (k^2 + 3 n^2) for positive integers n > k of
    equal parity; all of them are simple.
    """

    @property
    def area(self) -> float:
        return 6.0 * _SQRT3

    @property
    def perimeter(self) -> float:
        return 6.0 + 6.0 * _SQRT3

    def eigenvalue(self, n1: int, n2: int) -> float:
        # n1 = k, n2 = n
        return _TRI_COEF * (n1 * n1 + 3.0 * (n2 * n2))

    def _barycentric(self, x: float, y: float):
        l3 = x / 3.0
        l2 = (y - _SQRT3 * l3) / (4.0 * _SQRT3)
        return 1.0 - l2 - l3, l2, l3

    def contains(self, x: float, y: float, *, interior: bool = False) -> bool:
        l1, l2, l3 = self._barycentric(x, y)
        low = min(l1, l2, l3)
        if interior:
            return low > _MEMBERSHIP_TOL
        return low >= -_MEMBERSHIP_TOL

    def _enumerate(self, lambda_max: float, cap: int):
        t = lambda_max / _TRI_COEF  # admissible iff k^2 + 3 n^2 <= t roughly
        m_n = int(np.sqrt(max(t - 1.0, 0.0) / 3.0)) + 2
        m_k = int(np.sqrt(max(t, 0.0)) / 2.0) + 2
        if m_k < 1 or m_n < 2:
            return _empty_raw()
        if m_k * m_n > 6 * cap:
            raise ModeCapError(
                f"candidate grid {m_k}x{m_n} exceeds mode cap {cap}")
        k = np.arange(1, m_k + 1, dtype=np.float64)
        n = np.arange(1, m_n + 1, dtype=np.float64)
        lam = _TRI_COEF * (((k * k)[:, None]) + 3.0 * (n * n)[None, :])
        kk = np.broadcast_to(k.astype(np.uint32)[:, None], lam.shape)
        nn = np.broadcast_to(n.astype(np.uint32)[None, :], lam.shape)
        keep = (lam <= lambda_max) & (nn > kk) & ((nn - kk) % 2 == 0)
        return kk[keep], nn[keep], lam[keep]

    def _eigenfunction_values(self, n1, n2, x: float, y: float):
        # n1 = k, n2 = n; three-term superposition over the reflection group
        k, n = n1, n2
        a1 = np.pi * x / 6.0
        b1 = np.pi * (y + 2.0 * _SQRT3) / (6.0 * _SQRT3)
        a2 = np.pi * (_SQRT3 * x - 3.0 * y) / (12.0 * _SQRT3)
        b2 = np.pi * (_SQRT3 * x + y - 4.0 * _SQRT3) / (12.0 * _SQRT3)
        a3 = np.pi * (_SQRT3 * x + 3.0 * y) / (12.0 * _SQRT3)
        b3 = np.pi * (_SQRT3 * x - y + 4.0 * _SQRT3) / (12.0 * _SQRT3)
        t1 = np.sin(n * a1) * np.sin(k * b1)
        t2 = np.sin(n * a2) * np.sin(k * b2)
        t3 = np.cos(n * a3 - np.pi / 2.0) * np.sin(k * b3)
        return _TRI_PREF * (t1 + t2 - t3)


@dataclass(frozen=True)
class Shifted:
    """Geometry decorator adding a constant gate offset to every eigenvalue."""

    inner: Rectangle | Triangle
    shift: float

    def __post_init__(self):
        if isinstance(self.inner, Shifted):
            raise ValueError("Shifted geometries do not nest")
        if not isinstance(self.inner, (Rectangle, Triangle)):
            raise TypeError("Shifted wraps a Rectangle or a Triangle")

    @property
    def area(self) -> float:
        return self.inner.area

    @property
    def perimeter(self) -> float:
        return self.inner.perimeter

    def eigenvalue(self, n1: int, n2: int) -> float:
        return self.inner.eigenvalue(n1, n2) + self.shift

    def contains(self, x: float, y: float, *, interior: bool = False) -> bool:
        return self.inner.contains(x, y, interior=interior)

    def _enumerate(self, lambda_max: float, cap: int):
        effective = lambda_max - self.shift
        if effective <= 0.0:
            return _empty_raw()
        n1, n2, lam = self.inner._enumerate(effective, cap)
        lam = lam + self.shift
        keep = lam <= lambda_max
        return n1[keep], n2[keep], lam[keep]

    def _eigenfunction_values(self, n1, n2, x: float, y: float):
        return self.inner._eigenfunction_values(n1, n2, x, y)


ResonatorGeometry = Rectangle | Triangle | Shifted


@dataclass(frozen=True)
class Mode:
    """One Dirichlet eigenpair: quantum numbers and eigenvalue.

    For a rectangle the quantum numbers are (n_x, n_y); for the triangle
    they are (k, n) with n > k and equal parity.
    """

    n1: int
    n2: int
    eigenvalue: float


@dataclass(frozen=True)
class Junction:
    """Point where a lead attaches, in the geometry's coordinate chart."""

    x: float
    y: float


def _empty_raw():
    return (np.zeros(0, dtype=np.uint32), np.zeros(0, dtype=np.uint32),
            np.zeros(0, dtype=np.float64))


def _point_xy(point) -> tuple[float, float]:
    if isinstance(point, Junction):
        return point.x, point.y
    x, y = point
    return float(x), float(y)


class ModeTable:
    """Eigenpairs of a geometry with eigenvalue <= lambda_max, sorted ascending.

    Ties are broken lexicographically by quantum numbers, and the 1-based
    position in this ordering is the index used by the regularization
    counterterm.  Instances are immutable and safe to share across threads.
    """

    def __init__(self, geometry: ResonatorGeometry, lambda_max: float,
                 n1: np.ndarray, n2: np.ndarray, eigenvalues: np.ndarray):
        self.geometry = geometry
        self.lambda_max = float(lambda_max)
        self._n1 = np.ascontiguousarray(n1, dtype=np.uint32)
        self._n2 = np.ascontiguousarray(n2, dtype=np.uint32)
        self._lam = np.ascontiguousarray(eigenvalues, dtype=np.float64)
        for arr in (self._n1, self._n2, self._lam):
            arr.setflags(write=False)
        self._counterterm_cumsum = None

    def __len__(self) -> int:
        return self._lam.size

    @property
    def count(self) -> int:
        return self._lam.size

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._lam

    @property
    def quantum_numbers(self) -> tuple[np.ndarray, np.ndarray]:
        return self._n1, self._n2

    def __getitem__(self, i: int) -> Mode:
        return Mode(int(self._n1[i]), int(self._n2[i]), float(self._lam[i]))

    def modes(self):
        for i in range(self._lam.size):
            yield self[i]

    def prefix_count(self, cutoff: float) -> int:
        """Number of modes with eigenvalue <= cutoff."""
        return int(np.searchsorted(self._lam, cutoff, side="right"))

    def nearest_eigenvalue(self, lam: float, n_limit: int | None = None) -> float:
        lams = self._lam if n_limit is None else self._lam[:n_limit]
        if lams.size == 0:
            return np.inf
        i = np.searchsorted(lams, lam)
        best = np.inf
        for j in (i - 1, i):
            if 0 <= j < lams.size and abs(lams[j] - lam) < abs(best - lam):
                best = lams[j]
        return float(best)

    def eigenfunction_values(self, point) -> np.ndarray:
        """Evaluate every tabulated eigenfunction at one point (vectorized)."""
        x, y = _point_xy(point)
        if not self.geometry.contains(x, y):
            raise OutsideManifoldError(f"point ({x}, {y}) outside the manifold")
        return self.geometry._eigenfunction_values(
            self._n1.astype(np.float64), self._n2.astype(np.float64), x, y)

    def counterterm_sum(self, n: int) -> float:
        """Partial sum of 1/(4 pi j) for j = 1..n (the Weyl counterterm)."""
        if n == 0:
            return 0.0
        if self._counterterm_cumsum is None:
            idx = np.arange(1, self._lam.size + 1, dtype=np.float64)
            self._counterterm_cumsum = np.cumsum(1.0 / (4.0 * np.pi * idx))
        return float(self._counterterm_cumsum[n - 1])


def enumerate_modes(geometry: ResonatorGeometry, lambda_max: float, *,
                    hard_cap: int = DEFAULT_MODE_CAP) -> ModeTable:
    """Enumerate all modes with eigenvalue <= lambda_max, sorted ascending.

    Exact lattice enumeration: no level below the cutoff is missed, and
    degenerate eigenvalues appear once per quantum-number pair.  Raises
    ModeCapError when the (Weyl-estimated or actual) count exceeds hard_cap.
    """
    if not lambda_max > 0.0:
        raise ValueError("lambda_max must be positive")
    weyl = geometry.area * lambda_max / (4.0 * np.pi)
    if weyl > 1.05 * hard_cap + 1000:
        raise ModeCapError(
            f"Weyl estimate {weyl:.3e} exceeds mode cap {hard_cap}")
    n1, n2, lam = geometry._enumerate(lambda_max, hard_cap)
    if lam.size > hard_cap:
        raise ModeCapError(f"{lam.size} modes exceed mode cap {hard_cap}")
    order = np.lexsort((n2, n1, lam))
    return ModeTable(geometry, lambda_max, n1[order], n2[order], lam[order])


def eval_eigenfunction(geometry: ResonatorGeometry, mode: Mode, point) -> float:
    """Evaluate a normalized eigenfunction at a point of the closed manifold.

    Eigenfunctions are real and L2-normalized to 1; Dirichlet boundary values
    vanish.  Points strictly outside the manifold are rejected.
    """
    x, y = _point_xy(point)
    if not geometry.contains(x, y):
        raise OutsideManifoldError(f"point ({x}, {y}) outside the manifold")
    return float(geometry._eigenfunction_values(
        np.float64(mode.n1), np.float64(mode.n2), x, y))


def weyl_counterterm_rate(geometry: ResonatorGeometry) -> float:
    """Asymptotic eigenvalue spacing 4 pi / |G| (diagnostics only)."""
    return 4.0 * np.pi / geometry.area


# ---------------------------------------------------------------------------
# binary cache


def _geometry_descriptor(geometry: ResonatorGeometry):
    shifted, shift, base = 0, 0.0, geometry
    if isinstance(geometry, Shifted):
        shifted, shift, base = 1, float(geometry.shift), geometry.inner
    if isinstance(base, Rectangle):
        return 1, shifted, shift, (float(base.c1), float(base.c2))
    if isinstance(base, Triangle):
        return 2, shifted, shift, ()
    raise TypeError(f"unsupported geometry {geometry!r}")


def cache_store(table: ModeTable, path) -> None:
    """Write a mode table to a little-endian binary cache file."""
    tag, shifted, shift, params = _geometry_descriptor(table.geometry)
    header = _CACHE_MAGIC + struct.pack(
        "<IIIdI", _CACHE_VERSION, tag, shifted, shift, len(params))
    header += struct.pack(f"<{len(params)}d", *params)
    header += struct.pack("<dQ", table.lambda_max, len(table))
    records = np.empty(len(table), dtype=_RECORD_DTYPE)
    n1, n2 = table.quantum_numbers
    records["n1"] = n1
    records["n2"] = n2
    records["lam"] = table.eigenvalues
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(records.tobytes())


def cache_load(path, geometry: ResonatorGeometry,
               lambda_max: float | None = None) -> ModeTable:
    """Load a mode table; round-trips are bit-exact.

    The stored geometry must match the requested one exactly.  When
    lambda_max is below the stored cutoff, the truncated prefix is
    returned; asking for more than the file holds is an error.
    """
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < 4 or raw[:4] != _CACHE_MAGIC:
        raise CacheFormatError(f"{path}: not a mode-table cache file")
    try:
        version, tag, shifted, shift, nparams = struct.unpack_from("<IIIdI", raw, 4)
        off = 4 + struct.calcsize("<IIIdI")
        params = struct.unpack_from(f"<{nparams}d", raw, off)
        off += 8 * nparams
        stored_max, count = struct.unpack_from("<dQ", raw, off)
        off += struct.calcsize("<dQ")
    except struct.error as exc:
        raise CacheFormatError(f"{path}: truncated header") from exc
    if version != _CACHE_VERSION:
        raise CacheVersionError(
            f"{path}: format version {version}, expected {_CACHE_VERSION}")
    want = _geometry_descriptor(geometry)
    if (tag, shifted, shift, params) != (want[0], want[1], want[2], tuple(want[3])):
        raise GeometryMismatchError(
            f"{path}: cached geometry descriptor {(tag, shifted, shift, params)} "
            f"does not match requested {want}")
    payload = raw[off:]
    if len(payload) != count * _RECORD_DTYPE.itemsize:
        raise CacheFormatError(
            f"{path}: expected {count} records, payload holds "
            f"{len(payload) // _RECORD_DTYPE.itemsize}")
    records = np.frombuffer(payload, dtype=_RECORD_DTYPE)
    lam = records["lam"].astype(np.float64)
    if np.any(np.diff(lam) < 0.0):
        raise CacheFormatError(f"{path}: eigenvalues not sorted")
    if lambda_max is None:
        lambda_max = stored_max
    elif lambda_max > stored_max:
        raise CacheError(
            f"{path}: stored cutoff {stored_max!r} below requested {lambda_max!r}")
    n = int(np.searchsorted(lam, lambda_max, side="right"))
    return ModeTable(geometry, lambda_max,
                     records["n1"][:n].astype(np.uint32),
                     records["n2"][:n].astype(np.uint32),
                     lam[:n])
