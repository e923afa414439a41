"""Planar emitter arrays.

Coordinates are in units of the resonant wavelength lambda0. Grid geometries
put atom (n_x, n_y) = (1, 1) at the origin and store sites row-major in
(n_y, n_x).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .errors import ConfigInvalid, InvalidSize, NotAGrid, PeriodTooSmall

MIN_PERIOD = 0.1
_SQRT3_2 = np.sqrt(3.0) / 2.0


class Polarization(str, enum.Enum):
    SIGMA_Z = "z"
    SIGMA_PLUS = "+"
    SIGMA_MINUS = "-"

    @classmethod
    def parse(cls, text) -> "Polarization":
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower()
        aliases = {
            "z": cls.SIGMA_Z, "sigma_z": cls.SIGMA_Z, "sz": cls.SIGMA_Z,
            "+": cls.SIGMA_PLUS, "plus": cls.SIGMA_PLUS, "sigma_plus": cls.SIGMA_PLUS, "p": cls.SIGMA_PLUS,
            "-": cls.SIGMA_MINUS, "minus": cls.SIGMA_MINUS, "sigma_minus": cls.SIGMA_MINUS, "m": cls.SIGMA_MINUS,
        }
        if key not in aliases:
            raise ValueError(f"unknown polarization {text!r}")
        return aliases[key]

    @property
    def dipole_vector(self) -> np.ndarray:
        """Unit dipole vector e_d (complex 3-vector)."""
        if self is Polarization.SIGMA_Z:
            return np.array([0.0, 0.0, 1.0], dtype=complex)
        sign = 1.0 if self is Polarization.SIGMA_PLUS else -1.0
        return np.array([1.0, sign * 1j, 0.0]) / np.sqrt(2.0)

    @property
    def is_circular(self) -> bool:
        return self is not Polarization.SIGMA_Z


# alternative name used by callers
PolarizationTag = Polarization


class LatticeKind(str, enum.Enum):
    SQUARE = "square"
    DIAGONAL_SQUARE = "diagonal"
    RECTANGULAR = "rectangular"
    TRIANGLE = "triangle"
    HEXAGON = "hexagon"

    @classmethod
    def parse(cls, text) -> "LatticeKind":
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower().replace("-", "_")
        aliases = {"diagonal_square": cls.DIAGONAL_SQUARE, "diamond": cls.DIAGONAL_SQUARE,
                   "rect": cls.RECTANGULAR, "tri": cls.TRIANGLE, "hex": cls.HEXAGON}
        if key in aliases:
            return aliases[key]
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown lattice kind {text!r}")


GRID_KINDS = (LatticeKind.SQUARE, LatticeKind.RECTANGULAR)


@dataclass(frozen=True)
class LatticeDescriptor:
    """Array shape: kind, atoms per edge and periods (lambda0 units).

    `n_y` is only used by rectangular arrays (defaults to `n`); triangle and
    hexagon arrays use the nearest-neighbour spacing `period_x` only.
    """
    kind: LatticeKind
    n: int
    period_x: float
    period_y: Optional[float] = None
    n_y: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", LatticeKind.parse(self.kind))
        if self.period_y is None:
            object.__setattr__(self, "period_y", float(self.period_x))
        if self.n_y is None:
            object.__setattr__(self, "n_y", int(self.n))
        if self.kind is not LatticeKind.RECTANGULAR:
            if not np.isclose(self.period_y, self.period_x, rtol=0, atol=1e-15):
                raise ConfigInvalid("period_y", f"{self.kind.value} arrays take a single period")
            if self.n_y != self.n:
                raise ConfigInvalid("n_y", f"{self.kind.value} arrays take a single side count")

    @property
    def min_period(self) -> float:
        return min(self.period_x, self.period_y)

    @property
    def expected_count(self) -> int:
        n = self.n
        if self.kind is LatticeKind.SQUARE:
            return n * n
        if self.kind is LatticeKind.DIAGONAL_SQUARE:
            return n * n + (n - 1) * (n - 1)
        if self.kind is LatticeKind.RECTANGULAR:
            return n * self.n_y
        if self.kind is LatticeKind.TRIANGLE:
            return n * (n + 1) // 2
        return 3 * n * n - 3 * n + 1

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "n": self.n, "period_x": self.period_x,
                "period_y": self.period_y, "n_y": self.n_y}

    @classmethod
    def from_dict(cls, d: dict) -> "LatticeDescriptor":
        return cls(kind=d["kind"], n=int(d["n"]), period_x=float(d["period_x"]),
                   period_y=None if d.get("period_y") is None else float(d["period_y"]),
                   n_y=None if d.get("n_y") is None else int(d["n_y"]))


@dataclass(frozen=True, eq=False)
class AtomArray:
    """Immutable set of planar emitter positions, shape (n_tot, 2)."""
    positions: np.ndarray
    polarization: Polarization = Polarization.SIGMA_Z
    descriptor: Optional[LatticeDescriptor] = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float, copy=True)
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise ValueError("positions must have shape (n, 2)")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "polarization", Polarization.parse(self.polarization))
        if len(pos) > 1:
            nn, _ = cKDTree(pos).query(pos, k=2)
            dmin = nn[:, 1].min()
            if dmin < 1e-12:
                raise ValueError("duplicate positions")
            if self.descriptor is not None and dmin < self.descriptor.min_period - 1e-9:
                raise ValueError(f"sites closer ({dmin:.4g}) than the lattice period")

    @property
    def n_tot(self) -> int:
        return len(self.positions)

    @property
    def centroid(self) -> np.ndarray:
        return self.positions.mean(axis=0)

    @classmethod
    def from_positions(cls, positions, polarization=Polarization.SIGMA_Z) -> "AtomArray":
        return cls(positions=positions, polarization=polarization)

    def with_polarization(self, polarization) -> "AtomArray":
        return AtomArray(self.positions, polarization, self.descriptor, dict(self.metadata))


def _square_sites(nx, ny, ax, ay):
    iy, ix = np.mgrid[0:ny, 0:nx]
    return np.column_stack([ix.ravel() * ax, iy.ravel() * ay]).astype(float)


def _diamond_sites(n, a):
    r = n - 1
    pts = [(i, j) for j in range(-r, r + 1) for i in range(-r, r + 1) if abs(i) + abs(j) <= r]
    return np.array(pts, dtype=float) * a


def _triangle_sites(n, a):
    pts = [(c + row / 2.0, row * _SQRT3_2) for row in range(n) for c in range(n - row)]
    return np.array(pts, dtype=float) * a


def _hexagon_sites(n, a):
    r = n - 1
    pts = []
    for s in range(-r, r + 1):          # axial row
        for q in range(-r, r + 1):
            if abs(q + s) <= r:
                pts.append((q + s / 2.0, s * _SQRT3_2))
    return np.array(pts, dtype=float) * a


def generate_array(descriptor: LatticeDescriptor, polarization=Polarization.SIGMA_Z) -> AtomArray:
    """Build the emitter array described by `descriptor`.

    Ordering: row-major (n_y, n_x) for square/rectangular grids, rows of
    increasing y then increasing x for the other cuts.
    """
    d = descriptor
    if d.period_x <= MIN_PERIOD or d.period_y <= MIN_PERIOD:
        raise PeriodTooSmall(f"period must exceed {MIN_PERIOD} lambda0, got ({d.period_x}, {d.period_y})")
    if d.n < 2 or d.n_y < 2:
        raise InvalidSize(f"need at least 2 atoms per edge, got n={d.n}, n_y={d.n_y}")
    if d.kind in GRID_KINDS:
        pos = _square_sites(d.n, d.n_y, d.period_x, d.period_y)
    elif d.kind is LatticeKind.DIAGONAL_SQUARE:
        pos = _diamond_sites(d.n, d.period_x)
    elif d.kind is LatticeKind.TRIANGLE:
        pos = _triangle_sites(d.n, d.period_x)
    else:
        pos = _hexagon_sites(d.n, d.period_x)
    assert len(pos) == d.expected_count
    meta = {"n_parity": "even" if d.n % 2 == 0 else "odd"}
    if d.kind is LatticeKind.HEXAGON:
        meta["centering"] = "site"
    return AtomArray(pos, Polarization.parse(polarization), d, meta)


def square_array(n, period, polarization=Polarization.SIGMA_Z) -> AtomArray:
    return generate_array(LatticeDescriptor(LatticeKind.SQUARE, n, period), polarization)


def _require_grid(array: AtomArray):
    if array.descriptor is None or array.descriptor.kind not in GRID_KINDS:
        raise NotAGrid("grid indexing needs a square or rectangular array")
    return array.descriptor


def grid_index(array: AtomArray, n_x: int, n_y: int) -> int:
    """Site index of grid atom (n_x, n_y), both 1-based."""
    d = _require_grid(array)
    if not (1 <= n_x <= d.n and 1 <= n_y <= d.n_y):
        raise IndexError(f"({n_x}, {n_y}) outside {d.n}x{d.n_y} grid")
    return (n_y - 1) * d.n + (n_x - 1)


def grid_coords(array: AtomArray, index: int) -> tuple:
    """Inverse of `grid_index`: site index -> (n_x, n_y)."""
    d = _require_grid(array)
    if not 0 <= index < d.n * d.n_y:
        raise IndexError(f"site {index} outside grid")
    n_y, n_x = divmod(index, d.n)
    return n_x + 1, n_y + 1
