"""Projected free-space Green's tensor and the effective Hamiltonian.

Units: lambda0 = 1, k0 = 2*pi, Gamma0 = 1. For a fixed dipole orientation
the 3x3 tensor reduces to one scalar per atom pair:

    G(R) = e^{ix}/(4 pi R) [A(x) I + B(x) R^R^],  x = k0 R
    A = 1 + i/x - 1/x^2,    B = -1 - 3i/x + 3/x^2

For in-plane R, e_z.G.e_z = g A and e_pm^*.G.e_pm = g (A + B/2).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ZeroDisplacement
from .geometry import AtomArray, Polarization

K0 = 2.0 * np.pi
# M_ij = -COUPLING * G_proj(R_ij)
COUPLING = 3.0 * np.pi / K0


def projected_kernel(r, polarization) -> np.ndarray:
    """Vectorized e_d^*.G.e_d for in-plane distances `r` (array, r > 0)."""
    r = np.asarray(r, dtype=float)
    x = K0 * r
    inv = 1.0 / x
    a = 1.0 + 1j * inv - inv * inv
    g = np.exp(1j * x) / (4.0 * np.pi * r)
    if Polarization.parse(polarization) is Polarization.SIGMA_Z:
        return g * a
    b = -1.0 - 3j * inv + 3.0 * inv * inv
    return g * (a + 0.5 * b)


def green_projected(displacement, polarization) -> complex:
    """e_d^*.G(R).e_d for an in-plane displacement (dx, dy), lambda0 units.

    The delta-function self term is never included.
    """
    dx, dy = (float(c) for c in displacement)
    r = np.hypot(dx, dy)
    if r == 0.0:
        raise ZeroDisplacement("Green's tensor is singular at R = 0")
    return complex(projected_kernel(r, polarization))


@dataclass(frozen=True, eq=False)
class EffectiveHamiltonian:
    """(H/hbar - omega0)/Gamma0 in the single-excitation subspace."""
    matrix: np.ndarray
    array: AtomArray

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def build_hamiltonian(array: AtomArray) -> EffectiveHamiltonian:
    pos = array.positions
    d = pos[:, None, :] - pos[None, :, :]
    r = np.hypot(d[..., 0], d[..., 1])
    np.fill_diagonal(r, 1.0)
    m = -COUPLING * projected_kernel(r, array.polarization)
    np.fill_diagonal(m, -0.5j)
    # enforce exact symmetry (hypot is symmetric already, this guards rounding)
    m = 0.5 * (m + m.T)
    np.fill_diagonal(m, -0.5j)
    m.setflags(write=False)
    return EffectiveHamiltonian(m, array)


def dump_matrix(h: EffectiveHamiltonian, path) -> Path:
    """Write the matrix as CSV rows of `i,j,re,im` (debugging aid)."""
    path = Path(path)
    n = h.size
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    data = np.column_stack([i.ravel(), j.ravel(), h.matrix.real.ravel(), h.matrix.imag.ravel()])
    np.savetxt(path, data, delimiter=",", header="i,j,re,im", comments="", fmt=["%d", "%d", "%.17g", "%.17g"])
    return path
