"""Coupled-dipole scattering of focused vortex beams.

Normalized units: lambda0 = 1, k0 = 2 pi, detunings in Gamma0. The induced
dipole amplitudes x solve (d_omega I - M) x = KAPPA E_par, which reduces to
x = alpha(d_omega) E_par for one atom. Cross sections come from the optical
theorem and are quoted in units of sigma0 = 3 lambda0^2/(2 pi).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad_vec
from scipy.optimize import minimize_scalar
from scipy.special import jv

from .errors import DefectiveBasis, QuadratureNotConverged, SolveFailure
from .geometry import AtomArray
from .green import K0, EffectiveHamiltonian
from .spectrum import DEGENERACY_TOL, degenerate_clusters

ALPHA0 = 3.0 / (2.0 * K0 ** 3)
KAPPA = -0.5 * ALPHA0
SIGMA0 = 6.0 * np.pi / K0 ** 2          # 3/(2 pi) lambda0^2
NARROW_DECAY = 0.01


def polarizability(detuning):
    """alpha = -(3/(2 k0^3)) (1/2)/(d_omega + i/2), lambda0^3 units."""
    return -ALPHA0 * 0.5 / (np.asarray(detuning) + 0.5j)


@dataclass(frozen=True)
class BeamParams:
    l: int
    s: int = 1
    na: float = 1.0
    beta: float = 0.5
    amplitude: float = 1.0

    def __post_init__(self):
        if self.s not in (1, -1):
            raise ValueError("spin s must be +1 or -1")
        if not 0.0 < self.na <= 1.0:
            raise ValueError("NA must lie in (0, 1]")
        if self.beta <= 0:
            raise ValueError("beta must be positive")

    @property
    def j(self) -> int:
        return self.l + self.s

    def to_dict(self):
        return {"l": self.l, "s": self.s, "na": self.na, "beta": self.beta, "amplitude": self.amplitude}


class BeamField:
    """Focal-plane field of an aplanatic lens fed by a circularly polarized
    Laguerre-type vortex with a Gaussian pupil exp(-beta^2 sin^2(theta)/NA^2).

    Cartesian components (x, y, z) are returned for in-plane points relative
    to the beam axis at `center`. Winding: e_s part ~ e^{il phi}, e_{-s}
    part ~ e^{i(l+2s) phi}, z part ~ e^{iJ phi} with J = l + s.
    """

    def __init__(self, params: BeamParams, center=(0.0, 0.0), epsrel: float = 1e-10):
        self.params = params
        self.center = np.asarray(center, dtype=float)
        self.epsrel = epsrel
        self.peak_radius, self.peak_ez = self._find_peak()

    # radial integrals -------------------------------------------------
    def _radial(self, rho):
        p = self.params
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        tmax = np.arcsin(p.na)
        orders = (p.l, p.l + 2 * p.s, p.j)

        def f(th):
            st, ct = np.sin(th), np.cos(th)
            amp = np.exp(-(p.beta * st / p.na) ** 2) * np.sqrt(ct) * st
            arg = K0 * rho * st
            return np.concatenate([amp * (1 + ct) * jv(orders[0], arg),
                                   amp * (ct - 1) * jv(orders[1], arg),
                                   amp * st * jv(orders[2], arg)])

        val, err = quad_vec(f, 0.0, tmax, epsrel=self.epsrel, epsabs=1e-14, limit=2000)
        scale = np.max(np.abs(val)) if np.any(val) else 1.0
        if not np.isfinite(err) or err > max(1e-8 * scale, 1e-13):
            raise QuadratureNotConverged(f"cone-angle quadrature error {err:.2e}")
        n = len(rho)
        return val[:n], val[n:2 * n], val[2 * n:]

    def _find_peak(self):
        p = self.params
        rmax = (abs(p.j) + 8.0) / (K0 * p.na) * 1.5
        grid = np.linspace(0.0, rmax, 301)[1:]
        ez = np.abs(self._radial(grid)[2])
        i = int(np.argmax(ez))
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
        r = minimize_scalar(lambda x: -abs(self._radial(x)[2][0]), bounds=(lo, hi), method="bounded",
                            options={"xatol": 1e-10})
        return float(r.x), float(-r.fun) * np.sqrt(2) * np.pi * p.amplitude

    # sampling ---------------------------------------------------------
    def __call__(self, points) -> np.ndarray:
        p = self.params
        pts = np.atleast_2d(np.asarray(points, dtype=float)) - self.center
        rho = np.hypot(pts[:, 0], pts[:, 1])
        phi = np.arctan2(pts[:, 1], pts[:, 0])
        i_co, i_cr, i_z = self._radial(rho)
        a_co = np.pi * 1j ** p.l * np.exp(1j * p.l * phi) * i_co
        a_cr = np.pi * 1j ** (p.l + 2 * p.s) * np.exp(1j * (p.l + 2 * p.s) * phi) * i_cr
        e_z = -np.sqrt(2) * np.pi * 1j ** p.j * np.exp(1j * p.j * phi) * i_z
        e_s = np.array([1.0, 1j * p.s, 0.0]) / np.sqrt(2)
        e_ms = np.array([1.0, -1j * p.s, 0.0]) / np.sqrt(2)
        out = a_co[:, None] * e_s + a_cr[:, None] * e_ms
        out[:, 2] = e_z
        return p.amplitude * out

    def winding_number(self, radius: Optional[float] = None, samples: int = 720) -> int:
        r = self.peak_radius if radius is None else radius
        phi = np.linspace(0, 2 * np.pi, samples + 1)
        pts = self.center + r * np.column_stack([np.cos(phi), np.sin(phi)])
        ph = np.unwrap(np.angle(self(pts)[:, 2]))
        return int(np.rint((ph[-1] - ph[0]) / (2 * np.pi)))

    def metadata(self) -> dict:
        d = self.params.to_dict()
        d.update({"j": self.params.j, "peak_radius": self.peak_radius, "peak_ez": self.peak_ez,
                  "winding": self.winding_number(), "winding_ok": self.winding_number() == self.params.j,
                  "on_axis_ez": float(abs(self(self.center)[0, 2]))})
        return d


def bessel_beam_field(params: BeamParams, center=(0.0, 0.0)) -> BeamField:
    return BeamField(params, center)


class PlaneWave:
    """Normally incident plane wave with a fixed (complex) polarization."""

    def __init__(self, polarization_vector=(0.0, 0.0, 1.0), amplitude: float = 1.0):
        self.e = np.asarray(polarization_vector, dtype=complex)
        self.amplitude = amplitude
        self.peak_ez = abs(amplitude * self.e[2]) if self.e[2] != 0 else abs(amplitude)

    def __call__(self, points):
        n = len(np.atleast_2d(points))
        return np.tile(self.amplitude * self.e, (n, 1))


def projected_drive(array: AtomArray, field) -> np.ndarray:
    """E_par_j = e_d^* . E0(r_j)."""
    e = field(array.positions)
    return e @ array.polarization.dipole_vector.conj()


def solve_coupled_dipoles(h: EffectiveHamiltonian, drive: np.ndarray, detuning: float) -> np.ndarray:
    """Solve (d_omega I - M) x = KAPPA drive; `drive` is e_d^*.E0 per site."""
    m = h.matrix
    a = detuning * np.eye(m.shape[0]) - m
    rhs = KAPPA * np.asarray(drive, dtype=complex)
    try:
        x = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:
        raise SolveFailure(f"linear solve failed at detuning {detuning}: {exc}") from exc
    resid = np.linalg.norm(a @ x - rhs)
    if not np.all(np.isfinite(x)) or resid > 1e-10 * max(np.linalg.norm(rhs), 1e-300):
        raise SolveFailure(f"residual {resid:.2e} at detuning {detuning}")
    return x


def total_cross_section(amplitudes: np.ndarray, drive: np.ndarray, e_ref: float) -> float:
    """sigma_tot = 4 pi k0 / |E_ref|^2 sum_j Im(x_j conj(E_par_j)) (lambda0^2)."""
    return float(4 * np.pi * K0 / e_ref ** 2 * np.sum(np.imag(amplitudes * np.conj(drive))))


@dataclass(frozen=True, eq=False)
class ModalBasis:
    """Eigenvectors made bilinearly orthogonal within degenerate clusters."""
    vectors: np.ndarray       # columns Psi_n
    norms: np.ndarray         # Psi_n^T Psi_n
    eigenvalues: np.ndarray

    def coefficients(self, x: np.ndarray) -> np.ndarray:
        return (self.vectors.T @ x) / self.norms


def modal_basis(states, tol: float = DEGENERACY_TOL, min_norm: float = 1e-10) -> ModalBasis:
    v = np.column_stack([s.amplitudes for s in states]).astype(complex)
    w = np.array([s.eigenvalue for s in states])
    for cluster in degenerate_clusters(w, tol):
        if len(cluster) < 2:
            continue
        sub = v[:, cluster]
        b = sub.T @ sub
        _, u = np.linalg.eig(b)
        sub = sub @ u
        v[:, cluster] = sub / np.linalg.norm(sub, axis=0)
    norms = np.einsum("ij,ij->j", v, v)
    bad = np.abs(norms) < min_norm
    if np.any(bad):
        raise DefectiveBasis(f"bilinear norm below {min_norm:g} for modes {np.flatnonzero(bad).tolist()}")
    gram = v.T @ v
    off = np.abs(gram - np.diag(norms)).max()
    if off > 1e-8:
        raise DefectiveBasis(f"eigenvectors not bilinearly orthogonal (max off-diagonal {off:.2e})")
    return ModalBasis(v, norms, w)


def modal_cross_sections(amplitudes, basis: ModalBasis, drive, e_ref: float) -> np.ndarray:
    """sigma_n = 4 pi k0/|E_ref|^2 Im(c_n Psi_n^T conj(E_par)); sums to sigma_tot."""
    c = basis.coefficients(amplitudes)
    return 4 * np.pi * K0 / e_ref ** 2 * np.imag(c * (basis.vectors.T @ np.conj(drive)))


@dataclass(frozen=True, eq=False)
class ScatteringSpectrum:
    detunings: np.ndarray
    total: np.ndarray          # sigma_tot / sigma0
    modal: np.ndarray          # (n_modes, n_grid) sigma_n / sigma0
    states: list
    meta: dict = field(default_factory=dict)

    def max_modal_mismatch(self) -> float:
        s = self.modal.sum(axis=0)
        return float(np.max(np.abs(s - self.total) / np.maximum(np.abs(self.total), 1e-300)))


@dataclass(frozen=True)
class ModalPeak:
    mode: int
    center: float
    height: float              # sigma_n / sigma0 at the peak
    detuning: float            # eigen-detuning of the mode
    decay: float


class Scatterer:
    """Array + beam bundle: cached drive, reference field and modal basis."""

    def __init__(self, h: EffectiveHamiltonian, field, states):
        self.h = h
        self.field = field
        self.states = states
        self.drive = projected_drive(h.array, field)
        self.e_ref = field.peak_ez
        self.basis = modal_basis(states)

    def amplitudes(self, detuning):
        return solve_coupled_dipoles(self.h, self.drive, detuning)

    def total(self, detuning):
        return total_cross_section(self.amplitudes(detuning), self.drive, self.e_ref) / SIGMA0

    def modal(self, detuning):
        x = self.amplitudes(detuning)
        return modal_cross_sections(x, self.basis, self.drive, self.e_ref) / SIGMA0

    def spectrum(self, detunings) -> ScatteringSpectrum:
        det = np.asarray(detunings, dtype=float)
        tot = np.empty(len(det))
        mod = np.empty((len(self.states), len(det)))
        for i, d in enumerate(det):
            x = self.amplitudes(d)
            tot[i] = total_cross_section(x, self.drive, self.e_ref) / SIGMA0
            mod[:, i] = modal_cross_sections(x, self.basis, self.drive, self.e_ref) / SIGMA0
        return ScatteringSpectrum(det, tot, mod, self.states, {"sigma0": SIGMA0, "e_ref": self.e_ref})

    def modal_peak(self, n: int) -> ModalPeak:
        st = self.states[n]
        half = 3.0 * st.decay
        r = minimize_scalar(lambda d: -self.modal(d)[n], bounds=(st.detuning - half, st.detuning + half),
                            method="bounded", options={"xatol": 1e-4 * st.decay})
        return ModalPeak(n, float(r.x), float(-r.fun), st.detuning, st.decay)

    def narrow_peaks(self, narrow: float = NARROW_DECAY) -> list:
        """Refined peaks of every mode with decay below `narrow`, tallest first."""
        peaks = [self.modal_peak(n) for n, s in enumerate(self.states) if s.decay < narrow]
        return sorted(peaks, key=lambda p: -p.height)
