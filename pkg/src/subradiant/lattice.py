"""Dipole sums C(k) = sum_{R != 0} e_d^*.G(R).e_d e^{i k.R} on infinite 2D lattices.

Two engines:

* `dipole_sum_poisson_z`: Poisson-resummed rows along y (sigma_z only).
* `dipole_sum_damped_direct`: real-space sum with an e^{-eta R} regulator
  extrapolated to eta -> 0 by polynomial (Neville) extrapolation.

The Bloch band of H follows as

    d_omega(k) = -(3 pi/k0) Re C(k),   gamma(k) = 1 + (6 pi/k0) Im C(k)

so Im C = -k0/(6 pi) for guided (below light line) modes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import k0 as bessel_k0, k1 as bessel_k1

from .errors import AnomalyProximity, ExtrapolationUnstable, TruncationNotConverged
from .geometry import Polarization
from .green import COUPLING, K0, projected_kernel
from .special import ZETA3, polylog_unit

DEFAULT_ETAS = tuple(np.array([0.05, 0.04, 0.03, 0.025, 0.02, 0.015]) * K0)
DEFAULT_CUT = 25.0


@dataclass(frozen=True)
class BlochVector:
    kx: float
    ky: float

    def reduce(self, ax: float, ay: float) -> "BlochVector":
        """Image in the first Brillouin zone [-pi/ax, pi/ax) x [-pi/ay, pi/ay)."""
        bx, by = 2 * np.pi / ax, 2 * np.pi / ay
        return BlochVector(self.kx - bx * np.floor(self.kx / bx + 0.5),
                           self.ky - by * np.floor(self.ky / by + 0.5))

    @property
    def norm(self) -> float:
        return float(np.hypot(self.kx, self.ky))

    def as_array(self):
        return np.array([self.kx, self.ky])


@dataclass(frozen=True)
class DipoleSum:
    value: complex
    method: str
    k: BlochVector
    period_x: float
    period_y: float
    polarization: Polarization
    error: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class DispersionSample:
    k: BlochVector
    detuning: float
    decay: float
    below_light_line: bool
    s: float = 0.0
    gap: bool = False
    note: str = ""
    error: float = 0.0         # uncertainty of decay/detuning from the sum's error estimate


def high_symmetry_point(name: str, ax: float, ay: float) -> BlochVector:
    pts = {"G": (0.0, 0.0), "X": (np.pi / ax, 0.0), "M": (np.pi / ax, np.pi / ay),
           "Y": (0.0, np.pi / ay)}
    key = {"GAMMA": "G", "Γ": "G"}.get(name.upper(), name.upper())
    return BlochVector(*pts[key])


def is_guided(k: BlochVector, ax: float, ay: float) -> bool:
    """True when every diffraction order is evanescent (|k + G| > k0 for all G)."""
    return _min_order_norm(k, ax, ay) > K0


def _min_order_norm(k, ax, ay):
    kr = k.reduce(ax, ay)
    m = np.arange(-2, 3)
    gx = kr.kx + 2 * np.pi * m[:, None] / ax
    gy = kr.ky + 2 * np.pi * m[None, :] / ay
    return float(np.hypot(gx, gy).min())


def anomaly_distances(k: BlochVector, ax: float, ay: float) -> tuple:
    """(row-x, row-y, lattice) distances from diffraction thresholds.

    The row distances are where |k_x + 2 pi m/a_x| (resp. k_y) equals k0, the
    singular points of the row-resummed formula; the lattice distance is
    where a 2D order |k + G| crosses the light circle (physical anomaly).
    """
    kr = k.reduce(ax, ay)
    mmax = int(np.ceil(K0 * max(ax, ay) / (2 * np.pi))) + 2
    m = np.arange(-mmax, mmax + 1)
    kxm = kr.kx + 2 * np.pi * m / ax
    kyn = kr.ky + 2 * np.pi * m / ay
    dx = float(np.abs(np.abs(kxm) - K0).min())
    dy = float(np.abs(np.abs(kyn) - K0).min())
    d2 = float(np.abs(np.hypot(kxm[:, None], kyn[None, :]) - K0).min())
    return dx, dy, d2


def anomaly_distance(k: BlochVector, ax: float, ay: float) -> float:
    """Distance from the nearest threshold seen by the Poisson formula."""
    dx, _, d2 = anomaly_distances(k, ax, ay)
    return min(dx, d2)


def _sqrt_out(x):
    """Outgoing branch: sqrt(x) for x >= 0, -i sqrt(|x|) for x < 0."""
    x = np.asarray(x, dtype=float)
    r = np.sqrt(np.abs(x))
    return np.where(x >= 0, r + 0j, -1j * r)


def dipole_sum_poisson_z(k: BlochVector, ax: float, ay: Optional[float] = None,
                         tolerance: float = 1e-11, margin: Optional[float] = None,
                         chunk: int = 4096, max_terms: int = 1 << 21) -> DipoleSum:
    """Poisson-resummed sigma_z dipole sum.

    Rows along x are summed in closed form through Li_1..Li_3, the remaining
    lattice sum over rows is Poisson-transformed: evanescent orders give
    Macdonald functions, propagating orders a slowly convergent series whose
    asymptotic 1/n and 1/n^3 parts are subtracted analytically (zeta(3)).
    """
    ay = ax if ay is None else ay
    if margin is None:
        margin = 1e-4 * 2 * np.pi / min(ax, ay)
    kr = k.reduce(ax, ay)
    kx, ky = kr.kx, kr.ky
    dist = anomaly_distance(kr, ax, ay)
    if dist < margin:
        raise AnomalyProximity(dist, margin)

    # rows through the origin (n = 0 row)
    part1 = 0j
    for eps in (1.0, -1.0):
        th = ax * (K0 + eps * kx)
        part1 += (polylog_unit(1, th) + 1j / (K0 * ax) * polylog_unit(2, th)
                  - polylog_unit(3, th) / (K0 * ax) ** 2)
    part1 /= 4 * np.pi * ax

    log_tol = -np.log(tolerance * 1e-3)
    mmax = int(np.ceil(ax / (2 * np.pi * ay) * log_tol + abs(kx) * ax / (2 * np.pi))) + 2
    part2 = 0.0
    part3 = 0j
    n_used = 0
    tail = 0.0
    pref3 = 1.0 / (2 * np.pi * ax * K0 ** 2)
    for m in range(-mmax, mmax + 1):
        kxm = kx + 2 * np.pi * m / ax
        p2 = kxm * kxm - K0 * K0
        if p2 > 0:
            p = np.sqrt(p2)
            nmax = int(np.ceil((log_tol + 10) / (p * ay))) + 1
            n = np.arange(1, nmax + 1, dtype=float)
            x = p * ay * n
            part2 += np.sum((K0 ** 2 * bessel_k0(x) - p / (ay * n) * bessel_k1(x)) * np.cos(ky * n * ay))
            continue
        p = -1j * np.sqrt(-p2)
        q = 4 * K0 ** 2 * (2 * ky ** 2 - p2) + p2 * (4 * ky ** 2 - p2)
        g0 = complex(_sqrt_out(p2 + ky ** 2))
        s = ((K0 ** 2 + p2 / 2) * (np.log(p * ay / (4 * np.pi)) + np.euler_gamma)
             - p2 / 4 - ky ** 2 / 2 - np.pi ** 2 / (3 * ay ** 2)
             + ZETA3 * ay ** 2 * q / (32 * np.pi ** 2) + np.pi / ay * (g0 + K0 ** 2 / g0))
        start = 1
        acc = 0j
        while True:
            n = np.arange(start, start + chunk, dtype=float)
            sp = np.abs(ky + 2 * np.pi * n / ay)
            sm = np.abs(ky - 2 * np.pi * n / ay)
            gp = _sqrt_out(p2 + sp * sp)
            gm = _sqrt_out(p2 + sm * sm)
            res = (np.pi / ay * (p2 / (gp + sp) + p2 / (gm + sm) + K0 ** 2 / gp + K0 ** 2 / gm)
                   - (K0 ** 2 + p2 / 2) / n - ay ** 2 * q / (32 * np.pi ** 2 * n ** 3))
            acc += np.sum(res[::-1])
            last = n[-1]
            tail_here = abs(res[-1]) * last / 4.0 * pref3
            if tail_here < tolerance:
                break
            start += chunk
            if start > max_terms:
                raise TruncationNotConverged(f"propagating-order series not converged after {max_terms} terms")
            chunk *= 2
        n_used = max(n_used, int(last))
        tail += tail_here
        part3 += s + acc
    value = part1 + part2 / (np.pi * ax * K0 ** 2) + part3 * pref3
    meta = {"m_range": [-mmax, mmax], "n_max": n_used, "tail_bound": tail, "anomaly_distance": dist}
    return DipoleSum(complex(value), "poisson_z", k, ax, ay, Polarization.SIGMA_Z, tail, meta)


def neville_table(x: Sequence[float], y: Sequence[complex]) -> list:
    """Neville table of polynomial extrapolants to x = 0; tab[k][i] uses points i..i+k."""
    x = list(map(float, x))
    p = [complex(v) for v in y]
    tab = [p]
    n = len(p)
    for k in range(1, n):
        prev = tab[-1]
        tab.append([(x[i + k] * prev[i] - x[i] * prev[i + 1]) / (x[i + k] - x[i]) for i in range(n - k)])
    return tab


def damped_partial_sums(k: BlochVector, polarization, ax: float, ay: float,
                        etas: Sequence[float], r_max: float, rows_per_chunk: int = 64) -> np.ndarray:
    """sum_{0 < R <= r_max} e^{-eta R} G_proj(R) e^{ik.R} for each eta.

    Uses G(R) = G(-R): a half-plane sum with weight 2 cos(k.R).
    """
    etas = np.asarray(etas, dtype=float)
    pol = Polarization.parse(polarization)
    nx = int(r_max / ax) + 1
    ny = int(r_max / ay) + 1
    i = np.arange(-nx, nx + 1)
    x_all = i * ax
    out = np.zeros(len(etas), dtype=complex)
    # row j = 0, i > 0
    xs = np.arange(1, nx + 1) * ax
    xs = xs[xs <= r_max]
    out += _weighted(xs, np.zeros_like(xs), k, pol, etas)
    for j0 in range(1, ny + 1, rows_per_chunk):
        j = np.arange(j0, min(j0 + rows_per_chunk, ny + 1))
        X, Y = np.meshgrid(x_all, j * ay)
        R2 = X * X + Y * Y
        mask = R2 <= r_max * r_max
        if not mask.any():
            break
        out += _weighted(X[mask], Y[mask], k, pol, etas)
    return out


def _weighted(x, y, k, pol, etas):
    r = np.hypot(x, y)
    g = projected_kernel(r, pol) * (2.0 * np.cos(k.kx * x + k.ky * y))
    w = np.exp(-np.outer(etas, r))
    return w @ g


def dipole_sum_damped_direct(k: BlochVector, polarization, ax: float, ay: Optional[float] = None,
                             etas: Sequence[float] = DEFAULT_ETAS, r_max: Optional[float] = None) -> DipoleSum:
    """Damped real-space sum extrapolated to zero damping.

    `etas` must be strictly decreasing (units 1/lambda0). The error estimate
    is the gap between the full extrapolant and the one that drops the
    largest eta.
    """
    ay = ax if ay is None else ay
    etas = np.asarray(etas, dtype=float)
    if len(etas) < 2 or np.any(np.diff(etas) >= 0) or etas[-1] <= 0:
        raise ValueError("eta sequence must be positive and strictly decreasing")
    if r_max is None:
        r_max = DEFAULT_CUT / etas[-1]
    sums = damped_partial_sums(k, polarization, ax, ay, etas, r_max)
    tab = neville_table(etas, sums)
    best = tab[-1][0]
    # extrapolants built from the smallest etas, increasing order
    chain = np.array([tab[j][-1] for j in range(len(tab))])
    diffs = np.abs(np.diff(chain))
    err = float(abs(tab[-1][0] - tab[-2][-1]))
    if not np.isfinite(best) or (len(diffs) > 1 and diffs[-1] > diffs[0]):
        raise ExtrapolationUnstable(f"non-converging extrapolation, differences {diffs}")
    meta = {"etas": etas.tolist(), "r_max": float(r_max), "raw": [complex(s) for s in sums]}
    return DipoleSum(complex(best), "damped_direct", k, ax, ay, Polarization.parse(polarization), err, meta)


def dipole_sum(k: BlochVector, polarization, ax: float, ay: Optional[float] = None,
               method: str = "auto", **kw) -> DipoleSum:
    pol = Polarization.parse(polarization)
    if method == "auto":
        method = "auto_z" if pol is Polarization.SIGMA_Z else "damped_direct"
    if method == "poisson_z":
        if pol is not Polarization.SIGMA_Z:
            raise ValueError("the Poisson engine covers sigma_z only")
        return dipole_sum_poisson_z(k, ax, ay, **kw)
    if method == "auto_z":
        return _poisson_with_fallback(k, ax, ax if ay is None else ay, **kw)
    return dipole_sum_damped_direct(k, pol, ax, ay, **kw)


def _poisson_with_fallback(k, ax, ay, **kw):
    """Poisson sum, rotated to the other row direction or replaced by the
    damped direct sum when k sits on a row-formula (non-physical) singularity."""
    margin = kw.get("margin") or 1e-4 * 2 * np.pi / min(ax, ay)
    dx, dy, d2 = anomaly_distances(k, ax, ay)
    if d2 < margin:
        raise AnomalyProximity(d2, margin)
    if dx >= margin:
        return dipole_sum_poisson_z(k, ax, ay, **kw)
    if dy >= margin:
        c = dipole_sum_poisson_z(BlochVector(k.ky, k.kx), ay, ax, **kw)
        meta = dict(c.meta, rows="y")
        return DipoleSum(c.value, c.method, k, ax, ay, c.polarization, c.error, meta)
    return dipole_sum_damped_direct(k, Polarization.SIGMA_Z, ax, ay)


def dispersion_at(c: DipoleSum, s: float = 0.0) -> DispersionSample:
    det = -COUPLING * c.value.real
    dec = 1.0 + 2.0 * COUPLING * c.value.imag
    return DispersionSample(c.k, float(det), float(dec), is_guided(c.k, c.period_x, c.period_y), s,
                            error=float(2.0 * COUPLING * c.error))


GAP_ERROR = 1e-3


def _gap(k, ax, ay, s, note):
    return DispersionSample(k, float("nan"), float("nan"), is_guided(k, ax, ay), s, True, note)


def _sample(k, s, polarization, ax, ay, method, kw):
    try:
        out = dispersion_at(dipole_sum(k, polarization, ax, ay, method=method, **kw), s)
    except (AnomalyProximity, ExtrapolationUnstable) as exc:
        return _gap(k, ax, ay, s, type(exc).__name__)
    if out.error > GAP_ERROR:
        return _gap(k, ax, ay, s, f"unconverged (error {out.error:.1e})")
    return out


def path_points(path: str, ax: float, ay: float, samples_per_segment: int):
    """(s, BlochVector) along a path such as 'GXMG'."""
    names = [p for p in path.upper().replace("Γ", "G")]
    corners = [high_symmetry_point(p, ax, ay) for p in names]
    out = []
    s0 = 0.0
    for seg, (a, b) in enumerate(zip(corners[:-1], corners[1:])):
        length = np.hypot(b.kx - a.kx, b.ky - a.ky)
        last = seg == len(corners) - 2
        ts = np.linspace(0.0, 1.0, samples_per_segment + 1)
        if not last:
            ts = ts[:-1]
        for t in ts:
            out.append((s0 + t * length, BlochVector(a.kx + t * (b.kx - a.kx), a.ky + t * (b.ky - a.ky))))
        s0 += length
    return out


def dispersion_path(period: float, polarization, path: str = "GXMG", samples_per_segment: int = 50,
                    period_y: Optional[float] = None, method: str = "auto", executor=None, **kw) -> list:
    """Band along a high-symmetry path.

    Samples too close to a diffraction threshold, or whose damped-sum
    extrapolation does not settle (error above GAP_ERROR, typically just
    off the light line), come back with `gap=True` and NaN values.
    """
    ay = period if period_y is None else period_y
    pts = path_points(path, period, ay, samples_per_segment)

    def one(item):
        s, k = item
        return _sample(k, s, polarization, period, ay, method, kw)

    mapper = map if executor is None else executor.map
    return list(mapper(one, pts))


def dispersion_grid(period: float, polarization, samples: int = 41, method: str = "auto",
                    executor=None, **kw) -> list:
    """Band over the irreducible wedge 0 <= ky <= kx <= pi/a of the square lattice."""
    kmax = np.pi / period
    ks = np.linspace(0.0, kmax, samples)
    pts = [BlochVector(kx, ky) for kx in ks for ky in ks if ky <= kx + 1e-15]

    def one(k):
        return _sample(k, 0.0, polarization, period, period, method, kw)

    mapper = map if executor is None else executor.map
    return list(mapper(one, pts))


def curvature_at_m(period: float, polarization, h: float = 0.05, method: str = "auto", **kw) -> float:
    """d^2(d_omega)/dk^2 along Gamma-M at M.

    Uses M, M - h*GM and M - 2h*GM and the even fit c0 + c2 d^2 + c4 d^4
    (d_omega is even about M); returns 2*c2.
    """
    km = np.pi / period
    vals = []
    for t in (1.0, 1.0 - h, 1.0 - 2 * h):
        c = dipole_sum(BlochVector(t * km, t * km), polarization, period, period, method=method, **kw)
        vals.append(-COUPLING * c.value.real)
    d = h * km * np.sqrt(2.0)
    a = np.array([[1, 0, 0], [1, d ** 2, d ** 4], [1, 4 * d ** 2, 16 * d ** 4]])
    return float(2.0 * np.linalg.solve(a, vals)[1])


def find_flat_band_period(polarization, search: tuple = (0.15, 0.45), step: float = 0.02,
                          tol: float = 1e-4, h: float = 0.05, method: str = "auto", record=None,
                          **kw) -> Optional[float]:
    """Period where the band curvature at M changes sign, or None.

    Scans the range on a grid; the sign change closest to the top of the
    range is refined by bisection. Pass a list as `record` to receive the
    (period, curvature) scan.
    """
    lo, hi = search
    if not (0.1 < lo < hi < 0.5):
        raise ValueError("search range must lie within (0.1, 0.5)")
    grid = np.unique(np.append(np.arange(lo, hi, step), hi))
    curv = [curvature_at_m(a, polarization, h, method, **kw) for a in grid]
    if record is not None:
        record.extend(zip(grid.tolist(), curv))
    bracket = None
    for i in range(len(grid) - 1, 0, -1):
        if np.sign(curv[i]) != np.sign(curv[i - 1]):
            bracket = (grid[i - 1], grid[i], curv[i - 1])
            break
    if bracket is None:
        return None
    a, b, fa = bracket
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = curvature_at_m(mid, polarization, h, method, **kw)
        if np.sign(fm) == np.sign(fa):
            a, fa = mid, fm
        else:
            b = mid
    return float(0.5 * (a + b))
