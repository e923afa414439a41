"""Period sweeps, mode tracking, period optimization, scaling fits,
rectangular deformation and corner-amplitude asymptotics."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import NoInteriorMinimum, TrackingLost
from .geometry import LatticeDescriptor, LatticeKind, Polarization, generate_array
from .green import build_hamiltonian
from .spectrum import degenerate_clusters, diagonalize, target_vector

log = logging.getLogger(__name__)

TRACK_THRESHOLD = 0.5
MAX_SIDE = 30


def _states_for(kind, n, polarization, period, period_y=None):
    kind = LatticeKind.parse(kind)
    d = LatticeDescriptor(kind, n, period, period_y if kind is LatticeKind.RECTANGULAR else None)
    return diagonalize(build_hamiltonian(generate_array(d, polarization)))


def _map(executor, fn, items):
    items = list(items)
    if executor is None:
        return [fn(x) for x in items]
    return list(executor.map(fn, items))


@dataclass
class TrackedBranch:
    label: str
    parameters: np.ndarray
    states: list
    overlaps: np.ndarray
    splits: list = field(default_factory=list)

    @property
    def decays(self) -> np.ndarray:
        return np.array([s.decay for s in self.states])

    @property
    def detunings(self) -> np.ndarray:
        return np.array([s.detuning for s in self.states])

    @property
    def irreps(self) -> list:
        return [s.irrep for s in self.states]

    def minimum(self):
        """(parameter, decay, interior?) of the smallest decay on the branch."""
        g = self.decays
        i = int(np.argmin(g))
        return float(self.parameters[i]), float(g[i]), 0 < i < len(g) - 1

    def sorted(self) -> "TrackedBranch":
        o = np.argsort(self.parameters, kind="stable")
        return TrackedBranch(self.label, self.parameters[o], [self.states[i] for i in o],
                             self.overlaps[o], list(self.splits))


def _vectors(states):
    return np.column_stack([s.amplitudes for s in states])


def track(state_lists: Sequence[list], parameters: Sequence[float], seed: np.ndarray,
          label: str = "", threshold: float = TRACK_THRESHOLD, strict: bool = False) -> TrackedBranch:
    """Follow a state through consecutive spectra by maximal |unconjugated overlap|.

    `seed` selects the state at the first parameter. Steps whose best overlap
    falls below `threshold` are recorded as splits (or raise if `strict`).
    """
    ref = np.asarray(seed)
    picked, ovs, splits = [], [], []
    for p, states in zip(parameters, state_lists):
        ov = np.abs(ref @ _vectors(states))
        ov = ov / (np.linalg.norm(ref) or 1.0)
        j = int(np.argmax(ov))
        if picked and ov[j] < threshold:
            if strict:
                raise TrackingLost(p, ov[j])
            splits.append(float(p))
        picked.append(states[j])
        ovs.append(float(ov[j]))
        ref = states[j].amplitudes
    if not label and picked:
        s0 = picked[0]
        harm = s0.dominant_harmonics[0][0] if s0.dominant_harmonics else None
        label = s0.irrep + (f" psi{harm}" if harm else "")
    return TrackedBranch(label, np.asarray(parameters, dtype=float), picked, np.array(ovs), splits)


def _singlet_seeds(states, count):
    """The `count` lowest-decay non-degenerate states."""
    w = np.array([s.eigenvalue for s in states])
    single = {c[0] for c in degenerate_clusters(w) if len(c) == 1}
    return [s for i, s in enumerate(states) if i in single][:count]


def period_sweep(kind, n: int, polarization, periods: Sequence[float], seeds=None, n_branches: int = 2,
                 threshold: float = TRACK_THRESHOLD, executor=None) -> list:
    """Track branches downward in period from the top of `periods`.

    `seeds` may name branch targets ('NN', 'NN-2-'), give vectors, or be None
    for the `n_branches` most subradiant non-degenerate states at the top.
    """
    ps = np.sort(np.asarray(periods, dtype=float))[::-1]
    if ps[-1] <= 0.1 or ps[0] >= 0.6:
        raise ValueError("period range must lie within (0.1, 0.6)")
    lists = _map(executor, lambda a: _states_for(kind, n, polarization, a), ps)
    if seeds is None:
        seed_vecs = [(s.amplitudes, "") for s in _singlet_seeds(lists[0], n_branches)]
    else:
        seed_vecs = [(target_vector(n, s), s) if isinstance(s, str) else (np.asarray(s), "") for s in seeds]
    return [track(lists, ps, v, lab, threshold) for v, lab in seed_vecs]


def crossing_period(upper: TrackedBranch, lower: TrackedBranch) -> Optional[float]:
    """Largest parameter where `lower` stops being less lossy than `upper`.

    Both branches must share the parameter grid. Interpolates log-decay.
    """
    p = upper.parameters
    d = np.log(lower.decays) - np.log(upper.decays)   # > 0 while upper is most subradiant
    order = np.argsort(p)[::-1]
    for a, b in zip(order[:-1], order[1:]):
        if d[a] > 0 >= d[b]:
            return float(p[a] + (p[b] - p[a]) * d[a] / (d[a] - d[b]))
    return None


@dataclass(frozen=True)
class OptimumResult:
    period: float
    decay: float
    coarse_period: float
    coarse_decay: float
    target: str


def optimize_period(kind, n: int, polarization, target: Optional[str] = "NN", search=(0.26, 0.34),
                    step: float = 0.002, tol: float = 1e-4, executor=None) -> OptimumResult:
    """Period minimizing the decay of a tracked branch (or of the global
    minimum when `target` is None): coarse scan, then golden-section."""
    lo, hi = search
    grid = np.arange(hi, lo - 1e-12, -step)
    lists = _map(executor, lambda a: _states_for(kind, n, polarization, a), grid)
    if target is None:
        picked = [st[0] for st in lists]
        g = np.array([s.decay for s in picked])
    else:
        br = track(lists, grid, target_vector(n, target), target)
        picked, g = br.states, br.decays
    i = int(np.argmin(g))
    if i == 0 or i == len(g) - 1:
        raise NoInteriorMinimum(float(grid[i]), float(g[i]))
    ref = picked[i].amplitudes

    def f(a):
        st = _states_for(kind, n, polarization, a)
        if target is None:
            return st[0].decay
        j = int(np.argmax(np.abs(ref @ _vectors(st))))
        return st[j].decay

    a0, a1, a2 = grid[i + 1], grid[i], grid[i - 1]
    r = minimize_scalar(f, bracket=(a0, a1, a2), method="golden",
                        options={"xtol": tol / (a0 + a2)})
    a_opt, g_opt = float(r.x), float(r.fun)
    if g_opt > g[i]:
        a_opt, g_opt = float(a1), float(g[i])
    return OptimumResult(a_opt, g_opt, float(a1), float(g[i]), target or "min")


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    prefactor: float
    residual: float            # RMS of log10 residuals (decades)
    n_tot_range: tuple

    @property
    def meaningful(self) -> bool:
        return self.residual < 0.2

    def to_dict(self):
        return {"exponent": self.exponent, "prefactor": self.prefactor, "residual_decades": self.residual,
                "n_tot_range": list(self.n_tot_range), "meaningful": self.meaningful}


def fit_power_law(x, y, skip: int = 0) -> PowerLawFit:
    """Least-squares fit of log10 y = log10 A + p log10 x over x[skip:]."""
    x = np.asarray(x, dtype=float)[skip:]
    y = np.asarray(y, dtype=float)[skip:]
    lx, ly = np.log10(x), np.log10(y)
    p, c = np.polyfit(lx, ly, 1)
    res = ly - (p * lx + c)
    return PowerLawFit(float(p), float(10 ** c), float(np.sqrt(np.mean(res ** 2))), (float(x[0]), float(x[-1])))


@dataclass(frozen=True)
class ScalingRow:
    geometry: str
    n: int
    n_tot: int
    period: float
    gamma_min: float
    branch: str


@dataclass(frozen=True)
class ScalingResult:
    rows: list
    fit: PowerLawFit
    skip: int


def _branch_decay(states, n, branch):
    if branch == "min":
        return states[0].decay
    t = target_vector(n, branch)
    j = int(np.argmax(np.abs(t @ _vectors(states))))
    return states[j].decay


def scaling_sweep(kind, polarization, ns: Sequence[int], period: float = 0.4, optimize: bool = False,
                  branch: str = "min", search=(0.26, 0.34), skip: int = 2, executor=None) -> ScalingResult:
    """Minimal decay of a branch versus array size, with a log-log fit.

    `branch` is 'min' (least lossy state overall), 'A2/B1' (psi^(N,N-2)-) or
    'A1/B2' (psi^(N,N)); the named branches need square arrays.
    """
    ns = list(ns)
    if len(ns) < 4 or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("need at least four ascending sizes")
    if max(ns) > MAX_SIDE:
        log.warning("sizes above N = %d are beyond the desk-scale default", MAX_SIDE)
    kind = LatticeKind.parse(kind)
    target = None if branch == "min" else branch

    def one(n):
        if optimize:
            r = optimize_period(kind, n, polarization, target, search)
            a, g = r.period, r.decay
        else:
            a = period
            g = _branch_decay(_states_for(kind, n, polarization, a), n, branch)
        n_tot = LatticeDescriptor(kind, n, a).expected_count
        return ScalingRow(kind.value, n, n_tot, a, g, branch)

    rows = _map(executor, one, ns)
    fit = fit_power_law([r.n_tot for r in rows], [r.gamma_min for r in rows], skip)
    return ScalingResult(rows, fit, skip)


@dataclass(frozen=True)
class CornerRow:
    n: int
    q0: float
    corner_nn: float        # |psi^(N,N)_{1,1}|
    corner_nn2: float       # |psi^(N-2,N)-_{1,2}|


def corner_values(n: int) -> tuple:
    """Closed forms for the corner amplitudes of the two branch harmonics."""
    q0 = np.pi / (n + 1)
    nn = 2.0 / (n + 1) * np.sin(q0) ** 2
    nn2 = -(np.sqrt(2) / np.pi) * q0 * (np.sin(q0) * np.sin(6 * q0) - np.sin(3 * q0) * np.sin(2 * q0))
    return q0, nn, nn2


def corner_asymptotics(ns: Sequence[int], skip: int = 2):
    """Table of corner amplitudes and their fitted powers in q0 (fit drops
    the `skip` smallest N, as for the scaling fits)."""
    rows = []
    for n in ns:
        if n % 2 or n < 6:
            raise ValueError("corner asymptotics need even N >= 6")
        q0, nn, nn2 = corner_values(n)
        rows.append(CornerRow(n, q0, abs(nn), abs(nn2)))
    rows.sort(key=lambda r: r.n)
    q = [r.q0 for r in rows]
    return (rows, fit_power_law(q, [r.corner_nn for r in rows], skip),
            fit_power_law(q, [r.corner_nn2 for r in rows], skip))


def deformation_sweep(n: int, period_x: float, ratios: Sequence[float], polarization=Polarization.SIGMA_Z,
                      targets=("NN-2-", "NN"), threshold: float = TRACK_THRESHOLD, executor=None) -> dict:
    """Track branches of an N x N rectangular array as a_y/a_x moves away from 1.

    Returns {target: (TrackedBranch over ratio, amplification = decay/decay(1))}.
    """
    rs = np.unique(np.append(np.asarray(ratios, dtype=float), 1.0))
    up = rs[rs >= 1.0]
    down = rs[rs <= 1.0][::-1]
    lists = dict(zip(rs, _map(executor, lambda r: _states_for(LatticeKind.RECTANGULAR, n, polarization,
                                                             period_x, period_x * r), rs)))
    out = {}
    for t in targets:
        seed = target_vector(n, t)
        b_up = track([lists[r] for r in up], up, seed, t, threshold)
        b_dn = track([lists[r] for r in down], down, seed, t, threshold)
        params = np.concatenate([b_dn.parameters[::-1], b_up.parameters[1:]])
        states = b_dn.states[::-1] + b_up.states[1:]
        ovs = np.concatenate([b_dn.overlaps[::-1], b_up.overlaps[1:]])
        br = TrackedBranch(t, params, states, ovs, b_dn.splits + b_up.splits)
        g1 = b_up.states[0].decay
        out[t] = (br, br.decays / g1)
    return out
