"""Collective eigenstates, standing-wave decomposition and irrep labels.

Eigenvalues are lambda = d_omega - i*gamma/2 in units of Gamma0. The
standing-wave basis is indexed by (m_x, m_y), both 1..N; coefficient grids
are stored as c[m_x - 1, m_y - 1].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import EigenSolverFailure, IndexOutOfRange, InvalidPair, NotAGrid
from .geometry import GRID_KINDS, AtomArray
from .green import EffectiveHamiltonian
from .symmetry import characters, match_irrep, point_group

RESIDUAL_TOL = 1e-8
SUM_RULE_TOL = 1e-8
DEGENERACY_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class CollectiveState:
    index: int
    detuning: float
    decay: float
    amplitudes: np.ndarray
    irrep: str = "unresolved"
    dominant_harmonics: tuple = ()

    @property
    def eigenvalue(self) -> complex:
        return complex(self.detuning, -0.5 * self.decay)


@dataclass(frozen=True, eq=False)
class BlochDecomposition:
    coefficients: np.ndarray   # c[m_x-1, m_y-1]
    q0: float

    @property
    def n(self) -> int:
        return self.coefficients.shape[0]

    def weights(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2

    def dominant(self, count: int = 3) -> tuple:
        w = self.weights()
        order = np.argsort(-w, axis=None, kind="stable")[:count]
        return tuple(((int(i // self.n) + 1, int(i % self.n) + 1), float(w.flat[i])) for i in order)

    def reconstruct(self) -> np.ndarray:
        s = _sine_matrix(self.n)
        # grid[n_y, n_x] = sum c[mx, my] S[mx, n_x] S[my, n_y]
        return (s.T @ self.coefficients.T @ s).ravel()


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Unit norm, largest component real positive (deterministic gauge)."""
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


def eigensystem(h: EffectiveHamiltonian):
    """Raw (eigenvalues, unit-norm eigenvector columns) sorted like `diagonalize`."""
    m = h.matrix
    try:
        w, v = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverFailure(f"dense eigensolver failed: {exc}") from exc
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(v))):
        raise EigenSolverFailure("non-finite eigenpairs")
    decay = -2.0 * w.imag
    order = np.lexsort((np.arange(len(w)), w.real, decay))
    w = w[order]
    v = np.column_stack([_fix_phase(v[:, j]) for j in order]) if len(w) else v
    return w, v


def _check(h, w, v):
    n = len(w)
    resid = np.linalg.norm(h.matrix @ v - v * w, axis=0)
    if resid.max() >= RESIDUAL_TOL:
        raise EigenSolverFailure(f"eigen-residual {resid.max():.2e} exceeds {RESIDUAL_TOL:g}")
    total = float(np.sum(-2.0 * w.imag))
    if abs(total - n) > SUM_RULE_TOL * n:
        raise EigenSolverFailure(f"decay sum rule violated: sum = {total!r}, expected {n}")


def diagonalize(h: EffectiveHamiltonian, classify: bool = True,
                degeneracy_tol: float = DEGENERACY_TOL) -> list:
    """All collective states, ascending in decay (ties: detuning, then index).

    Irrep labels are attached when the array has a point group; harmonics
    when it is a square grid.
    """
    w, v = eigensystem(h)
    _check(h, w, v)
    arr = h.array
    labels = ["unresolved"] * len(w)
    if classify and arr is not None and point_group(arr) is not None:
        labels = classify_all(w, v, arr, degeneracy_tol)
    grid_n = _square_grid_n(arr)
    states = []
    for j in range(len(w)):
        harm = ()
        if grid_n:
            harm = decompose_vector(v[:, j], grid_n).dominant(3)
        states.append(CollectiveState(j, float(w[j].real), float(-2.0 * w[j].imag),
                                      _readonly(v[:, j]), labels[j], harm))
    return states


def _readonly(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def _square_grid_n(arr) -> int:
    d = None if arr is None else arr.descriptor
    if d is not None and d.kind in GRID_KINDS and d.n == d.n_y:
        return d.n
    return 0


def degenerate_clusters(w: np.ndarray, tol: float = DEGENERACY_TOL) -> list:
    """Groups of indices whose eigenvalues lie within `tol` (single linkage)."""
    n = len(w)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    order = np.argsort(w.real, kind="stable")
    for a_pos, a in enumerate(order):
        for b in order[a_pos + 1:]:
            if w[b].real - w[a].real >= tol:
                break
            if abs(w[a] - w[b]) < tol:
                parent[find(a)] = find(b)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def classify_all(w, v, array: AtomArray, tol: float = DEGENERACY_TOL) -> list:
    group = point_group(array)
    labels = ["unresolved"] * len(w)
    for cluster in degenerate_clusters(w, tol):
        lab = match_irrep(characters(v[:, cluster], array, group), group)
        for i in cluster:
            labels[i] = lab
    return labels


def classify_state_irrep(state: CollectiveState, array: AtomArray,
                         partners: Sequence[CollectiveState] = ()) -> str:
    """Irrep of a state, or of the span of the state and its degenerate partners."""
    group = point_group(array)
    if group is None:
        return "unresolved"
    vecs = np.column_stack([state.amplitudes] + [p.amplitudes for p in partners])
    return match_irrep(characters(vecs, array, group), group)


# --- standing-wave basis -------------------------------------------------

def _sine_matrix(n: int) -> np.ndarray:
    """S[m-1, k-1] = sqrt(2/(N+1)) sin(q0 m k); symmetric and orthogonal."""
    q0 = np.pi / (n + 1)
    idx = np.arange(1, n + 1)
    return np.sqrt(2.0 / (n + 1)) * np.sin(q0 * np.outer(idx, idx))


def standing_wave_basis(n: int, m_x: int, m_y: int) -> np.ndarray:
    """psi^(m_x,m_y) over the N x N grid, flattened row-major (n_y, n_x)."""
    if not (1 <= m_x <= n and 1 <= m_y <= n):
        raise IndexOutOfRange(f"(m_x, m_y) = ({m_x}, {m_y}) outside 1..{n}")
    s = _sine_matrix(n)
    return np.outer(s[m_y - 1], s[m_x - 1]).ravel()


def symmetrize(n: int, m1: int, m2: int, sign: int) -> np.ndarray:
    """(psi^(m1,m2) + sign * psi^(m2,m1)) / sqrt(2)."""
    if m1 == m2 or (m1 + m2) % 2:
        raise InvalidPair(f"need m1 != m2 with even m1 + m2, got ({m1}, {m2})")
    if sign not in (1, -1):
        raise InvalidPair("sign must be +1 or -1")
    return (standing_wave_basis(n, m1, m2) + sign * standing_wave_basis(n, m2, m1)) / np.sqrt(2.0)


def decompose_vector(vec: np.ndarray, n: int) -> BlochDecomposition:
    vec = np.asarray(vec)
    if vec.shape != (n * n,):
        raise NotAGrid(f"vector of length {vec.shape} does not match a {n}x{n} grid")
    s = _sine_matrix(n)
    grid = vec.reshape(n, n)             # [n_y, n_x]
    c = s @ grid.T @ s                   # [m_x, m_y]
    return BlochDecomposition(_readonly(c), np.pi / (n + 1))


def decompose(state: CollectiveState, n: int) -> BlochDecomposition:
    return decompose_vector(state.amplitudes, n)


def classify_basis_irrep(m_x: int, m_y: int, sign: Optional[int] = None) -> str:
    """C4v label of a standing wave (or of its symmetric/antisymmetric pair)."""
    if (m_x + m_y) % 2:
        return "E"
    odd = m_x % 2 == 1
    if m_x == m_y or sign is None or sign > 0:
        return "A1" if odd else "B2"
    return "B1" if odd else "A2"


def target_vector(n: int, name: str) -> np.ndarray:
    """Named branch harmonics: 'NN' = psi^(N,N), 'NN-2-' = psi^(N,N-2)-."""
    key = name.replace(" ", "").upper()
    if key in ("NN", "A1/B2", "A1B2", "B2"):
        return standing_wave_basis(n, n, n)
    if key in ("NN-2-", "NN-2", "A2/B1", "A2B1", "A2"):
        return symmetrize(n, n - 2, n, -1)
    raise ValueError(f"unknown branch target {name!r}")


def overlaps(v: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """|unconjugated overlap| of unit vector v with columns of `vectors`."""
    return np.abs(v @ vectors)
