"""Point groups C2v, C3v, C4v, C6v acting on arrays as site permutations."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .geometry import AtomArray, LatticeKind

# class order per group and character rows
_TABLES = {
    "C2v": (("E", "C2", "sv", "sd"), {
        "A1": (1, 1, 1, 1), "A2": (1, 1, -1, -1), "B1": (1, -1, 1, -1), "B2": (1, -1, -1, 1)}),
    "C3v": (("E", "C3", "sv"), {
        "A1": (1, 1, 1), "A2": (1, 1, -1), "E": (2, -1, 0)}),
    "C4v": (("E", "C4", "C2", "sv", "sd"), {
        "A1": (1, 1, 1, 1, 1), "A2": (1, 1, 1, -1, -1), "B1": (1, -1, 1, 1, -1),
        "B2": (1, -1, 1, -1, 1), "E": (2, 0, -2, 0, 0)}),
    "C6v": (("E", "C6", "C3", "C2", "sv", "sd"), {
        "A1": (1, 1, 1, 1, 1, 1), "A2": (1, 1, 1, 1, -1, -1), "B1": (1, -1, 1, -1, 1, -1),
        "B2": (1, -1, 1, -1, -1, 1), "E1": (2, 1, -1, -2, 0, 0), "E2": (2, -1, -1, 2, 0, 0)}),
}


@dataclass(frozen=True)
class PointGroup:
    name: str
    order_n: int          # C_n rotation order
    mirror_angle: float   # angle of the first sigma_v mirror line (rad)

    @property
    def classes(self):
        return _TABLES[self.name][0]

    @property
    def table(self):
        return _TABLES[self.name][1]

    def elements(self):
        """List of (class label, 2x2 matrix)."""
        n = self.order_n
        out = [("E", np.eye(2))]
        for k in range(1, n):
            t = 2 * np.pi * k / n
            kk = min(k, n - k)
            label = "C2" if 2 * kk == n else (f"C{n}" if kk == 1 else f"C{n // kk}")
            out.append((label, np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])))
        for k in range(n):
            th = self.mirror_angle + np.pi * k / n
            label = "sv" if (n % 2 == 1 or k % 2 == 0) else "sd"
            c, s = np.cos(2 * th), np.sin(2 * th)
            out.append((label, np.array([[c, s], [s, -c]])))
        return out


C2V = PointGroup("C2v", 2, 0.0)
C3V = PointGroup("C3v", 3, np.pi / 6)
C4V = PointGroup("C4v", 4, 0.0)
C6V = PointGroup("C6v", 6, 0.0)


def point_group(array: AtomArray) -> Optional[PointGroup]:
    d = array.descriptor
    if d is None:
        return None
    if d.kind in (LatticeKind.SQUARE, LatticeKind.DIAGONAL_SQUARE):
        return C4V
    if d.kind is LatticeKind.RECTANGULAR:
        square = d.n == d.n_y and abs(d.period_x - d.period_y) < 1e-14
        return C4V if square else C2V
    if d.kind is LatticeKind.TRIANGLE:
        return C3V
    return C6V


def site_permutations(array: AtomArray, group: PointGroup):
    """perm[g][i] = index of the site g maps site i onto (about the centroid)."""
    return _site_permutations(array.positions.tobytes(), array.positions.shape, group)


@lru_cache(maxsize=64)
def _site_permutations(buf, shape, group):
    pos = np.frombuffer(buf, dtype=float).reshape(shape)
    c = pos.mean(axis=0)
    rel = pos - c
    tree = cKDTree(rel)
    scale = max(np.abs(rel).max(), 1.0)
    out = []
    for label, g in group.elements():
        dist, idx = tree.query(rel @ g.T)
        if dist.max() > 1e-8 * scale:
            raise ValueError(f"array is not invariant under {group.name} element {label}")
        out.append((label, idx))
    return tuple(out)


def characters(vectors: np.ndarray, array: AtomArray, group: PointGroup) -> dict:
    """Class-averaged characters of the span of `vectors` (columns)."""
    v = np.asarray(vectors, dtype=complex)
    if v.ndim == 1:
        v = v[:, None]
    q, _ = np.linalg.qr(v)
    sums = {c: [] for c in group.classes}
    for label, perm in site_permutations(array, group):
        pv = np.empty_like(q)
        pv[perm] = q
        sums[label].append(np.trace(q.conj().T @ pv))
    return {c: complex(np.mean(vals)) for c, vals in sums.items()}


def match_irrep(chars: dict, group: PointGroup, tol: float = 1e-4) -> str:
    best, best_err = "unresolved", np.inf
    for name, row in group.table.items():
        err = max(abs(chars[c] - r) for c, r in zip(group.classes, row))
        if err < best_err:
            best, best_err = name, err
    return best if best_err < tol else "unresolved"
