"""Polylogarithms Li_1..Li_3 on the unit circle.

Li_n(e^mu) = mu^(n-1)/(n-1)! [H_(n-1) - ln(-mu)] + sum_{k != n-1} zeta(n-k) mu^k / k!

with mu = i*theta, theta reduced to (-pi, pi]; |mu|/(2 pi) <= 1/2 so 64 terms
reach double precision.
"""
from __future__ import annotations

from math import factorial

import numpy as np
from scipy.special import bernoulli

ZETA2 = np.pi ** 2 / 6.0
ZETA3 = 1.2020569031595942853997

_NTERMS = 64
_B = bernoulli(_NTERMS + 2)


def _zeta_int(s: int) -> float:
    if s == 2:
        return ZETA2
    if s == 3:
        return ZETA3
    if s == 0:
        return -0.5
    if s < 0:
        m = -s
        return -_B[m + 1] / (m + 1)
    raise ValueError(s)


def _coefficients(n: int) -> np.ndarray:
    c = np.zeros(_NTERMS)
    for k in range(_NTERMS):
        if k != n - 1:
            c[k] = _zeta_int(n - k) / factorial(k)
    return c


_COEF = {n: _coefficients(n) for n in (2, 3)}


def polylog_unit(n: int, theta) -> np.ndarray:
    """Li_n(exp(i*theta)) for n in {1, 2, 3}; diverges only for n = 1 at theta = 0 mod 2pi."""
    th = np.asarray(theta, dtype=float)
    th = th - 2.0 * np.pi * np.round(th / (2.0 * np.pi))
    if n == 1:
        # -ln(1 - e^{i th}) = -ln|2 sin(th/2)| + i (pi sgn(th) - th)/2
        return -np.log(np.abs(2.0 * np.sin(0.5 * th))) + 0.5j * (np.pi * np.sign(th) - th)
    if n not in _COEF:
        raise ValueError("only n = 1, 2, 3 are supported")
    mu = 1j * th
    series = np.polynomial.polynomial.polyval(mu, _COEF[n])
    harmonic = sum(1.0 / j for j in range(1, n))
    with np.errstate(divide="ignore", invalid="ignore"):
        log_term = np.log(np.abs(th)) - 0.5j * np.pi * np.sign(th)
        sing = mu ** (n - 1) / factorial(n - 1) * (harmonic - log_term)
    sing = np.where(th == 0.0, 0.0, sing)
    return series + sing
