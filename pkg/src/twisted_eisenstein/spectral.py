"""Spectral side at weight 12: Ramanujan tau, L-values of Delta by Mellin
integrals, and the Petersson-norm ratio probe.

Both completed L-values are reduced to integrals over [y0, inf) where the
q-series converges fast:

    L*(f, s)      = int_1^inf   f(iy) (y^(s-1) + eps y^(k-s-1)) dy
    L*(f, s; 1/2) = int_1/2^inf f(1/2 + iy) (y^(s-1) + eps 2^(k-2s) y^(k-s-1)) dy

with eps = (-1)^(k/2).  The second uses f(1/2 + iy) = eps (2y)^-k
f(1/2 + i/(4y)), which comes from [[1, -1], [2, -1]] mapping 1/2 + iy to
1/2 + i/(4y) with automorphy factor 2iy.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from .eisenstein import DEFAULT_TRUNCATION, DomainPoint, Truncation, corollary22_c1, prefactor
from .errors import DomainError, TruncationError
from .exact_core import ParityPoint

__all__ = [
    "QSeries",
    "LValue",
    "delta_q_expansion",
    "q_series_value",
    "completed_L",
    "completed_twisted_L",
    "petersson_ratio_probe",
]

QSERIES_TOL = 1e-14


@dataclass(frozen=True)
class QSeries:
    """f = sum_{n>=1} a(n) q^n; ``coeffs[0]`` is a(1)."""
    weight: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if self.weight % 2 or self.weight < 2:
            raise DomainError("weight must be a positive even integer")
        if not self.coeffs or self.coeffs[0] != 1:
            raise DomainError("a(1) must be 1")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    def __len__(self):
        return len(self.coeffs)

    def a(self, n: int) -> int:
        return self.coeffs[n - 1]


@dataclass(frozen=True)
class LValue:
    value: complex
    abs_err: float


def _mul_trunc(p: List[int], q: List[int], n: int) -> List[int]:
    out = [0] * n
    for i, pi in enumerate(p[:n]):
        if pi:
            for j, qj in enumerate(q[:n - i]):
                out[i + j] += pi * qj
    return out


@lru_cache(maxsize=8)
def delta_q_expansion(N: int = 400) -> QSeries:
    """tau(1..N) from q prod (1 - q^n)^24 in exact integer arithmetic."""
    if N < 1:
        raise DomainError("N must be at least 1")
    # prod_{n<N} (1 - q^n) modulo q^N
    p = [0] * N
    p[0] = 1
    for n in range(1, N):
        for i in range(N - 1, n - 1, -1):
            p[i] -= p[i - n]
    p2 = _mul_trunc(p, p, N)
    p4 = _mul_trunc(p2, p2, N)
    p8 = _mul_trunc(p4, p4, N)
    p16 = _mul_trunc(p8, p8, N)
    p24 = _mul_trunc(p16, p8, N)
    return QSeries(12, tuple(p24))


def _tail_bound(f: QSeries, y: float) -> float:
    # |a(n)| <= d(n) n^((k-1)/2) <= 2 n^(k/2); geometric majorant of the rest
    N = len(f)
    k = f.weight
    n = N + 1
    r = math.exp(-2.0 * math.pi * y) * ((n + 1) / n) ** (k / 2.0)
    if r >= 1.0:
        return math.inf
    return 2.0 * n ** (k / 2.0) * math.exp(-2.0 * math.pi * n * y) / (1.0 - r)


def q_series_value(f: QSeries, y, twist: bool = False) -> np.ndarray:
    """f(iy), or f(1/2 + iy) when ``twist``, for an array of y > 0."""
    y = np.atleast_1d(np.asarray(y, float))
    n = np.arange(1, len(f) + 1, dtype=float)
    a = np.array(f.coeffs, float)
    if twist:
        a = a * np.where(np.arange(1, len(f) + 1) % 2 == 1, -1.0, 1.0)
    return np.exp(-2.0 * math.pi * np.outer(y, n)) @ a


_GL_HI = np.polynomial.legendre.leggauss(30)
_GL_LO = np.polynomial.legendre.leggauss(20)


def _panel(fun, a: float, b: float) -> Tuple[float, float, float]:
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    hi = complex(np.sum(_GL_HI[1] * fun(mid + half * _GL_HI[0]))) * half
    lo = complex(np.sum(_GL_LO[1] * fun(mid + half * _GL_LO[0]))) * half
    mag = float(np.sum(_GL_HI[1] * np.abs(fun(mid + half * _GL_HI[0])))) * half
    return hi, abs(hi - lo), mag


def _integrate(fun, a: float, b: float, tol: float, depth: int = 0) -> Tuple[complex, float, float]:
    v, e, m = _panel(fun, a, b)
    if e <= tol or depth >= 12:
        return v, e, m
    c = 0.5 * (a + b)
    v1, e1, m1 = _integrate(fun, a, c, tol / 2, depth + 1)
    v2, e2, m2 = _integrate(fun, c, b, tol / 2, depth + 1)
    return v1 + v2, e1 + e2, m1 + m2


def _mellin(f: QSeries, y0: float, kernel, twist: bool) -> LValue:
    k = f.weight
    if _tail_bound(f, y0) > QSERIES_TOL:
        raise TruncationError("q-series too short for the target error")

    def fun(y):
        return q_series_value(f, y, twist) * kernel(y)

    # upper cut where e^(-2 pi y) y^(k+2) is negligible
    Y = y0 + 1.0
    while math.exp(-2.0 * math.pi * Y) * Y ** (k + 2) > 1e-20:
        Y += 1.0
    acc = 0j
    err = 0.0
    mag = 0.0
    a = y0
    while a < Y:
        b = min(a + 0.5, Y)
        v, e, m = _integrate(fun, a, b, 1e-17)
        acc += v
        err += e
        mag += m
        a = b
    # cut beyond Y, q-series truncation, rounding
    cut = 2.0 * math.exp(-2.0 * math.pi * Y) * Y ** (k + 2)
    kmax = float(np.max(np.abs(kernel(np.array([y0, Y])))))
    err += cut + _tail_bound(f, y0) * kmax * (Y - y0) + 4e-16 * mag
    return LValue(complex(acc), float(err))


def completed_L(f: QSeries, s) -> LValue:
    """L*(f, s) = (2 pi)^-s Gamma(s) L(f, s) by its Mellin integral."""
    s = complex(s)
    k = f.weight
    if not (0 < s.real < k):
        raise DomainError("need 0 < Re s < k")
    eps = -1 if (k // 2) % 2 else 1

    def kernel(y):
        return np.exp((s - 1.0) * np.log(y)) + eps * np.exp((k - s - 1.0) * np.log(y))

    return _mellin(f, 1.0, kernel, False)


def completed_twisted_L(f: QSeries, s) -> LValue:
    """L*(f, s; 1/2) = int_0^inf f(1/2 + iy) y^(s-1) dy."""
    s = complex(s)
    k = f.weight
    if not (0 < s.real < k):
        raise DomainError("need 0 < Re s < k")
    eps = -1 if (k // 2) % 2 else 1
    c2 = eps * cmath.exp((k - 2.0 * s) * math.log(2.0))

    def kernel(y):
        return np.exp((s - 1.0) * np.log(y)) + c2 * np.exp((k - s - 1.0) * np.log(y))

    return _mellin(f, 0.5, kernel, True)


def petersson_ratio_probe(pairs: Sequence[ParityPoint], tr: Truncation = DEFAULT_TRUNCATION,
                          f: QSeries | None = None) -> List[Tuple[complex, float]]:
    """For each (s, w): L*(f, 12-s; 1/2) L*(f, 12-w) over the first coefficient
    prefactor * c(1).  Each ratio estimates <Delta, Delta>; returns
    (ratio, absolute error estimate) pairs."""
    if f is None:
        f = delta_q_expansion()
    out = []
    for p in pairs:
        if p.k != 12:
            raise DomainError("the probe is set up for k = 12")
        pt = DomainPoint(p.k, p.s, p.w)
        if not (pt.in_F and pt.in_D):
            raise DomainError(f"({p.s}, {p.w}) is not in F and D")
        lt = completed_twisted_L(f, p.k - p.s)
        lu = completed_L(f, p.k - p.w)
        c1 = corollary22_c1(pt, tr)
        den = prefactor(pt) * c1.value
        r = lt.value * lu.value / den
        rel = (lt.abs_err / abs(lt.value) + lu.abs_err / abs(lu.value)
               + c1.trunc_error_estimate / abs(c1.value))
        out.append((complex(r), float(abs(r) * rel)))
    return out
