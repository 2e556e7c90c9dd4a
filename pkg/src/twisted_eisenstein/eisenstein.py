"""Fourier coefficients of the twisted double Eisenstein series at p/q = 1/2.

Main entry points:

* ``coefficient_c_m`` and ``corollary22_c1``: the truncated coefficient series,
* ``continuation_main``: the six-term continuation,
* ``residual_R``: the difference of the two,
* ``brute_force_fourier``: the matrix-sum oracle.

Series engine
-------------
The hard part of c(m) is the double sum over coprime (a, c), where
h = a + c/2 > 0, of c^(s-k) h^-s sum_n n^(w-1) [...1f1...].  For fixed c,
r | m and a residue class of a mod c, the phase theta = {(m/r) a'/c} is
fixed while h runs through h0 + c t.  Write x = (m/r)/(c h) and let dist be
the distance from theta to the nearest integer (1 when theta = 0).

* Terms with x <= dist/2 are summed per class in closed form.  The
  1f1 integral is opened, the n-sum becomes a periodic zeta in Hurwitz
  form, that is expanded around theta in powers of x u, and the t-sum gives
  Hurwitz zeta values in h0/c.  The expansion converges like 2^-j.
* The few remaining terms are summed directly over n <= N.  1f1 comes from
  tanh-sinh quadrature for |z| below a switch radius and from its
  large-|z| expansion above.  The tail n > N is summed in closed form
  through that expansion, with sum_{n>N} e(n phi) n^-sigma by a
  derivative expansion of 1/(1 - e(phi) e^t).

The c-sum is cut at c_max.  The tail is bounded by fitting
mass(c) <= K c^-(k - Re s - max(Re w, 1)) on (c_max/2, c_max] and summing
the majorant.
The fit is empirical: the available closed-form bound is far too weak at
the default truncation.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from . import kernels
from .errors import DomainError, TruncationError
from .exact_core import ParityPoint
from .specfun import (
    cauchy_mean,
    cgamma,
    cospi,
    gamma_cos_zeta_half,
    gauss_2f1,
    hurwitz_zeta,
    riemann_zeta,
    sinpi,
)

__all__ = [
    "DomainPoint",
    "Truncation",
    "CoeffValue",
    "DEFAULT_TRUNCATION",
    "prefactor",
    "coefficient_c_m",
    "corollary22_c1",
    "continuation_terms",
    "continuation_main",
    "residual_R",
    "r_bound_expression",
    "brute_force_fourier",
    "fourier_coefficient",
    "functional_eq_check",
    "phase_fraction",
    "inverse_mod",
    "divisors",
]

TWO_PI = 2.0 * math.pi
RHO_MAX = 0.5          # closed-form class sums need x / dist <= RHO_MAX
DUAL_TERMS = 80        # length of the coefficient table for those sums
TAIL_SAFETY = 10.0     # multiplier on the fitted c-tail majorant
EULER_RADIUS = 60.0    # direct sums run until 2 pi dist(phase) N >= this
ROUND = 2e-14          # relative rounding allowance on assembled sums
BF_SAFETY = 3.0        # multiplier on the box-change estimate of the matrix-sum oracle


@dataclass(frozen=True)
class DomainPoint:
    k: int
    s: complex
    w: complex

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, (int, np.integer)):
            raise DomainError("k must be an integer")
        if self.k % 2 or self.k < 6:
            raise DomainError("k must be even and at least 6")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "s", complex(self.s))
        object.__setattr__(self, "w", complex(self.w))

    @classmethod
    def from_parity(cls, p: ParityPoint) -> "DomainPoint":
        return cls(p.k, p.s, p.w)

    @property
    def in_D(self) -> bool:
        s, w, k = self.s.real, self.w.real, self.k
        return 2 < s < k - 2 and w < min(s - 1, k - s - 1)

    @property
    def in_D1(self) -> bool:
        s, w, k = self.s.real, self.w.real, self.k
        return 2 < s < k - 2 and w < 0

    @property
    def in_F(self) -> bool:
        s, w, k = self.s.real, self.w.real, self.k
        return 1.5 < s < k - 2 and 1.5 < w < k - 2

    @property
    def sign(self) -> int:
        return _ksign(self.k)

    def integer_parts(self):
        """(s, w) as ints when both are real integers, else None."""
        if self.s.imag or self.w.imag:
            return None
        if self.s.real != round(self.s.real) or self.w.real != round(self.w.real):
            return None
        return int(round(self.s.real)), int(round(self.w.real))

    @property
    def opposite_parity(self) -> bool:
        ip = self.integer_parts()
        return ip is not None and (ip[0] + ip[1]) % 2 == 1


@dataclass(frozen=True)
class Truncation:
    c_max: int = 200
    n_max: int = 400
    det_max: int = 40
    entry_max: int = 30
    x_samples: int = 256
    y: float = 0.8

    def __post_init__(self):
        for name in ("c_max", "n_max", "det_max", "entry_max", "x_samples"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v <= 0:
                raise ValueError(f"{name} must be a positive integer")
        if self.x_samples < 64:
            raise ValueError("x_samples must be at least 64")
        if not self.y > 0:
            raise ValueError("y must be positive")


DEFAULT_TRUNCATION = Truncation()


@dataclass(frozen=True)
class CoeffValue:
    """A series value with its truncation error estimate.

    ``magnitude`` is the sum of the absolute values of the constituent
    terms; it gives relative errors a meaning when the value itself is 0.
    """
    value: complex
    trunc_error_estimate: float
    magnitude: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        object.__setattr__(self, "trunc_error_estimate", float(self.trunc_error_estimate))
        object.__setattr__(self, "magnitude", float(self.magnitude))
        if not (self.trunc_error_estimate >= 0):
            raise ValueError("error estimate must be nonnegative")

    def rel_error_to(self, ref: complex) -> float:
        den = abs(ref) if ref != 0 else self.magnitude
        return abs(self.value - ref) / den if den else abs(self.value - ref)


# small helpers ----------------------------------------------------------------

def _ksign(k: int) -> int:
    """(-1)^(k/2)."""
    return -1 if (k // 2) % 2 else 1


def divisors(m: int) -> List[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def inverse_mod(a: int, c: int) -> int:
    """a' with a a' = 1 mod c, normalized to 0 < a' <= c."""
    if c == 1:
        return 1
    inv = pow(a % c, -1, c)
    return inv if inv > 0 else c


def phase_fraction(m: int, r: int, n: int, a_prime: int, c: int) -> Fraction:
    """(m/r)(n a'/c) mod 1, as an exact fraction in [0, 1)."""
    return (Fraction(m, r) * Fraction(n * a_prime, c)) % 1


def _cpow(base: float, e: complex) -> complex:
    return cmath.exp(e * math.log(base))


def prefactor(pt: DomainPoint) -> complex:
    """Gamma(s) Gamma(k-s) Gamma(k-w) / (2^(2-s-w) pi^(k+1-w) Gamma(k-1))."""
    k, s, w = pt.k, pt.s, pt.w
    num = cgamma(s) * cgamma(k - s) * cgamma(k - w)
    den = _cpow(2.0, 2.0 - s - w) * _cpow(math.pi, k + 1.0 - w) * math.factorial(k - 2)
    return num / den


def _require_D(pt: DomainPoint):
    if not pt.in_D:
        raise DomainError(f"point (k={pt.k}, s={pt.s}, w={pt.w}) is outside D")


# series engine --------------------------------------------------------------------

def _choose_switch(s: complex, k: int, gs: complex, gks: complex) -> float:
    """Smallest radius in 30, 35, ... where the large-|z| expansion of
    1f1(s, k; z) is good to 1e-15 relative at z = +-i radius."""
    for za in range(30, 205, 5):
        v, e = kernels.asym_1f1_batch(np.array([1j * za, -1j * za]), s, k, gs, gks)
        if np.all(e <= 1e-15 * np.abs(v)):
            return float(za)
    raise TruncationError("no switch radius found for the 1f1 expansion")


def _euler_coeffs(om: complex, P: int) -> np.ndarray:
    # Taylor coefficients of 1/(1 - om e^t)
    a = np.empty(P, np.complex128)
    a[0] = 1.0 / (1.0 - om)
    r = om / (1.0 - om)
    inv_fact = [1.0 / math.factorial(i) for i in range(P)]
    for p in range(1, P):
        acc = 0j
        for i in range(1, p + 1):
            acc += a[p - i] * inv_fact[i]
        a[p] = r * acc
    return a


def _phase_tail(sig: np.ndarray, phi: float, M: int, zero_phase: bool) -> Tuple[np.ndarray, np.ndarray]:
    """sum_{n>=M} e(n phi) n^-sig for each sig; returns (values, error bounds)."""
    sig = np.asarray(sig, np.complex128)
    lm = math.log(M)
    if zero_phase:
        v = kernels.hurwitz_scaled_batch(sig, np.full(sig.size, float(M))) * np.exp(-sig * lm)
        return v, 1e-15 * np.abs(v)
    frac = phi % 1.0
    om = cmath.exp(2j * math.pi * frac)
    P = 48
    a = _euler_coeffs(om, P)
    f = np.exp(-sig * lm)
    acc = np.zeros(sig.size, np.complex128)
    err = np.full(sig.size, np.inf)
    live = np.ones(sig.size, bool)
    prev = np.full(sig.size, np.inf)
    for p in range(P):
        t = a[p] * f
        at = np.abs(t)
        grow = live & (at > prev) & (p > 2)
        live &= ~grow
        acc[live] += t[live]
        err[live] = at[live]
        done = live & (at <= 1e-17 * np.abs(acc))
        live &= ~done
        if not live.any():
            break
        prev = at
        f = f * (-(sig + p) / M)
    # Abel summation bound as a cap on unreliable estimates
    sn = abs(math.sin(math.pi * frac))
    cap = np.exp(-sig.real * lm) * (1.0 + np.abs(sig) / sig.real) / max(sn, 1e-300)
    bad = ~np.isfinite(err) | (err > cap)
    err = np.where(bad, cap, err)
    acc = np.where(bad, 0.0, acc)
    start = cmath.exp(2j * math.pi * ((M * frac) % 1.0))
    return start * acc, err


class _Engine:
    """Per-point constants shared by every (a, c) term."""

    def __init__(self, pt: DomainPoint):
        k, s, w = pt.k, pt.s, pt.w
        self.pt = pt
        self.k, self.s, self.w = k, s, w
        self.gs = cgamma(s)
        self.gks = cgamma(k - s)
        self.za = _choose_switch(s, k, self.gs, self.gks)
        u, lu, l1u, wts = kernels.tanh_sinh_nodes()
        self.u = u
        self.W = wts * np.exp((s - 1.0) * lu + (k - s - 1.0) * l1u)
        # coef_j = B(s+j, k-s) (w)_j / j!
        coef = np.empty(DUAL_TERMS, np.complex128)
        b = self.gs * self.gks / math.factorial(k - 1)
        pw = 1.0 + 0j
        for j in range(DUAL_TERMS):
            coef[j] = b * pw
            b *= (s + j) / (k + j)
            pw *= (w + j) / (j + 1)
        self.coef = coef
        ip = pt.integer_parts()
        self.skip_dual = ip is not None and (ip[0] + ip[1]) % 2 == 1
        self.cp = cospi((s + w) / 2.0)
        self.cm = cospi((s - w) / 2.0)
        self.extra = cgamma(s - w) * self.gks / cgamma(k - w)
        self.dual_factor = 2.0 * cmath.exp(-w * math.log(TWO_PI)) * cgamma(w)
        # asymptotic coefficient tables for the closed-form n-tails
        J = 40
        A = np.empty(J, np.complex128)
        B = np.empty(J, np.complex128)
        A[0] = B[0] = 1.0
        for j in range(1, J):
            A[j] = A[j - 1] * (1.0 - s + j - 1) * (k - s + j - 1) / j
            B[j] = B[j - 1] * (s + j - 1) * (s - k + 1 + j - 1) / j
        self.A, self.B = A, B
        self.hump = abs(1.0 - s) + abs(k - s) + 2.0

    # one (a, c) term summed directly over n
    def direct(self, p: int, q: int, x: float, a_zero: bool = False) -> Tuple[complex, float, float]:
        s, w, k = self.s, self.w, self.k
        th = p / q
        phiA = th - x
        dA = 1.0 if a_zero else abs(phiA - round(phiA))
        dB = min(th, 1.0 - th) if p else 1.0
        N = max(self.n_max, int(math.ceil(self.za / (TWO_PI * x))))
        need = EULER_RADIUS / (TWO_PI * max(min(dA, dB), 1e-300))
        N = max(N, int(min(need, 2e5)))
        acc, absacc, asym_err = kernels.direct_nsum(
            p, q, x, N, s, w, self.u, self.W, self.za, k, self.gs, self.gks)
        tail, terr = self._tail(th, x, N + 1, p == 0, a_zero)
        err = asym_err + terr + ROUND * absacc
        return acc + tail, err, absacc + abs(tail)

    def _tail(self, th: float, x: float, M: int, zero_phase: bool,
              a_zero: bool) -> Tuple[complex, float]:
        s, w, k = self.s, self.w, self.k
        y = TWO_PI * x
        J = self.A.size
        j = np.arange(J)
        ipow = 1j ** j
        sigA = (k - s - w + 1.0) + j
        tA1, eA1 = _phase_tail(sigA, th - x, M, a_zero)
        tA2, eA2 = _phase_tail(sigA, -(th - x), M, a_zero)
        sigB = (s - w + 1.0) + j
        tB1, eB1 = _phase_tail(sigB, th, M, zero_phase)
        tB2, eB2 = _phase_tail(sigB, -th, M, zero_phase)
        ik = 1j ** k
        yA = np.exp((s - k - j) * math.log(y))
        yB = np.exp((-s - j) * math.log(y))
        termA = self.gks * self.A * yA * (ik * ipow * tA1 + np.conj(ik * ipow) * tA2)
        termB = self.gs * self.B * yB * (np.conj(ipow) * tB1 + ipow * tB2)
        errA = np.abs(self.gks * self.A * yA) * (eA1 + eA2)
        errB = np.abs(self.gs * self.B * yB) * (eB1 + eB2)
        terms = termA + termB
        # the expansion in j is asymptotic: stop at the smallest term.  The
        # combined terms can cancel exactly (odd j at phase 0), so the stop
        # rule looks at the size of the pieces.
        acc = 0j
        err = 0.0
        prev = math.inf
        mag = (np.abs(self.gks * self.A * yA) * (np.abs(tA1) + np.abs(tA2))
               + np.abs(self.gs * self.B * yB) * (np.abs(tB1) + np.abs(tB2)))
        for jj in range(J):
            if jj > self.hump and mag[jj] > prev:
                err += prev
                break
            acc += terms[jj]
            err += errA[jj] + errB[jj]
            if mag[jj] <= 1e-17 * abs(acc):
                err += mag[jj]
                break
            prev = mag[jj]
        else:
            err += mag[-1]
        return acc, err

    def term3(self, m: int, c_max: int, n_max: int) -> Tuple[complex, float, float]:
        """The (a, c, n) triple sum; returns (value, error, magnitude)."""
        self.n_max = n_max
        s, w, k = self.s, self.w, self.k
        sg = self.pt.sign
        pref3 = sg * _cpow(TWO_PI, k) * m ** (k - 1) / (_cpow(2.0, s) * self.gs * self.gks)
        total = 0j
        err = 0.0
        mag = 0.0
        mass = np.zeros(c_max + 1)
        for r in divisors(m):
            M = m // r
            rw = _cpow(r, w - k)
            hs, cs, xs, ths, th1s, fulls, cidx = [], [], [], [], [], [], []
            for c in range(1, c_max + 1):
                cf = _cpow(c, s - k)
                # a in (-c/2, c/2]; H2 = 2h = 2a + c
                for a in range(-((c - 1) // 2), c // 2 + 1):
                    if math.gcd(a, c) != 1:
                        continue
                    H2 = 2 * a + c
                    ap = inverse_mod(a, c)
                    p = (M * ap) % c
                    D = min(p, c - p) if p else c
                    # first t with D (H2 + 2 c t) >= 4 M, i.e. x_t <= dist/2
                    need = 4 * M - D * H2
                    t0 = 0 if need <= 0 else -(-need // (2 * c * D))
                    for t in range(t0):
                        h2 = H2 + 2 * c * t
                        x = 2.0 * M / (c * h2)
                        # theta - x = (p h2 - 2M) / (c h2) exactly
                        a_zero = (p * h2 - 2 * M) % (c * h2) == 0
                        g, ge, gm = self.direct(p, c, x, a_zero)
                        fac = cf * rw * pref3 * _cpow(h2 / 2.0, -s)
                        v = fac * g
                        total += v
                        err += abs(fac) * ge
                        mag += abs(fac) * gm
                        mass[c] += abs(v)
                    if not self.skip_dual:
                        h2 = H2 + 2 * c * t0
                        hs.append(h2 / 2.0)
                        cs.append(float(c))
                        xs.append(2.0 * M / (c * h2))
                        th = p / c if p else 1.0
                        ths.append(th)
                        th1s.append(1.0 - th)
                        fulls.append(p == 0)
                        cidx.append(c)
            if hs:
                out, last = kernels.dual_class_sums(
                    np.array(hs), np.array(cs), np.array(xs), np.array(ths), np.array(th1s),
                    np.array(fulls, bool), s, w, self.coef, self.cp, self.cm, self.extra)
                cidx = np.array(cidx)
                cfac = np.exp((s - k) * np.log(cidx.astype(float))) * rw * pref3 * self.dual_factor
                vals = cfac * out
                total += complex(vals.sum())
                av = np.abs(vals)
                err += float(np.sum(np.abs(cfac) * last)) + ROUND * float(av.sum())
                mag += float(av.sum())
                np.add.at(mass, cidx, av)
        err += self._c_tail(mass, c_max)
        return total, err, mag

    def _c_tail(self, mass: np.ndarray, C: int) -> float:
        if C < 4:
            return math.inf
        # measured decay of the per-c mass is c^-(k - Re s - Re w); below
        # Re w = 1 the exponent is capped so the majorant stays conservative
        kappa = self.k - self.s.real - max(self.w.real, 1.0)
        cs = np.arange(C // 2 + 1, C + 1)
        K = float(np.max(mass[cs] * cs.astype(float) ** kappa))
        if K == 0.0:
            return 0.0
        return TAIL_SAFETY * K * abs(hurwitz_zeta(kappa, 1.0)
                                     - sum((n ** -kappa) for n in range(1, C + 1)))


@lru_cache(maxsize=64)
def _term3_cached(k: int, s: complex, w: complex, m: int, c_max: int, n_max: int, backend: str):
    eng = _Engine(DomainPoint(k, s, w))
    return eng.term3(m, c_max, n_max)


def _term3(pt: DomainPoint, m: int, tr: Truncation):
    from ._backend import get_backend
    be = get_backend()
    w = pt.w
    if w.imag == 0 and w.real <= 0 and w.real == round(w.real):
        # Gamma(w) and zeta(w + j) poles cancel inside the class sums; the
        # triple sum itself is holomorphic in w, so average over a circle
        nodes = 16
        vals = [_term3_cached(pt.k, pt.s, w + 0.05 * cmath.exp(2j * math.pi * (j + 0.5) / nodes),
                              m, tr.c_max, tr.n_max, be) for j in range(nodes)]
        v = sum(x[0] for x in vals) / nodes
        return v, max(x[1] for x in vals), max(x[2] for x in vals)
    return _term3_cached(pt.k, pt.s, w, m, tr.c_max, tr.n_max, be)


def _check_tol(cv: CoeffValue, rel_tol):
    if rel_tol is not None:
        scale = abs(cv.value) or cv.magnitude
        if cv.trunc_error_estimate > rel_tol * scale:
            raise TruncationError(
                f"error estimate {cv.trunc_error_estimate:.3e} above requested tolerance")
    return cv


def coefficient_c_m(pt: DomainPoint, m: int, tr: Truncation = DEFAULT_TRUNCATION,
                    rel_tol: float | None = None) -> CoeffValue:
    """m-th Fourier coefficient c(m) of the twisted double Eisenstein series."""
    _require_D(pt)
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise DomainError("m must be a positive integer")
    m = int(m)
    k, s, w = pt.k, pt.s, pt.w
    sg = pt.sign
    val = 0j
    mag = 0.0
    # (i) divisor sums over 2a | m
    even = [a for a in range(1, m // 2 + 1) if m % (2 * a) == 0]
    if even:
        s1 = sum(_cpow(a, w - s) for a in even)
        s2 = sum(_cpow(a, s + w - k) for a in even)
        t1 = (_cpow(TWO_PI, s) / (_cpow(2.0, s) * cgamma(s)) * _cpow(m, s - 1.0)
              * riemann_zeta(k - s - w + 1.0) * s1)
        t2 = (sg * _cpow(TWO_PI, k - s) / (_cpow(2.0, k - s) * cgamma(k - s))
              * _cpow(m, k - s - 1.0) * riemann_zeta(s - w + 1.0) * s2)
        val += t1 + t2
        mag += abs(t1) + abs(t2)
    # (ii) a | m with 2a not dividing m
    odd = [a for a in divisors(m) if m % (2 * a) != 0]
    P = _cpow(TWO_PI, k - w)
    s1 = sum(_cpow(a, w - s) for a in odd)
    s2 = sum(_cpow(a, s + w - k) for a in odd)
    t3 = P * gamma_cos_zeta_half(s + w - k) / (_cpow(2.0, s - 1.0) * cgamma(s)) * _cpow(m, s - 1.0) * s1
    t4 = (sg * P * gamma_cos_zeta_half(w - s) / (_cpow(2.0, k - s - 1.0) * cgamma(k - s))
          * _cpow(m, k - s - 1.0) * s2)
    val += t3 + t4
    mag += abs(t3) + abs(t4)
    # (iii)
    v3, e3, m3 = _term3(pt, m, tr)
    cv = CoeffValue(val + v3, e3 + ROUND * mag, mag + m3)
    return _check_tol(cv, rel_tol)


def corollary22_c1(pt: DomainPoint, tr: Truncation = DEFAULT_TRUNCATION,
                   rel_tol: float | None = None) -> CoeffValue:
    """Right-hand side of the c(1) identity: two Gamma cos zeta(., 1/2)
    terms plus the (a, c, n) double sum."""
    _require_D(pt)
    k, s, w = pt.k, pt.s, pt.w
    sg = pt.sign
    P = _cpow(TWO_PI, k - w)
    t1 = P * gamma_cos_zeta_half(s + w - k) / (_cpow(2.0, s - 1.0) * cgamma(s))
    t2 = sg * P * gamma_cos_zeta_half(w - s) / (_cpow(2.0, k - s - 1.0) * cgamma(k - s))
    v3, e3, m3 = _term3(pt, 1, tr)
    mag = abs(t1) + abs(t2)
    cv = CoeffValue(t1 + t2 + v3, e3 + ROUND * mag, mag + m3)
    return _check_tol(cv, rel_tol)


# continuation -------------------------------------------------------------------------

def _g_pair(s: complex, w: complex) -> Tuple[complex, complex]:
    """Gamma(w) Gamma(1-w) cos(pi (s -+ w)/2) for non-integer w."""
    gg = math.pi / sinpi(w)
    return gg * cospi((s - w) / 2.0), gg * cospi((s + w) / 2.0)


def _f56(k: int, s: complex, w: complex) -> Tuple[complex, complex]:
    """The two regularized 2F1 values at 1/2 with their power-of-2 and
    Gamma denominators."""
    f5 = gauss_2f1(1.0 - s, k - s, k - s - w + 1.0, 0.5, regularized=True)
    f6 = gauss_2f1(s + 1.0 - k, s, 1.0 + s - w, 0.5, regularized=True)
    d5 = _cpow(2.0, k - s - 1.0) * cgamma(s)
    d6 = _cpow(2.0, s - 1.0) * cgamma(k - s)
    return f5 / d5, f6 / d6


def continuation_terms(pt: DomainPoint) -> List[complex]:
    """The six main terms of the continuation to F, in order."""
    if not pt.in_F:
        raise DomainError(f"point (k={pt.k}, s={pt.s}, w={pt.w}) is outside F")
    k, s, w = pt.k, pt.s, pt.w
    sg = pt.sign
    P = _cpow(TWO_PI, k - w)
    H = gamma_cos_zeta_half
    gw = cgamma(w)
    gkw = cgamma(k - w)
    T1 = P * H(s + w - k) / (_cpow(2.0, s - 1.0) * cgamma(s))
    T2 = sg * P * H(w - s) / (_cpow(2.0, k - s - 1.0) * cgamma(k - s))
    T3 = P * gw * H(k - s - w) / (_cpow(2.0, k - s - 1.0) * cgamma(k - s) * gkw)
    T4 = sg * P * gw * H(s - w) / (_cpow(2.0, s - 1.0) * cgamma(s) * gkw)
    w_int = w.imag == 0 and w.real == round(w.real)
    if not w_int:
        g5, g6 = _g_pair(s, w)
        f5, f6 = _f56(k, s, w)
        T5 = sg * P * g5 * f5
        T6 = sg * P * g6 * f6
    elif pt.opposite_parity:
        # exact limits of Gamma(w) Gamma(1-w) cos(...) as w -> w0
        si, w0 = pt.integer_parts()
        g5 = (-1) ** w0 * sinpi((si - w0) / 2.0).real * math.pi / 2.0
        g6 = (-1) ** (w0 - 1) * sinpi((si + w0) / 2.0).real * math.pi / 2.0
        f5, f6 = _f56(k, s, w)
        T5 = sg * P * g5 * f5
        T6 = sg * P * g6 * f6
    else:
        # T5 and T6 have opposite poles at integer w; their sum is
        # holomorphic there, so take its mean over a small circle
        def t56(wz: complex) -> complex:
            g5, g6 = _g_pair(s, wz)
            f5, f6 = _f56(k, s, wz)
            Pz = _cpow(TWO_PI, k - wz)
            return sg * Pz * (g5 * f5 + g6 * f6)
        T5 = cauchy_mean(t56, w, 0.05, 16)
        T6 = 0j
    return [T1, T2, T3, T4, T5, T6]


def continuation_main(pt: DomainPoint) -> complex:
    """Sum of the six main terms of the continuation (without R)."""
    return complex(sum(continuation_terms(pt)))


def residual_R(pt: DomainPoint, tr: Truncation = DEFAULT_TRUNCATION) -> CoeffValue:
    """R(s, w) = corollary22_c1 - continuation_main on F and D."""
    if not (pt.in_F and pt.in_D):
        raise DomainError("residual_R needs a point in both F and D")
    cv = corollary22_c1(pt, tr)
    terms = continuation_terms(pt)
    cm = complex(sum(terms))
    mag = cv.magnitude + sum(abs(t) for t in terms)
    return CoeffValue(cv.value - cm, cv.trunc_error_estimate + ROUND * mag, mag)


def r_bound_expression(pt: DomainPoint) -> float:
    """|Gamma(w)| / |Gamma(s) Gamma(k-s)| e^(pi(|Im s| + |Im w|)) zeta(k-1-max(Re s, Re w))."""
    k, s, w = pt.k, pt.s, pt.w
    arg = k - 1.0 - max(s.real, w.real)
    if arg <= 1.0:
        raise DomainError("zeta argument must exceed 1")
    return (abs(cgamma(w)) / abs(cgamma(s) * cgamma(k - s))
            * math.exp(math.pi * (abs(s.imag) + abs(w.imag))) * riemann_zeta(arg).real)


# brute-force oracle --------------------------------------------------------------------

def fourier_coefficient(samples: Sequence[complex], y: float, m: int) -> complex:
    """c(m) from equispaced samples of sum_m c(m) e(m z) on z = j/X + i y."""
    v = np.asarray(samples, np.complex128)
    X = v.size
    x = np.arange(X) / X
    ph = np.exp(-2j * math.pi * m * x) * math.exp(2.0 * math.pi * m * y)
    return complex(np.mean(v * ph))


@lru_cache(maxsize=4)
def _matrices(E: int, D: int):
    return kernels.enumerate_matrices(E, D)


@lru_cache(maxsize=8)
def _bf_samples(k, s, w, E, D, X, y, backend):
    mats = _matrices(E, D)
    zs = np.arange(X) / X + 1j * y
    full = kernels.matrix_sum(mats, zs, k, s, w)
    # a smaller box for the truncation estimate
    E2, D2 = (2 * E) // 3, (2 * D) // 3
    sub = mats[(np.abs(mats).max(axis=1) <= E2)
               & (mats[:, 0] * mats[:, 3] - mats[:, 1] * mats[:, 2] <= D2)]
    coarse = kernels.matrix_sum(np.ascontiguousarray(sub), zs, k, s, w)
    lead = cmath.exp(0.5j * math.pi * s) / _cpow(2.0, 1.0 + s)
    return lead * full, lead * coarse


def brute_force_fourier(pt: DomainPoint, m: int, tr: Truncation = DEFAULT_TRUNCATION) -> CoeffValue:
    """c(m) from the defining matrix sum over a finite box.

    The error estimate is BF_SAFETY times the change from a box with two
    thirds of the entry and determinant cutoffs, plus the aliasing bound
    from the samples.  The box change alone runs below the true error
    (the box tail decays slowly), hence the factor.
    """
    _require_D(pt)
    if not (0.5 <= tr.y <= 2.0):
        raise DomainError("y must lie in [0.5, 2]")
    if m < 1:
        raise DomainError("m must be a positive integer")
    from ._backend import get_backend
    full, coarse = _bf_samples(pt.k, pt.s, pt.w, tr.entry_max, tr.det_max,
                               tr.x_samples, float(tr.y), get_backend())
    v = fourier_coefficient(full, tr.y, m)
    vc = fourier_coefficient(coarse, tr.y, m)
    alias = float(np.max(np.abs(full))) * math.exp(-2.0 * math.pi * (tr.x_samples - m) * tr.y)
    return CoeffValue(v, BF_SAFETY * abs(v - vc) + alias, abs(v))


# functional equation -------------------------------------------------------------------

def functional_eq_check(p: ParityPoint) -> float:
    """Deviation between the m = 1 coefficient at w and sign times the one at k - w.

    Both sides are prefactor * continuation_main.  The deviation is taken
    relative to the larger side, or to the size of the constituent terms
    when both sides vanish.
    """
    k, s, w = p.k, p.s, p.w
    if not p.opposite_parity:
        raise DomainError("s and w must have opposite parity")
    for v in (s, w, k - w):
        if not (1.5 < v < k - 2):
            raise DomainError("s, w and k - w must lie in (3/2, k - 2)")
    a = DomainPoint(k, s, w)
    b = DomainPoint(k, s, k - w)
    ta, tb = continuation_terms(a), continuation_terms(b)
    va = prefactor(a) * sum(ta)
    vb = prefactor(b) * sum(tb)
    diff = abs(va - _ksign(k) * vb)
    den = max(abs(va), abs(vb))
    scale = max(abs(prefactor(a)) * sum(abs(t) for t in ta),
                abs(prefactor(b)) * sum(abs(t) for t in tb))
    if den <= 1e-12 * scale:
        den = scale
    return diff / den if den else 0.0
