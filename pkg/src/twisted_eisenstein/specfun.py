"""Complex special functions: Gamma, zeta variants, 1F1/1f1, 2F1, Lipschitz.

All complex powers use the principal branch, arg in (-pi, pi].  Values are
plain Python ``complex``; a non-finite result is turned into an error.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable, Tuple

import numpy as np

from . import kernels
from .errors import DomainError, PoleError, TruncationError
from .exact_core import gamma_cos_zeta_half_exact

ComplexValue = complex

__all__ = [
    "ComplexValue",
    "PrecisionPolicy",
    "DEFAULT_POLICY",
    "cgamma",
    "rgamma",
    "sinpi",
    "cospi",
    "riemann_zeta",
    "hurwitz_zeta",
    "periodic_zeta",
    "kummer_1f1",
    "kummer_1f1_integral",
    "gauss_2f1",
    "lipschitz_check",
    "gamma_cos_zeta_half",
    "cauchy_mean",
]


@dataclass(frozen=True)
class PrecisionPolicy:
    target_abs_err: float = 1e-12
    max_terms: int = 10 ** 6

    def __post_init__(self):
        if not (self.target_abs_err >= 1e-14):
            raise ValueError("target_abs_err below the double-precision floor 1e-14")
        if not (0 < self.max_terms <= 10 ** 8):
            raise ValueError("max_terms must be in (0, 1e8]")


DEFAULT_POLICY = PrecisionPolicy()


def _finite(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ArithmeticError("non-finite value")
    return z


def _near_int(x: float) -> int | None:
    r = round(x)
    return int(r) if x == r else None


def _int_if_real_integer(z: complex) -> int | None:
    z = complex(z)
    if z.imag != 0.0:
        return None
    return _near_int(z.real)


def sinpi(z) -> complex:
    """sin(pi z), exact zeros at integers."""
    z = complex(z)
    x, y = z.real, z.imag
    n = round(x)
    r = x - n
    sgn = -1.0 if n % 2 else 1.0
    sr, cr = math.sin(math.pi * r) * sgn, math.cos(math.pi * r) * sgn
    if y == 0.0:
        return complex(sr, 0.0)
    return complex(sr * math.cosh(math.pi * y), cr * math.sinh(math.pi * y))


def cospi(z) -> complex:
    """cos(pi z), exact zeros at half-integers."""
    z = complex(z)
    return sinpi(complex(z.real + 0.5, z.imag))


# Gamma ---------------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _lgamma_right(z: complex) -> complex:
    # Lanczos (g = 7, 9 terms) on Re z >= 1/2, in log form
    z = z - 1.0
    x = _LANCZOS[0]
    for i in range(1, 9):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def _gamma_core(z: complex) -> complex:
    # push the argument up before Lanczos: its relative error is smallest
    # for Re z of moderate size
    shift = 0
    w = z
    while w.real < 8.0:
        w += 1.0
        shift += 1
    g = cmath.exp(_lgamma_right(w))
    p = 1.0 + 0j
    for i in range(shift):
        p *= z + i
    return g / p


def cgamma(z) -> complex:
    """Gamma(z); relative error about 1e-14 on Re z in [-20, 40], |Im z| <= 40."""
    z = complex(z)
    n = _int_if_real_integer(z)
    if n is not None and n <= 0:
        raise PoleError(f"Gamma pole at {n}")
    if n is not None and n <= 171:
        return complex(math.factorial(n - 1))
    if z.real < 0.5:
        return _finite(math.pi / (sinpi(z) * _gamma_core(1.0 - z)))
    return _finite(_gamma_core(z))


def rgamma(z) -> complex:
    """1/Gamma(z), zero at the poles."""
    z = complex(z)
    n = _int_if_real_integer(z)
    if n is not None and n <= 0:
        return 0j
    return 1.0 / cgamma(z)


# Zeta functions --------------------------------------------------------------

def riemann_zeta(s, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """zeta(s) by Euler-Maclaurin for Re s >= 1/2 and reflection below."""
    s = complex(s)
    if s == 1:
        raise PoleError("zeta pole at s = 1")
    if s == 0:
        return -0.5 + 0j
    if s.real >= 0.5:
        return _finite(kernels.hurwitz_scaled(s, 1.0))
    n = _int_if_real_integer(s)
    if n is not None and n < 0 and n % 2 == 0:
        return 0j
    one_s = 1.0 - s
    return _finite(2.0 ** s * math.pi ** (s - 1.0) * sinpi(s / 2.0)
                   * cgamma(one_s) * kernels.hurwitz_scaled(one_s, 1.0))


def _small_rational(a: float, qmax: int = 64) -> Fraction | None:
    f = Fraction(a).limit_denominator(qmax)
    if abs(float(f) - a) <= 4e-16 * max(1.0, abs(a)):
        return f
    return None


def _hurwitz_reflect_rational(s: complex, a: Fraction) -> complex:
    # zeta(1-u, p/q) = 2 Gamma(u)/(2 pi q)^u sum_r cos(pi u/2 - 2 pi r p/q) zeta(u, r/q)
    p, q = a.numerator, a.denominator
    u = 1.0 - s
    acc = 0j
    for r in range(1, q + 1):
        ang = Fraction(2 * r * p, q) % 2
        c = cospi(u / 2.0 - float(ang))
        acc += c * kernels.hurwitz_scaled(u, r / q) * cmath.exp(-u * math.log(r / q))
    return 2.0 * cgamma(u) * cmath.exp(-u * math.log(2.0 * math.pi * q)) * acc


def _hurwitz_em_nonpositive_int(n: int, a: float) -> complex:
    # Euler-Maclaurin with no shift is exact (finite) at s = -n
    s = -float(n)
    tail = a ** (1 - s) / (s - 1.0) + 0.5 * a ** (-s)
    poch = s
    for j in range(1, n // 2 + 2):
        # (s)_{2j-1}
        tail += kernels.EM_COEFFS[j - 1] * poch * a ** (-s - 2 * j + 1)
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        if poch == 0:
            break
    return complex(tail)


def hurwitz_zeta(s, a, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """zeta(s, a) for a in (0, 2].

    Re s >= 0 goes through Euler-Maclaurin (12 corrections, fixed shift
    rule).  For Re s < 0 the direct sum cancels badly, so nonpositive
    integers use the terminating Euler-Maclaurin formula and rational a with
    denominator <= 64 use the rational functional equation; other a fall back
    to shifted Euler-Maclaurin with reduced absolute accuracy.
    """
    s = complex(s)
    a = float(a)
    if not (0.0 < a <= 2.0):
        raise DomainError("hurwitz_zeta needs a in (0, 2]")
    if s == 1:
        raise PoleError("Hurwitz zeta pole at s = 1")
    if s.real >= 0.0:
        return _finite(kernels.hurwitz_scaled(s, a) * cmath.exp(-s * math.log(a)))
    n = _int_if_real_integer(s)
    if n is not None and -n <= 2 * kernels.EM_ORDER - 1:
        return _finite(_hurwitz_em_nonpositive_int(-n, a))
    if a > 1.0:
        return hurwitz_zeta(s, a - 1.0, policy) - cmath.exp(-s * math.log(a - 1.0))
    fr = _small_rational(a)
    if fr is not None:
        return _finite(_hurwitz_reflect_rational(s, fr))
    return _finite(kernels.hurwitz_scaled(s, a) * cmath.exp(-s * math.log(a)))


def _hurwitz_em_complex(s: complex, a: complex, shift: int = 0) -> complex:
    """sum_{n>=0} (n + a)^-s for complex a away from the cut, Euler-Maclaurin."""
    acc = 0j
    for n in range(shift):
        acc += cmath.exp(-s * cmath.log(n + a))
    x = a + shift
    lx = cmath.log(x)
    tail = cmath.exp((1.0 - s) * lx) / (s - 1.0) + 0.5 * cmath.exp(-s * lx)
    poch = s
    for j in range(1, kernels.EM_ORDER + 1):
        tail += kernels.EM_COEFFS[j - 1] * poch * cmath.exp((-s - 2 * j + 1) * lx)
        poch *= (s + 2 * j - 1) * (s + 2 * j)
    return acc + tail


def cauchy_mean(f: Callable[[complex], complex], center: complex, radius: float,
                nodes: int = 32) -> complex:
    """Mean of f on a circle; equals f(center) for f holomorphic on the disc."""
    acc = 0j
    for j in range(nodes):
        acc += f(center + radius * cmath.exp(2j * math.pi * (j + 0.5) / nodes))
    return acc / nodes


def _euler_tail(sigma: complex, phase: Fraction, M: int, pmax: int = 30) -> Tuple[complex, float]:
    """sum_{n >= M} e(n phase) n^-sigma for phase not in Z, by the Euler
    transform sum_p w^p Delta^p g(M) / (1-w)^(p+1); returns (value, error)."""
    om = cmath.exp(2j * math.pi * float(phase % 1))
    ratio = om / (1.0 - om)
    g = [cmath.exp(-sigma * math.log(M + i)) for i in range(pmax + 1)]
    acc = 0j
    fac = om ** 0 / (1.0 - om)
    prev = math.inf
    err = math.inf
    diffs = list(g)
    for p in range(pmax):
        t = fac * diffs[0]
        at = abs(t)
        if at > prev:
            break
        acc += t
        err = at
        prev = at
        if at < 1e-18 * abs(acc):
            break
        fac *= ratio
        diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
        if len(diffs) == 0:
            break
    start = cmath.exp(2j * math.pi * float((M * phase) % 1))
    return start * acc, err


def periodic_zeta(s, x, method: str = "direct",
                  policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """F(s, x) = sum_{n>=1} e^(2 pi i n x) n^-s for x in (0, 1).

    ``method="direct"`` sums to N terms and closes with an Euler-transform
    tail (Re s > 1).  ``method="hurwitz"`` uses
    Gamma(1-s)/(2 pi)^(1-s) [e^(i pi (1-s)/2) zeta(1-s, x)
                             + e^(-i pi (1-s)/2) zeta(1-s, 1-x)],
    taking a circle mean around integer s where Gamma(1-s) has a pole.
    """
    s = complex(s)
    xf = float(x)
    if not (0.0 < xf < 1.0):
        raise DomainError("periodic_zeta needs x in (0, 1); use riemann_zeta at x = 0")
    if method == "direct":
        if s.real <= 1.0:
            raise DomainError("direct series needs Re s > 1")
        ph = Fraction(x) if isinstance(x, (Fraction, int)) else Fraction(xf)
        N = 200
        acc = 0j
        for n in range(1, N + 1):
            acc += cmath.exp(2j * math.pi * float((n * ph) % 1) - s * math.log(n))
        tail, err = _euler_tail(s, ph, N + 1)
        if err > policy.target_abs_err:
            raise TruncationError(f"periodic zeta tail error {err:.2e} above target")
        return _finite(acc + tail)
    if method == "hurwitz":
        def comb_(u: complex) -> complex:
            v = 1.0 - u
            return (cgamma(v) * cmath.exp(-v * math.log(2.0 * math.pi))
                    * (cmath.exp(0.5j * math.pi * v) * hurwitz_zeta(v, xf)
                       + cmath.exp(-0.5j * math.pi * v) * hurwitz_zeta(v, 1.0 - xf)))
        if _int_if_real_integer(s) is not None:
            return _finite(cauchy_mean(comb_, s, 0.125, 48))
        return _finite(comb_(s))
    raise ValueError(f"unknown method {method!r}")


# Kummer ----------------------------------------------------------------------

def _dec_complex_series(a: complex, b: complex, z: complex, max_terms: int) -> complex:
    """Taylor series of 1F1 in extended-precision decimal arithmetic."""
    digits = 30 + int(abs(z) / math.log(10.0)) + 5
    with localcontext() as ctx:
        ctx.prec = digits
        D = Decimal
        ar, ai = D(a.real), D(a.imag)
        br, bi = D(b.real), D(b.imag)
        zr, zi = D(z.real), D(z.imag)
        tr, ti = D(1), D(0)
        sr, si = D(1), D(0)
        tiny = D(10) ** (-(digits - 2))
        n = 0
        while True:
            # t *= (a+n) z / ((b+n)(n+1))
            pr, pi_ = ar + n, ai
            qr, qi = br + n, bi
            nr = (tr * pr - ti * pi_)
            ni = (tr * pi_ + ti * pr)
            nr, ni = nr * zr - ni * zi, nr * zi + ni * zr
            den = (qr * qr + qi * qi) * (n + 1)
            if den == 0:
                raise PoleError("b is a nonpositive integer")
            tr = (nr * qr + ni * qi) / den
            ti = (ni * qr - nr * qi) / den
            sr += tr
            si += ti
            n += 1
            mag = abs(tr) + abs(ti)
            if n > abs(z) + 2 and mag <= tiny * (abs(sr) + abs(si) + tiny):
                break
            if mag == 0:
                break
            if n > max_terms:
                raise TruncationError("1F1 series did not converge")
        return complex(float(sr), float(si))


def kummer_1f1(a, b, z, policy: PrecisionPolicy = DEFAULT_POLICY) -> Tuple[complex, complex]:
    """Return (1F1(a, b; z), 1f1(a, b; z)).

    The Taylor series is summed in decimal arithmetic with enough digits to
    absorb the e^|z| growth of individual terms, so the result keeps double
    accuracy on |z| <= 50 even where the terms cancel.
    """
    a, b, z = complex(a), complex(b), complex(z)
    nb = _int_if_real_integer(b)
    if nb is not None and nb <= 0:
        raise PoleError("b is a nonpositive integer")
    F = _dec_complex_series(a, b, z, policy.max_terms)
    na = _int_if_real_integer(a)
    nba = _int_if_real_integer(b - a)
    if (na is not None and na <= 0) or (nba is not None and nba <= 0):
        raise PoleError("Gamma pole in the 1f1 prefactor")
    f = cgamma(a) * cgamma(b - a) / cgamma(b) * F
    return _finite(F), _finite(f)


_TS_CACHE = {}


def _ts_nodes(level: int):
    if level not in _TS_CACHE:
        _TS_CACHE[level] = kernels.tanh_sinh_nodes(h=2.0 ** -level, tmax=4.0)
    return _TS_CACHE[level]


def kummer_1f1_integral(a, b, z, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """int_0^1 e^(zu) u^(a-1) (1-u)^(b-a-1) du by tanh-sinh quadrature.

    The double-exponential change of variables absorbs the algebraic
    endpoint singularities.  The step is halved until two successive levels
    agree to the target.
    """
    a, b, z = complex(a), complex(b), complex(z)
    if not (b.real > a.real > 0.0):
        raise DomainError("need Re b > Re a > 0")
    prev = None
    for level in range(4, 9):
        u, lu, l1u, wts = _ts_nodes(level)
        W = wts * np.exp((a - 1.0) * lu + (b - a - 1.0) * l1u)
        val = complex(kernels.quad_sum(np.array([z]), u, W)[0])
        if prev is not None and abs(val - prev) <= 0.1 * policy.target_abs_err * max(1.0, abs(val)):
            return _finite(val)
        prev = val
    if prev is not None and abs(val - prev) <= policy.target_abs_err * max(1.0, abs(val)):
        return _finite(val)
    raise TruncationError("tanh-sinh quadrature did not settle")


# Gauss -----------------------------------------------------------------------

def _gauss_terminating_rational(a: float, b: float, c: float, z: float, n: int,
                                regularized: bool) -> complex:
    """Terminating 2F1 (or 2F1/Gamma(c)) summed in exact rational arithmetic."""
    A, B, C, Z = (Fraction(v) for v in (a, b, c, z))
    nc = _near_int(c)
    # without regularization the caller has checked that (c)_j stays nonzero
    c_pole = regularized and nc is not None and nc <= 0
    acc = Fraction(0)
    t = Fraction(1)            # (a)_j (b)_j z^j / j!
    cj = Fraction(1)           # (c)_j
    for j in range(n + 1):
        if j > 0:
            t *= (A + j - 1) * (B + j - 1) * Z / j
            cj *= C + j - 1
        if c_pole:
            # 1/Gamma(c + j) vanishes until c + j >= 1
            if nc + j >= 1:
                acc += t / math.factorial(nc + j - 1)
        else:
            acc += t / cj
    if c_pole:
        return complex(float(acc))
    if regularized:
        if nc is not None:
            return complex(float(acc / math.factorial(nc - 1)))
        return complex(float(acc)) * rgamma(c)
    return complex(float(acc))


def gauss_2f1(a, b, c, z, regularized: bool = False,
              policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """Taylor series of 2F1(a, b; c; z) for |z| <= 0.6.

    With ``regularized=True`` returns 2F1/Gamma(c), which stays finite when
    c is a nonpositive integer.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if abs(z) > 0.6 + 1e-15:
        raise DomainError("gauss_2f1 is restricted to |z| <= 0.6")
    na = _int_if_real_integer(a)
    nb = _int_if_real_integer(b)
    term_stop = None
    for v in (na, nb):
        if v is not None and v <= 0:
            term_stop = -v if term_stop is None else min(term_stop, -v)
    nc = _int_if_real_integer(c)
    c_pole = nc is not None and nc <= 0
    if c_pole and not regularized:
        if term_stop is None or term_stop >= -nc + 1:
            raise PoleError("(c)_j vanishes before the series terminates")
    if term_stop is not None and all(v.imag == 0 for v in (a, b, c, z)):
        # a terminating series with real inputs cancels badly in floating
        # point; sum it exactly on the binary values of the inputs
        return _gauss_terminating_rational(a.real, b.real, c.real, z.real, term_stop, regularized)
    if regularized and c_pole:
        j0 = 1 - nc
        if term_stop is not None and j0 > term_stop:
            return 0j
        # first surviving term: (a)_j0 (b)_j0 z^j0 / (j0! Gamma(c + j0))
        t = 1.0 + 0j
        for i in range(j0):
            t *= (a + i) * (b + i) * z / (i + 1)
        j = j0
        # Gamma(c + j0) = Gamma(1) = 1
    else:
        t = rgamma(c) if regularized else 1.0 + 0j
        j = 0
    acc = 0j
    while True:
        acc += t
        if term_stop is not None and j >= term_stop:
            break
        t = t * (a + j) * (b + j) * z / ((c + j) * (j + 1))
        j += 1
        if term_stop is None and abs(t) < 1e-17 * abs(acc) and j > abs(a * b / c):
            acc += t
            break
        if j > policy.max_terms:
            raise TruncationError("2F1 series did not converge")
    return _finite(acc)


# Lipschitz formula ------------------------------------------------------------

def lipschitz_check(tau, s, N: int, tail_correction: bool = True) -> Tuple[complex, complex]:
    """Both sides of sum_n (tau + n)^-s = e^(-i pi s/2) (2 pi)^s / Gamma(s) sum_{n>=1} n^(s-1) e(n tau).

    The left side is summed over |n| <= N; with ``tail_correction`` the two
    tails |n| > N are added by Euler-Maclaurin.  The right side is summed to N
    (it converges geometrically).
    """
    tau, s = complex(tau), complex(s)
    if tau.imag <= 0:
        raise DomainError("need Im tau > 0")
    if s.real <= 1:
        raise DomainError("need Re s > 1")
    if N < 1:
        raise DomainError("need N >= 1")
    lhs = 0j
    for n in range(-N, N + 1):
        lhs += cmath.exp(-s * cmath.log(tau + n))
    if tail_correction:
        # n > N: (tau + N + 1 + m)^-s ; n < -N: e^(-i pi s) (N + 1 - tau + m)^-s
        lhs += _hurwitz_em_complex(s, tau + N + 1)
        lhs += cmath.exp(-1j * math.pi * s) * _hurwitz_em_complex(s, N + 1 - tau)
    rhs = 0j
    for n in range(1, N + 1):
        t = cmath.exp((s - 1.0) * math.log(n) + 2j * math.pi * n * tau)
        rhs += t
        if abs(t) < 1e-300:
            break
    rhs *= cmath.exp(-0.5j * math.pi * s + s * math.log(2.0 * math.pi)) / cgamma(s)
    return _finite(lhs), _finite(rhs)


# Gamma(x) cos(pi x/2) zeta(x, 1/2) ------------------------------------------------

def gamma_cos_zeta_half(x) -> complex:
    """Entire function Gamma(x) cos(pi x/2) zeta(x, 1/2).

    Evaluated as (2^x - 1)(2 pi)^x zeta(1-x)/2; odd integers use the exact
    limit values and x = 0 the limit -log(2)/2.
    """
    x = complex(x)
    n = _int_if_real_integer(x)
    if n is not None:
        if n % 2:
            return complex(float(gamma_cos_zeta_half_exact(n)))
        if n == 0:
            return complex(-0.5 * math.log(2.0))
    return _finite((cmath.exp(x * math.log(2.0)) - 1.0)
                   * cmath.exp(x * math.log(2.0 * math.pi)) * riemann_zeta(1.0 - x) / 2.0)
