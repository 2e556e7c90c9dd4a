"""Exact rational arithmetic for the first Fourier coefficient at integer points.

Everything here works over ``fractions.Fraction`` (aliased ``BigRational``)
plus the small ``HalfPiExact`` wrapper for values of the form r * pi**(e/2).
No floating point is used anywhere in this module.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Tuple, Union

from .errors import DomainError, PoleError

BigRational = Fraction
RationalLike = Union[int, Fraction, str]

__all__ = [
    "BigRational",
    "HalfPiExact",
    "ParityPoint",
    "as_rational",
    "bernoulli",
    "bernoulli_poly",
    "rho",
    "delta_sign",
    "pochhammer_exact",
    "gamma_half_exact",
    "gamma_ratio_exact",
    "hyp2f1_terminating_exact",
    "hyp2f1_regularized_terminating_exact",
    "hyp2f1_half_closed_exact",
    "gamma_cos_zeta_half_exact",
    "prop41_terms_exact",
    "prop41_c1_exact",
    "prop41_c1_closed_form",
    "prop41_terms_flipped",
    "prop41_c1_flipped",
    "reduce_to_F",
    "inner_product_rational",
    "fraction_str",
]


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings; floats are refused."""
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def fraction_str(x: Fraction) -> str:
    """Serialize as "numerator/denominator" in base 10."""
    x = as_rational(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class HalfPiExact:
    """The exact number ``coefficient * pi**(pi_half_exponent / 2)``."""

    coefficient: Fraction
    pi_half_exponent: int = 0

    def __post_init__(self):
        c = as_rational(self.coefficient)
        e = int(self.pi_half_exponent)
        if c == 0:
            e = 0
        object.__setattr__(self, "coefficient", c)
        object.__setattr__(self, "pi_half_exponent", e)

    @classmethod
    def of(cls, x: RationalLike) -> "HalfPiExact":
        return cls(as_rational(x), 0)

    def is_zero(self) -> bool:
        return self.coefficient == 0

    def _coerce(self, other) -> "HalfPiExact":
        if isinstance(other, HalfPiExact):
            return other
        return HalfPiExact.of(other)

    def __mul__(self, other):
        o = self._coerce(other)
        return HalfPiExact(self.coefficient * o.coefficient,
                           self.pi_half_exponent + o.pi_half_exponent)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by exact zero")
        return HalfPiExact(self.coefficient / o.coefficient,
                           self.pi_half_exponent - o.pi_half_exponent)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return HalfPiExact(-self.coefficient, self.pi_half_exponent)

    def __add__(self, other):
        o = self._coerce(other)
        if self.is_zero():
            return o
        if o.is_zero():
            return self
        if o.pi_half_exponent != self.pi_half_exponent:
            raise ValueError("cannot add values with different powers of pi")
        return HalfPiExact(self.coefficient + o.coefficient, self.pi_half_exponent)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __eq__(self, other):
        if not isinstance(other, HalfPiExact):
            try:
                other = HalfPiExact.of(other)
            except TypeError:
                return NotImplemented
        return (self.coefficient == other.coefficient
                and self.pi_half_exponent == other.pi_half_exponent)

    def __hash__(self):
        return hash((self.coefficient, self.pi_half_exponent))

    def rational(self) -> Fraction:
        """The value as a rational; only valid when no power of pi remains."""
        if self.pi_half_exponent != 0:
            raise ValueError("value carries a power of pi")
        return self.coefficient

    def __float__(self):
        from math import pi, sqrt
        e = self.pi_half_exponent
        return float(self.coefficient) * (pi ** (e // 2)) * (sqrt(pi) if e % 2 else 1.0)

    def __repr__(self):
        return f"HalfPiExact({fraction_str(self.coefficient)}, pi^({self.pi_half_exponent}/2))"


@dataclass(frozen=True)
class ParityPoint:
    """Integer triple (k, s, w) with k even and at least 6."""

    k: int
    s: int
    w: int

    def __post_init__(self):
        for name in ("k", "s", "w"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise DomainError(f"{name} must be an integer")
        if self.k % 2:
            raise DomainError("k must be even")
        if self.k < 6:
            raise DomainError("k must be at least 6")

    @property
    def opposite_parity(self) -> bool:
        return (self.s + self.w) % 2 == 1

    @property
    def in_F(self) -> bool:
        k = self.k
        return 2 <= self.s <= k - 3 and 2 <= self.w <= k - 3

    @property
    def in_D(self) -> bool:
        k, s, w = self.k, self.s, self.w
        return 2 < s < k - 2 and w < min(s - 1, k - s - 1)


# Bernoulli numbers ---------------------------------------------------------

_bern_lock = threading.Lock()
_bern_cache = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """Exact B_n with B_1 = -1/2, from sum_{j<=n} C(n+1, j) B_j = 0."""
    if n < 0:
        raise DomainError("bernoulli index must be nonnegative")
    if n < len(_bern_cache):
        return _bern_cache[n]
    with _bern_lock:
        cache = _bern_cache
        for m in range(len(cache), n + 1):
            if m > 1 and m % 2:
                cache.append(Fraction(0))
                continue
            acc = Fraction(0)
            for j in range(m):
                if cache[j]:
                    acc += comb(m + 1, j) * cache[j]
            cache.append(-acc / (m + 1))
    return _bern_cache[n]


def bernoulli_poly(n: int, x: RationalLike) -> Fraction:
    """B_n(x) = sum_j C(n, j) B_j x^(n-j)."""
    if n < 0:
        raise DomainError("bernoulli_poly degree must be nonnegative")
    x = as_rational(x)
    return sum((comb(n, j) * bernoulli(j) * x ** (n - j) for j in range(n + 1)),
               Fraction(0))


def rho(n: int) -> Fraction:
    """rho(2m) = (-1)^(m+1) B_2m / (2m)!, and 0 for negative arguments."""
    if n < 0:
        return Fraction(0)
    if n % 2:
        raise DomainError("rho is only defined at negative or even arguments")
    m = n // 2
    sign = -1 if m % 2 == 0 else 1
    return sign * bernoulli(n) / factorial(n)


def delta_sign(n: int, r: int) -> int:
    if r < 0:
        raise DomainError("r must be nonnegative")
    if n >= 0:
        return -1 if r % 2 else 1
    return 1


# Gamma at integers and half-integers ----------------------------------------

def pochhammer_exact(x: RationalLike, n: int) -> Fraction:
    """Rising factorial (x)_n = x (x+1) ... (x+n-1)."""
    if n < 0:
        raise DomainError("Pochhammer length must be nonnegative")
    x = as_rational(x)
    p = Fraction(1)
    for i in range(n):
        p *= x + i
    return p


def _is_nonpositive_integer(x: Fraction) -> bool:
    return x.denominator == 1 and x <= 0


def gamma_half_exact(x: RationalLike) -> HalfPiExact:
    """Gamma(x) for x in (1/2)Z, x > 0."""
    x = as_rational(x)
    if (2 * x).denominator != 1:
        raise DomainError("argument must be a half-integer")
    if x <= 0:
        raise PoleError("gamma_half_exact needs a positive argument")
    if x.denominator == 1:
        return HalfPiExact(Fraction(factorial(int(x) - 1)), 0)
    n = int(x - Fraction(1, 2))
    return HalfPiExact(Fraction(factorial(2 * n), 4 ** n * factorial(n)), 1)


def gamma_ratio_exact(x: RationalLike, y: RationalLike) -> Fraction:
    """Gamma(x)/Gamma(y) for x - y an integer, as a rising-factorial product.

    Poles are resolved by cancellation: with d = x - y >= 0 the value is
    (y)_d, which vanishes when the product crosses zero.  With d < 0 the value
    is 1/(x)_{-d}; a zero factor there means a genuine pole.
    """
    x, y = as_rational(x), as_rational(y)
    d = x - y
    if d.denominator != 1:
        raise DomainError("Gamma ratio needs an integer difference")
    d = int(d)
    if d >= 0:
        return pochhammer_exact(y, d)
    p = pochhammer_exact(x, -d)
    if p == 0:
        raise PoleError(f"Gamma({x})/Gamma({y}) is infinite")
    return 1 / p


# Terminating Gauss series ---------------------------------------------------

def hyp2f1_terminating_exact(a: int, b: RationalLike, c: RationalLike,
                             z: RationalLike) -> Fraction:
    """sum_{j=0}^{-a} (a)_j (b)_j / ((c)_j j!) z^j for a nonpositive integer a."""
    if int(a) != a or a > 0:
        raise DomainError("a must be a nonpositive integer")
    a = int(a)
    b, c, z = as_rational(b), as_rational(c), as_rational(z)
    total = Fraction(1)
    term = Fraction(1)
    for j in range(-a):
        den = (c + j) * (j + 1)
        if c + j == 0:
            raise PoleError(f"(c)_j vanishes at j={j + 1} before termination")
        term = term * (a + j) * (b + j) * z / den
        total += term
    return total


def hyp2f1_regularized_terminating_exact(a: int, b: RationalLike, c: RationalLike,
                                         z: RationalLike) -> Fraction:
    """sum_j (a)_j (b)_j / (j! Gamma(c+j)) z^j, with 1/Gamma = 0 at poles.

    Requires c to be an integer so that every 1/Gamma(c+j) is rational.
    This is 2F1(a, b; c; z)/Gamma(c), continuous through nonpositive c.
    """
    if int(a) != a or a > 0:
        raise DomainError("a must be a nonpositive integer")
    a = int(a)
    b, c, z = as_rational(b), as_rational(c), as_rational(z)
    if c.denominator != 1:
        raise DomainError("regularized exact series needs an integer c")
    total = Fraction(0)
    for j in range(-a + 1):
        cj = c + j
        if cj <= 0:
            continue
        total += (pochhammer_exact(a, j) * pochhammer_exact(b, j) * z ** j
                  / (factorial(j) * factorial(int(cj) - 1)))
    return total


# Closed form of 2F1 at z = 1/2 ----------------------------------------------

class _Ser:
    """Two-term Laurent expansion  eps**order * (c0 + c1 * eps)  in eps.

    ``c0`` is an exact HalfPiExact; ``c1`` is a formal combination of the
    symbols "1", "gamma" (Euler's constant) and "ln2", each with a
    HalfPiExact coefficient.  Those constants arise from digamma values and
    must cancel in any rational final answer.
    """

    __slots__ = ("order", "c0", "c1")

    def __init__(self, order: int, c0: HalfPiExact, c1=None):
        self.order = order
        self.c0 = c0
        self.c1 = dict(c1 or {})

    @staticmethod
    def _scale(d, f):
        return {k: v * f for k, v in d.items()}

    @staticmethod
    def _add(d1, d2):
        out = dict(d1)
        for k, v in d2.items():
            out[k] = out[k] + v if k in out else v
        return out

    def __mul__(self, o: "_Ser") -> "_Ser":
        c1 = self._add(self._scale(self.c1, o.c0), self._scale(o.c1, self.c0))
        return _Ser(self.order + o.order, self.c0 * o.c0, c1)

    def inverse(self) -> "_Ser":
        if self.c0.is_zero():
            raise PoleError("cannot invert a vanishing leading term")
        inv0 = 1 / self.c0
        c1 = self._scale(self.c1, -(inv0 * inv0))
        return _Ser(-self.order, inv0, c1)

    def scaled(self, f) -> "_Ser":
        return _Ser(self.order, self.c0 * f, self._scale(self.c1, f))


def _digamma_exact(x: Fraction):
    """psi(x) at a positive integer or any non-integral half-integer.

    Returned as a dict over the symbols "1", "gamma", "ln2".
    """
    if x.denominator == 1:
        n = int(x)
        if n <= 0:
            raise PoleError("digamma pole")
        h = sum((Fraction(1, j) for j in range(1, n)), Fraction(0))
        return {"1": h, "gamma": Fraction(-1)}
    if x < 0:
        # reflection; cot(pi x) vanishes at half-integers
        x = 1 - x
    m = int(x - Fraction(1, 2))
    h = sum((Fraction(2, 2 * j - 1) for j in range(1, m + 1)), Fraction(0))
    return {"1": h, "gamma": Fraction(-1), "ln2": Fraction(-2)}


def _gamma_ser(x0: Fraction, slope: Fraction) -> _Ser:
    """Gamma(x0 + slope*eps) to two orders."""
    if _is_nonpositive_integer(x0):
        if slope == 0:
            raise PoleError(f"Gamma has a fixed pole at {x0}")
        m = int(-x0)
        lead = HalfPiExact(Fraction(-1 if m % 2 else 1, factorial(m)), 0)
        # Gamma(-m + d) = (-1)^m/m! (1/d + psi(m+1) + O(d)),  d = slope*eps
        c1 = {k: lead * v for k, v in _digamma_exact(Fraction(m + 1)).items()}
        return _Ser(-1, lead / slope, c1)
    if x0 > 0:
        g = gamma_half_exact(x0)
    else:
        m = int(-x0) + 1
        g = gamma_half_exact(x0 + m) / pochhammer_exact(x0, m)
    if slope == 0:
        return _Ser(0, g)
    c1 = {k: g * (v * slope) for k, v in _digamma_exact(x0).items()}
    return _Ser(0, g, c1)


def hyp2f1_half_closed_exact(a: int, b: int, n: int, *,
                             regularized: bool = False) -> HalfPiExact:
    """2F1(a, b; (a+b+n+1)/2; 1/2) from the Gamma closed form.

    Gamma factors that depend on ``a`` are expanded as a -> a + eps, so
    coinciding poles in numerator and denominator cancel algebraically and a
    vanishing leading order is resolved from the next Laurent coefficient
    (digamma constants are carried symbolically and must cancel).  A
    surviving negative power of eps is a genuine pole and raises.  With
    ``regularized=True`` the result is divided by Gamma(c), which keeps the
    formula meaningful when c is a nonpositive integer.
    """
    for name, v in (("a", a), ("b", b), ("n", n)):
        if int(v) != v:
            raise DomainError(f"{name} must be an integer")
    a, b, n = int(a), int(b), int(n)
    if (a + b + n) % 2 == 0:
        raise DomainError("a + b + n must be odd")
    if b < 1:
        raise DomainError("closed form needs b >= 1")
    half = Fraction(1, 2)
    zero = Fraction(0)
    c = Fraction(a + b + n + 1, 2)
    N = abs(n)
    if not regularized and _is_nonpositive_integer(c):
        raise PoleError("c is a nonpositive integer")

    pref = gamma_half_exact(half) / (gamma_half_exact(Fraction(b, 2))
                                     * gamma_half_exact(Fraction(b + 1, 2)))
    lead = _Ser(0, pref)
    if not regularized:
        lead = lead * _gamma_ser(c, half)
    lead = lead * _gamma_ser(Fraction(a - b - N + 1, 2), half)
    lead = lead * _gamma_ser(Fraction(a - b + n + 1, 2), half).inverse()

    terms = []
    for r in range(N + 1):
        t = (lead * _gamma_ser(Fraction(b + r, 2), zero)
             * _gamma_ser(Fraction(a - N + r + 1, 2), half).inverse())
        terms.append(t.scaled(comb(N, r) * delta_sign(n, r)))

    low = min(t.order for t in terms)
    if low > 0:
        return HalfPiExact(0)
    c0 = HalfPiExact(0)
    c1 = {}
    for t in terms:
        if t.order == low:
            c0 = c0 + t.c0
            c1 = _Ser._add(c1, t.c1)
        elif t.order == low + 1:
            c1 = _Ser._add(c1, {"1": t.c0})
    if low == 0:
        return c0
    if low < -1 or not c0.is_zero():
        raise PoleError(f"2F1({a}, {b}; {c}; 1/2) closed form is infinite")
    for sym in ("gamma", "ln2"):
        if sym in c1 and not c1[sym].is_zero():
            raise PoleError("closed form has a pole in its Gamma factors; the finite "
                            "part is not of the form rational * pi^(e/2)")
    return c1.get("1", HalfPiExact(0))


# Gamma(x) cos(pi x/2) zeta(x, 1/2) at odd integers --------------------------

def gamma_cos_zeta_half_exact(m: int) -> HalfPiExact:
    """Limit of Gamma(x) cos(pi x/2) zeta(x, 1/2) at an odd integer x = m.

    The value is -pi/2 at m = 1, zero at odd m > 1 and
    (2^m - 1) pi rho(1 - m) / 2 at negative odd m.
    """
    if int(m) != m or m % 2 == 0:
        raise DomainError("m must be an odd integer")
    m = int(m)
    if m == 1:
        return HalfPiExact(Fraction(-1, 2), 2)
    if m > 1:
        return HalfPiExact(0)
    return HalfPiExact((Fraction(2) ** m - 1) * rho(1 - m) / 2, 2)


# First Fourier coefficient at integer points ---------------------------------

def _sin_half_pi_odd(d: int) -> int:
    """sin(pi d / 2) for odd d."""
    return 1 if ((d - 1) // 2) % 2 == 0 else -1


def _check_prop_point(p: ParityPoint) -> None:
    if not isinstance(p, ParityPoint):
        raise TypeError("expected a ParityPoint")
    if not p.opposite_parity:
        raise DomainError("opposite parity required")
    if not p.in_F:
        raise DomainError(f"(s, w) = ({p.s}, {p.w}) is outside F for k = {p.k}")


def _gamma_int(n: int) -> Fraction:
    return Fraction(factorial(n - 1))


def prop41_terms_exact(p: ParityPoint, *, hyp: str = "series") -> Tuple[Fraction, ...]:
    """The six rational pieces of 2 (2 pi)^(w-k-1) c(1) at an integer point.

    The last two pieces come from the Gauss-function main terms, evaluated as
    the w -> w0 limit of Gamma(1-w) cos(pi(s -+ w)/2).  ``hyp`` selects how the
    regularized 2F1(...; 1/2) values are produced: ``"series"`` (terminating
    sum, the production path) or ``"closed"`` (Gamma closed form).
    """
    _check_prop_point(p)
    k, s, w = p.k, p.s, p.w
    sg = 1 if (k // 2) % 2 == 0 else -1
    two = Fraction(2)
    half = Fraction(1, 2)

    def f21reg(a, b, c):
        if hyp == "series":
            return hyp2f1_regularized_terminating_exact(a, b, c, half)
        if hyp == "closed":
            return hyp2f1_half_closed_exact(a, b, 2 * c - a - b - 1,
                                            regularized=True).rational()
        raise ValueError(f"unknown hyp path {hyp!r}")

    Gs, Gks, Gw, Gkw = _gamma_int(s), _gamma_int(k - s), _gamma_int(w), _gamma_int(k - w)
    q1 = (two ** (s + w - k) - 1) / (two ** s * Gs) * rho(k - w - s + 1)
    q2 = sg * (two ** (w - s) - 1) / (two ** (k - s) * Gks) * rho(s - w + 1)
    q3 = (two ** (k - s - w) - 1) * Gw / (two ** (k - s) * Gks * Gkw) * rho(s + w - k + 1)
    q4 = sg * (two ** (s - w) - 1) * Gw / (two ** s * Gs * Gkw) * rho(w - s + 1)
    sw = -1 if w % 2 else 1
    q5 = (sg * sw * _sin_half_pi_odd(s - w) / (two ** (k - s) * Gs)
          * f21reg(1 - s, k - s, k - s - w + 1))
    q6 = (-sg * sw * _sin_half_pi_odd(s + w) / (two ** s * Gks)
          * f21reg(s + 1 - k, s, 1 + s - w))
    return (q1, q2, q3, q4, q5, q6)


def prop41_c1_exact(p: ParityPoint) -> Fraction:
    """Rational q with 2 (2 pi)^(w-k-1) c(1) = q at an integer point of F."""
    return sum(prop41_terms_exact(p), Fraction(0))


def prop41_c1_closed_form(p: ParityPoint) -> Fraction:
    """Same value, with the Gauss values taken from the Gamma closed form."""
    return sum(prop41_terms_exact(p, hyp="closed"), Fraction(0))


def _flipped_product_sum(k: int, w: int, beta: int) -> Fraction:
    N = abs(k - 2 * w)
    total = Fraction(0)
    for r in range(N + 1):
        prod = Fraction(1)
        for j in range(1, (k + N - 2) // 2 + 1):
            prod *= j + Fraction(beta - k - N + r, 2)
        total += delta_sign(k - 2 * w, r) * comb(N, r) * prod
    return total


def prop41_terms_flipped(p: ParityPoint) -> Tuple[Fraction, ...]:
    """The six pieces with the opposite sign on the two product terms.

    This variant disagrees with the numerical c(1); it is kept so the tests
    can show that.  The product pieces differ from
    :func:`prop41_terms_exact` by an overall sign.
    """
    q1, q2, q3, q4, _, _ = prop41_terms_exact(p)
    k, s, w = p.k, p.s, p.w
    N = abs(k - 2 * w)
    base = _gamma_int(w) / (2 * _gamma_int(s) * _gamma_int(k - s) * _gamma_int((N + k) // 2))
    e5 = (N + w - s - 1) // 2
    e6 = (N + w + s - 1) // 2
    p5 = (-1) ** e5 * base * _flipped_product_sum(k, w, k - s)
    p6 = (-1) ** e6 * base * _flipped_product_sum(k, w, s)
    return (q1, q2, q3, q4, p5, p6)


def prop41_c1_flipped(p: ParityPoint) -> Fraction:
    return sum(prop41_terms_flipped(p), Fraction(0))


# Inner product --------------------------------------------------------------

def reduce_to_F(k: int, s: int, w: int) -> Tuple[int, int, Fraction]:
    """Map (s, w) with 2 <= s, w <= k-2 into F.

    Returns (s', w', factor) with V(s, w) = factor * V(s', w').  Uses
    V(s, k-w) = (-1)^(k/2) V(s, w) and V(k-s, w) = (-1)^(k/2) 2^(k-2s) V(s, w).
    """
    sg = 1 if (k // 2) % 2 == 0 else -1
    factor = Fraction(1)
    if w == k - 2:
        w = 2
        factor *= sg
    if s == k - 2:
        s = 2
        factor *= sg * Fraction(2) ** (k - 4)
    return s, w, factor


def inner_product_rational(p: ParityPoint) -> Fraction:
    """pi^-2 e^(pi i (s-w)/2) <C_k(., s; 1/2), C_k(., w)> as an exact rational."""
    if not isinstance(p, ParityPoint):
        raise TypeError("expected a ParityPoint")
    k, s, w = p.k, p.s, p.w
    if not p.opposite_parity:
        raise DomainError("opposite parity required")
    if not (2 <= s <= k - 2 and 2 <= w <= k - 2):
        raise DomainError(f"need 2 <= s, w <= k-2, got (s, w) = ({s}, {w})")
    s2, w2, factor = reduce_to_F(k, s, w)
    q = prop41_c1_exact(ParityPoint(k, s2, w2))
    return factor * q * Fraction(2) ** s2 * _gamma_int(k - 1) / (Fraction(2) ** (k - 2) * _gamma_int(w2))
