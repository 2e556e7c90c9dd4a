"""Check suites behind ``twisted-eisenstein verify``.

Each suite returns a list of :class:`Check` records (measured deviation
against a tolerance).  The heavy suites reuse the engine caches, so running
``all`` costs little more than its slowest member.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Callable, Dict, List

from . import eisenstein as E
from . import exact_core as X
from . import spectral as S
from . import specfun as F

__all__ = ["Check", "SUITES", "run_suite", "c1_factor", "oracle_deviation",
           "integer_FD_points"]


@dataclass(frozen=True)
class Check:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.deviation) and self.deviation <= self.tolerance

    def as_dict(self) -> dict:
        return {"name": self.name, "deviation": self.deviation,
                "tolerance": self.tolerance, "passed": self.passed}


def _rel(a: complex, b: complex) -> float:
    d = abs(b)
    return abs(a - b) / d if d else abs(a - b)


def _grid20() -> List[complex]:
    # 20 points with Re s in [-5, 5], away from the pole at 1
    rng = random.Random(20240601)
    pts = []
    while len(pts) < 20:
        z = complex(round(rng.uniform(-5, 5), 3), round(rng.uniform(-6, 6), 3))
        if abs(z - 1) > 0.25:
            pts.append(z)
    return pts


def c1_factor(k: int, w: float) -> float:
    """(2 pi)^(k+1-w)/2: scales the exact rational to the series c(1)."""
    return (2.0 * math.pi) ** (k + 1 - w) / 2.0


def integer_FD_points(k: int):
    """Integer opposite-parity (s, w) in both F and D."""
    out = []
    for s in range(2, k - 1):
        for w in range(2, k - 1):
            if (s + w) % 2 == 0:
                continue
            pt = E.DomainPoint(k, s, w)
            if pt.in_F and pt.in_D:
                out.append((s, w))
    return out


def oracle_deviation(series: E.CoeffValue, bf: E.CoeffValue) -> float:
    """Relative distance of the matrix-sum value from the series value.

    When the series value is zero within its own error estimate (as for
    every coefficient at k = 14, where there are no cusp forms), the
    distance is taken relative to the size of the constituent terms.
    """
    den = abs(series.value)
    if den <= 1e3 * series.trunc_error_estimate:
        den = series.magnitude
    return abs(bf.value - series.value) / den


# specfun ---------------------------------------------------------------------------

def suite_specfun(tr: E.Truncation = E.DEFAULT_TRUNCATION,
                  policy: F.PrecisionPolicy = F.DEFAULT_POLICY) -> List[Check]:
    out = []
    zeta = partial(F.riemann_zeta, policy=policy)
    hz = partial(F.hurwitz_zeta, policy=policy)
    g = _grid20()
    out.append(Check("gamma(5) = 24", abs(F.cgamma(5) - 24), 1e-12))
    out.append(Check("gamma(1/2)^2 = pi", abs(F.cgamma(0.5) ** 2 - math.pi) / math.pi, 1e-13))
    rng = random.Random(7)
    dev = 0.0
    for _ in range(20):
        z = complex(rng.uniform(-10, 10), rng.uniform(-3, 3))
        dev = max(dev, _rel(F.cgamma(z) * F.cgamma(1 - z), math.pi / cmath.sin(math.pi * z)))
    out.append(Check("gamma reflection, 20 points", dev, 1e-11))
    dev = max(_rel(F.cgamma(z + 1), z * F.cgamma(z)) for z in g if abs(z) > 0.1)
    out.append(Check("gamma recurrence on the grid", dev, 1e-12))
    out.append(Check("zeta(2) = pi^2/6", _rel(zeta(2), math.pi ** 2 / 6), 1e-13))
    out.append(Check("zeta(0) = -1/2", abs(zeta(0) + 0.5), 1e-14))
    out.append(Check("zeta(-11) = 691/32760", _rel(zeta(-11), 691 / 32760), 1e-12))
    dev = max(_rel(hz(s, 0.5), (2.0 ** s - 1) * zeta(s)) for s in g)
    out.append(Check("zeta(s,1/2) = (2^s-1) zeta(s), 20 points", dev, 1e-12))
    dev = max(_rel(hz(s, 1.5) + 2.0 ** s, hz(s, 0.5)) for s in g)
    out.append(Check("zeta(s,3/2) + 2^s = zeta(s,1/2), 20 points", dev, 1e-12))
    s = 3.2 + 0.7j
    out.append(Check("zeta(s,1) = zeta(s)", _rel(hz(s, 1.0), zeta(s)), 1e-12))
    dev = 0.0
    for n in range(9):
        for a in (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1)):
            ref = -X.bernoulli_poly(n + 1, a) / (n + 1)
            dev = max(dev, abs(hz(-n, float(a)) - float(ref)))
    out.append(Check("zeta(-n,a) vs Bernoulli polynomials", dev, 1e-12))
    L1, R1 = F.lipschitz_check(0.3 + 1.1j, 3.7, 2000)
    out.append(Check("Lipschitz formula at tau = 0.3+1.1i", _rel(L1, R1), 1e-9))
    L2, R2 = F.lipschitz_check(0.5 + 2j, 2.2 + 0.5j, 5000)
    out.append(Check("Lipschitz formula at tau = 0.5+2i", _rel(L2, R2), 1e-8))
    rng = random.Random(11)
    dev = 0.0
    for _ in range(10):
        a = rng.uniform(0.5, 4)
        b = a + rng.uniform(0.5, 8)
        z = cmath.rect(rng.uniform(0, 20), rng.uniform(-math.pi, math.pi))
        dev = max(dev, abs(F.kummer_1f1(a, b, z, policy)[1] - F.kummer_1f1_integral(a, b, z, policy)))
    out.append(Check("1f1 series vs integral, 10 points", dev, 1e-10))
    z = 1 + 1j
    out.append(Check("1F1(1,2;z) = (e^z-1)/z", abs(F.kummer_1f1(1, 2, z)[0] - (cmath.exp(z) - 1) / z), 1e-12))
    dev = 0.0
    for s in (1.5, 2.5, 3 + 1j, 4.2 - 0.5j, 6.0):
        for x in (Fraction(1, 4), Fraction(1, 3), Fraction(2, 3)):
            dev = max(dev, abs(F.periodic_zeta(s, x, policy=policy)
                                 - F.periodic_zeta(s, x, method="hurwitz", policy=policy)))
    out.append(Check("periodic zeta direct vs Hurwitz combination", dev, 1e-10))
    out.append(Check("F(3,1/2) = (2^-2-1) zeta(3)",
                     abs(F.periodic_zeta(3, Fraction(1, 2)) - (0.25 - 1) * zeta(3)), 1e-12))
    out.append(Check("2F1(-2,3;5;1/2) exact", abs(F.gauss_2f1(-2, 3, 5, 0.5)
                                                  - float(X.hyp2f1_terminating_exact(-2, 3, 5, Fraction(1, 2)))), 1e-14))
    dev = 0.0
    for m in (-7, -5, -3, -1, 1, 3, 5):
        near = F.cauchy_mean(F.gamma_cos_zeta_half, m, 0.1, 32)
        dev = max(dev, _rel(near, F.gamma_cos_zeta_half(m)))
    out.append(Check("Gamma cos zeta(.,1/2) exact limits at odd integers", dev, 1e-10))
    return out


# identity ------------------------------------------------------------------------

def suite_identity(tr: E.Truncation = E.DEFAULT_TRUNCATION,
                   policy: F.PrecisionPolicy = F.DEFAULT_POLICY,
                   ks=(12, 14, 16)) -> List[Check]:
    out = []
    # exact closed forms
    bad = 0
    n = 0
    for k in range(6, 21, 2):
        for s in range(2, k - 1):
            for w in range(2, k - 1):
                if (s + w) % 2:
                    n += 1
                    try:
                        X.inner_product_rational(X.ParityPoint(k, s, w))
                    except Exception:
                        bad += 1
    out.append(Check(f"rationality sweep k=6..20 ({n} pairs), failures", bad, 0))
    bad = 0
    for a in range(-8, 1):
        for b in range(1, 9):
            for nn in range(-20, 21):
                c2 = a + b + nn + 1
                if c2 % 2 or c2 < 2:
                    continue
                lhs = X.hyp2f1_half_closed_exact(a, b, nn)
                if lhs != X.hyp2f1_terminating_exact(a, b, c2 // 2, Fraction(1, 2)):
                    bad += 1
    out.append(Check("half-argument 2F1 closed form = terminating series, mismatches", bad, 0))
    dev = 0.0
    for (k, s, w) in ((12, 5, 2), (12, 3, 4)):
        for (a, b) in ((1 - s, k - s), (s + 1 - k, s)):
            for c in (k - s - w + 1, s - w + 1, k - w, w + 1):
                if c <= 0:
                    continue
                # reference from the Gamma closed form, not the series
                ex = float(X.hyp2f1_half_closed_exact(a, b, 2 * c - a - b - 1))
                dev = max(dev, abs(F.gauss_2f1(a, b, c, 0.5) - ex) / max(1.0, abs(ex)))
    out.append(Check("floating 2F1 vs exact at the c(1) parameter patterns", dev, 1e-10))
    # continuation vs series: R vanishes at integer points
    for k in ks:
        worst = 0.0
        for s, w in integer_FD_points(k):
            R = E.residual_R(E.DomainPoint(k, s, w), tr)
            worst = max(worst, abs(R.value) / max(1e-6, 2 * R.trunc_error_estimate))
        out.append(Check(f"|R| / max(1e-6, 2 est) at integer points of F and D, k={k}", worst, 1.0))
    # functional equation at k = 12 (and the forced zero at k = 14, w = 7)
    worst = 0.0
    for s in range(2, 10):
        for w in range(2, 10):
            if (s + w) % 2 and 1.5 < 12 - w < 10:
                worst = max(worst, E.functional_eq_check(X.ParityPoint(12, s, w)))
    out.append(Check("w <-> k-w symmetry, all integer pairs at k=12", worst, 1e-8))
    worst = 0.0
    for s in (2, 4, 6, 8, 10):
        worst = max(worst, E.functional_eq_check(X.ParityPoint(14, s, 7)))
    out.append(Check("forced vanishing at w = k/2, k=14", worst, 1e-8))
    return out


# oracle ------------------------------------------------------------------------------

def suite_oracle(tr: E.Truncation = E.DEFAULT_TRUNCATION,
                 policy: F.PrecisionPolicy = F.DEFAULT_POLICY) -> List[Check]:
    out = []
    for (k, s, w) in ((12, 5, 2), (12, 6, 3), (14, 7, 4)):
        cv = E.corollary22_c1(E.DomainPoint(k, s, w), tr)
        ref = float(X.prop41_c1_exact(X.ParityPoint(k, s, w))) * c1_factor(k, w)
        out.append(Check(f"series c(1) vs exact at ({k},{s},{w})", cv.rel_error_to(ref), 1e-6))
    for (k, s, w, m) in ((12, 4.5, 2.0, 1), (12, 4.5, 2.0, 2), (14, 5.5, 2.5, 1)):
        pt = E.DomainPoint(k, s, w)
        ser = E.coefficient_c_m(pt, m, tr)
        bf = E.brute_force_fourier(pt, m, tr)
        out.append(Check(f"matrix-sum oracle vs series at ({k},{s},{w}), m={m}",
                         oracle_deviation(ser, bf), 1e-2))
    return out


# spectral --------------------------------------------------------------------------

def suite_spectral(tr: E.Truncation = E.DEFAULT_TRUNCATION,
                   policy: F.PrecisionPolicy = F.DEFAULT_POLICY) -> List[Check]:
    out = []
    f = S.delta_q_expansion(400)
    tau = f.a
    bad = sum(1 for m in range(1, 51) for n in range(1, 51 // m + 1)
              if m * n <= 50 and math.gcd(m, n) == 1 and tau(m * n) != tau(m) * tau(n))
    out.append(Check("tau multiplicative on coprime mn <= 50, failures", bad, 0))
    out.append(Check("tau(4) = tau(2)^2 - 2^11", abs(tau(4) - (tau(2) ** 2 - 2 ** 11)), 0))
    dev = max(_rel(S.completed_L(f, s).value, S.completed_L(f, 12 - s).value) for s in (3, 5, 7, 9))
    out.append(Check("L*(s) = L*(12-s)", dev, 1e-10))
    dev = max(_rel(S.completed_twisted_L(f, 12 - s).value,
                   2.0 ** (2 * s - 12) * S.completed_twisted_L(f, s).value) for s in (4, 5, 6, 8))
    out.append(Check("L*(12-s;1/2) = 2^(2s-12) L*(s;1/2)", dev, 1e-8))
    pairs = [X.ParityPoint(12, 5, 2), X.ParityPoint(12, 6, 3), X.ParityPoint(12, 7, 2)]
    r = [v for v, _ in S.petersson_ratio_probe(pairs, tr, f=f)]
    spread = max(_rel(a, b) for a in r for b in r)
    out.append(Check("Petersson ratio constancy across 3 pairs", spread, 1e-4))
    out.append(Check("Petersson ratios real", max(abs(v.imag) / abs(v) for v in r), 1e-6))
    out.append(Check("Petersson ratios positive (min Re, negated)", -min(v.real for v in r), 0.0))
    return out


SUITES: Dict[str, Callable[[], List[Check]]] = {
    "specfun": suite_specfun,
    "identity": suite_identity,
    "oracle": suite_oracle,
    "spectral": suite_spectral,
}


def run_suite(name: str, tr: E.Truncation = E.DEFAULT_TRUNCATION,
              policy: F.PrecisionPolicy = F.DEFAULT_POLICY) -> List[Check]:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn(tr, policy)]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return SUITES[name](tr, policy)
