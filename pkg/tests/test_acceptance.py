"""The eight acceptance criteria at their stated tolerances.

Each test records one PASS/FAIL line (printed inline and again in the
terminal summary) before asserting, so a failing criterion still reports
its measured deviation.
"""
import cmath
import math
import random
import time
from fractions import Fraction

import pytest

from twisted_eisenstein import eisenstein as E
from twisted_eisenstein import exact_core as X
from twisted_eisenstein import spectral as S
from twisted_eisenstein import specfun as F
from twisted_eisenstein.verification import c1_factor, integer_FD_points, oracle_deviation


def _rel(a, b):
    return abs(a - b) / abs(b) if b else abs(a - b)


def test_criterion_1_rationality_sweep(acceptance):
    t0 = time.perf_counter()
    n = 0
    failures = []
    for k in range(6, 21, 2):
        for s in range(2, k - 1):
            for w in range(2, k - 1):
                if (s + w) % 2 == 0:
                    continue
                n += 1
                try:
                    v = X.inner_product_rational(X.ParityPoint(k, s, w))
                    # canonical: Fraction normalizes, positive denominator, reduced
                    if not (isinstance(v, Fraction) and v.denominator > 0
                            and math.gcd(v.numerator, v.denominator) == 1):
                        failures.append((k, s, w, "not canonical"))
                except Exception as e:  # any pole or domain error is a failure
                    failures.append((k, s, w, repr(e)))
    dt = time.perf_counter() - t0
    ok = not failures and dt < 30
    acceptance(1, "rationality sweep k=6..20", ok, f"{n} pairs, {len(failures)} failures, {dt:.2f} s")
    assert not failures, failures[:5]
    assert dt < 30


@pytest.mark.slow
def test_criterion_2_exact_vs_series(acceptance):
    devs = {}
    for k, s, w in ((12, 5, 2), (12, 6, 3), (14, 7, 4)):
        cv = E.corollary22_c1(E.DomainPoint(k, s, w))
        ref = float(X.prop41_c1_exact(X.ParityPoint(k, s, w))) * c1_factor(k, w)
        # at k = 14 the exact value is 0 (no cusp forms); rel_error_to then
        # divides by the size of the terms that cancel
        devs[(k, s, w)] = cv.rel_error_to(ref)
    worst = max(devs.values())
    acceptance(2, "exact vs series c(1)", worst <= 1e-6,
               ", ".join(f"{p}: {d:.2e}" for p, d in devs.items()) + " (tol 1e-6)")
    assert worst <= 1e-6


@pytest.mark.slow
def test_criterion_3_remainder_vanishing(acceptance):
    worst = 0.0
    count = 0
    bad = []
    for k in (12, 14, 16):
        for s, w in integer_FD_points(k):
            R = E.residual_R(E.DomainPoint(k, s, w))
            lim = max(1e-6, 2 * R.trunc_error_estimate)
            worst = max(worst, abs(R.value) / lim)
            count += 1
            if abs(R.value) > lim:
                bad.append((k, s, w, abs(R.value), lim))
    acceptance(3, "remainder vanishing on integer F and D points", not bad,
               f"{count} points, worst |R|/max(1e-6, 2 est) = {worst:.2e}")
    assert count > 0
    assert not bad, bad


def test_criterion_4_closed_form_exactness(acceptance):
    mismatches = 0
    checked = 0
    for a in range(-8, 1):
        for b in range(1, 9):
            for n in range(-20, 21):
                c2 = a + b + n + 1
                # valid n: c = (a+b+n+1)/2 a positive integer
                if c2 % 2 or c2 < 2:
                    continue
                checked += 1
                if X.hyp2f1_half_closed_exact(a, b, n) != X.hyp2f1_terminating_exact(a, b, c2 // 2, Fraction(1, 2)):
                    mismatches += 1
    fdev = 0.0
    for k, s, w in ((12, 5, 2), (12, 3, 4)):
        for a, b in ((1 - s, k - s), (s + 1 - k, s)):
            for c in (k - s - w + 1, s - w + 1, k - w, w + 1):
                if c <= 0:
                    continue
                ex = X.hyp2f1_terminating_exact(a, b, c, Fraction(1, 2))
                fdev = max(fdev, abs(F.gauss_2f1(a, b, c, 0.5) - float(ex)) / max(1.0, abs(float(ex))))
    ok = mismatches == 0 and fdev <= 1e-10
    acceptance(4, "half-argument 2F1 exactness", ok,
               f"{checked} exact comparisons, {mismatches} mismatches; float path {fdev:.2e} (tol 1e-10)")
    assert mismatches == 0
    assert fdev <= 1e-10


def _grid20():
    rng = random.Random(20240601)
    pts = []
    while len(pts) < 20:
        z = complex(round(rng.uniform(-5, 5), 3), round(rng.uniform(-6, 6), 3))
        if abs(z - 1) > 0.25:
            pts.append(z)
    return pts


def test_criterion_5_special_functions(acceptance):
    t0 = time.perf_counter()
    g = _grid20()
    d = {}
    d["zeta(s,1/2)"] = max(_rel(F.hurwitz_zeta(s, 0.5), (2.0 ** s - 1) * F.riemann_zeta(s)) for s in g)
    d["zeta(s,3/2)+2^s"] = max(_rel(F.hurwitz_zeta(s, 1.5) + 2.0 ** s, F.hurwitz_zeta(s, 0.5)) for s in g)
    b = 0.0
    for n in range(9):
        for a in (Fraction(1, 5), Fraction(1, 3), Fraction(1, 2), Fraction(3, 4), Fraction(1)):
            ref = -X.bernoulli_poly(n + 1, a) / (n + 1)
            b = max(b, abs(F.hurwitz_zeta(-n, float(a)) - float(ref)))
    d["zeta(-n,a)"] = b
    lip = 0.0
    for tau, s, N in ((0.3 + 1.1j, 3.7, 2000), (0.5 + 2j, 2.2 + 0.5j, 5000), (-0.2 + 0.9j, 4.0, 2000)):
        L, R = F.lipschitz_check(tau, s, N)
        lip = max(lip, _rel(L, R))
    d["Lipschitz"] = lip
    rng = random.Random(11)
    f1 = 0.0
    for _ in range(10):
        a = rng.uniform(0.5, 4)
        bb = a + rng.uniform(0.5, 8)
        z = cmath.rect(rng.uniform(0, 20), rng.uniform(-math.pi, math.pi))
        f1 = max(f1, abs(F.kummer_1f1(a, bb, z)[1] - F.kummer_1f1_integral(a, bb, z)))
    d["1f1"] = f1
    pz = 0.0
    for s in (1.5, 2.5, 3 + 1j, 4.2 - 0.5j, 6.0):
        for x in (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)):
            pz = max(pz, abs(F.periodic_zeta(s, x) - F.periodic_zeta(s, x, method="hurwitz")))
    d["periodic zeta"] = pz
    dt = time.perf_counter() - t0
    tol = {"zeta(s,1/2)": 1e-12, "zeta(s,3/2)+2^s": 1e-12, "zeta(-n,a)": 1e-12,
           "Lipschitz": 1e-8, "1f1": 1e-10, "periodic zeta": 1e-10}
    ok = all(d[key] <= tol[key] for key in tol) and dt < 60
    acceptance(5, "special-function identities", ok,
               ", ".join(f"{key} {d[key]:.1e}" for key in tol) + f"; {dt:.1f} s")
    for key in tol:
        assert d[key] <= tol[key], key
    assert dt < 60


@pytest.mark.slow
def test_criterion_6_matrix_sum_oracle(acceptance):
    t0 = time.perf_counter()
    devs = {}
    for k, s, w, m in ((12, 4.5, 2.0, 1), (12, 4.5, 2.0, 2), (14, 5.5, 2.5, 1)):
        pt = E.DomainPoint(k, s, w)
        ser = E.coefficient_c_m(pt, m)
        bf = E.brute_force_fourier(pt, m)
        # k = 14 has no cusp forms, so the series value is zero to within its
        # error; the oracle is then measured against the size of the terms
        devs[(k, s, w, m)] = oracle_deviation(ser, bf)
    dt = time.perf_counter() - t0
    worst = max(devs.values())
    acceptance(6, "coefficient formula vs matrix-sum oracle", worst <= 1e-2 and dt <= 600,
               ", ".join(f"{p}: {d:.2e}" for p, d in devs.items()) + f" (tol 1e-2); {dt:.0f} s")
    assert worst <= 1e-2
    assert dt <= 600


def test_criterion_7_functional_equation(acceptance):
    pairs = []
    for s in range(2, 11):
        for w in range(2, 11):
            if (s + w) % 2 and 1.5 < s < 10 and 1.5 < w < 10 and 1.5 < 12 - w < 10:
                pairs.append((s, w))
    dev12 = max(E.functional_eq_check(X.ParityPoint(12, s, w)) for s, w in pairs)
    # at k = 12 the sign (-1)^(k/2) is +1; the forced zero at w = k/2 needs k = 14
    forced = max(E.functional_eq_check(X.ParityPoint(14, s, 7)) for s in (2, 4, 6, 8, 10))
    ok = dev12 <= 1e-8 and forced <= 1e-8
    acceptance(7, "w <-> k-w symmetry", ok,
               f"k=12: {len(pairs)} pairs, max {dev12:.1e}; k=14 w=7 forced zero {forced:.1e} (tol 1e-8)")
    assert dev12 <= 1e-8
    assert forced <= 1e-8


@pytest.mark.slow
def test_criterion_8_spectral_constancy(acceptance):
    t0 = time.perf_counter()
    f = S.delta_q_expansion(400)
    pairs = [X.ParityPoint(12, 5, 2), X.ParityPoint(12, 6, 3), X.ParityPoint(12, 7, 2)]
    r = [v for v, _ in S.petersson_ratio_probe(pairs, f=f)]
    spread = max(_rel(a, b) for a in r for b in r)
    imag = max(abs(v.imag) / abs(v) for v in r)
    positive = all(v.real > 0 for v in r)
    mult_bad = sum(1 for m in range(1, 401) for n in range(1, 400 // m + 1)
                   if math.gcd(m, n) == 1 and f.a(m * n) != f.a(m) * f.a(n))
    hecke_bad = sum(1 for n in range(1, 201)
                    if f.a(2) * f.a(n) != f.a(2 * n) + 2 ** 11 * (f.a(n // 2) if n % 2 == 0 else 0))
    dt = time.perf_counter() - t0
    ok = spread <= 1e-4 and imag <= 1e-6 and positive and mult_bad == 0 and hecke_bad == 0 and dt <= 300
    acceptance(8, "Petersson ratio constancy", ok,
               f"ratios {', '.join(f'{v.real:.12e}' for v in r)}; spread {spread:.1e}, imag {imag:.1e}, "
               f"tau failures {mult_bad + hecke_bad}; {dt:.1f} s")
    assert spread <= 1e-4
    assert imag <= 1e-6
    assert positive
    assert mult_bad == 0 and hecke_bad == 0
    assert dt <= 300
