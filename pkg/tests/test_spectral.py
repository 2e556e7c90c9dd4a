import math

import numpy as np
import pytest

from twisted_eisenstein import eisenstein as E
from twisted_eisenstein import exact_core as X
from twisted_eisenstein import spectral as S
from twisted_eisenstein.errors import DomainError, TruncationError

# <Delta, Delta> with the measure dx dy / y^2 on the standard fundamental domain
DELTA_NORM = 1.035362056804320922e-6


@pytest.fixture(scope="module")
def f():
    return S.delta_q_expansion(400)


def _sigma(n, r):
    return sum(d ** r for d in range(1, n + 1) if n % d == 0)


def _tau_from_eisenstein(N):
    # Delta = (E4^3 - E6^2) / 1728, a route that never touches the product
    e4 = [1] + [240 * _sigma(n, 3) for n in range(1, N + 1)]
    e6 = [1] + [-504 * _sigma(n, 5) for n in range(1, N + 1)]

    def mul(a, b):
        return [sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(N + 1)]

    d = [x - y for x, y in zip(mul(mul(e4, e4), e4), mul(e6, e6))]
    assert all(v % 1728 == 0 for v in d)
    return [v // 1728 for v in d[1:]]


class TestTau:
    def test_known_values(self, f):
        known = {1: 1, 2: -24, 3: 252, 4: -1472, 5: 4830, 6: -6048, 7: -16744,
                 10: -115920, 11: 534612, 12: -370944, 23: 18643272}
        for n, t in known.items():
            assert f.a(n) == t

    def test_against_eisenstein_route(self, f):
        assert list(f.coeffs[:120]) == _tau_from_eisenstein(120)

    def test_multiplicative(self, f):
        for m in range(1, 51):
            for n in range(1, 51 // m + 1):
                if math.gcd(m, n) == 1:
                    assert f.a(m * n) == f.a(m) * f.a(n)

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_hecke(self, f, p):
        # tau(p) tau(n) = tau(pn) + p^11 tau(n/p)
        for n in range(1, 400 // p + 1):
            rhs = f.a(p * n) + p ** 11 * (f.a(n // p) if n % p == 0 else 0)
            assert f.a(p) * f.a(n) == rhs

    def test_ramanujan_bound(self, f):
        for n in range(1, 401):
            d = sum(1 for x in range(1, n + 1) if n % x == 0)
            assert abs(f.a(n)) <= d * n ** 5.5

    def test_qseries_validation(self):
        with pytest.raises(DomainError):
            S.QSeries(12, (2, 3))
        with pytest.raises(DomainError):
            S.QSeries(7, (1,))
        with pytest.raises(DomainError):
            S.delta_q_expansion(0)


class TestQSeries:
    def test_reflection(self, f):
        # Delta(i/y) = y^12 Delta(iy)
        for y in (0.6, 0.8, 1.3):
            a = S.q_series_value(f, 1 / y)[0]
            b = S.q_series_value(f, y)[0]
            assert abs(a - y ** 12 * b) <= 1e-12 * abs(a)

    def test_twisted_reflection(self, f):
        # Delta(1/2 + iy) = (2y)^-12 Delta(1/2 + i/(4y))
        for y in (0.3, 0.45, 0.7):
            a = S.q_series_value(f, y, twist=True)[0]
            b = S.q_series_value(f, 1 / (4 * y), twist=True)[0]
            assert abs(a - (2 * y) ** -12 * b) <= 1e-11 * abs(a)

    def test_vectorized(self, f):
        ys = np.linspace(0.5, 3, 7)
        v = S.q_series_value(f, ys)
        assert v.shape == (7,)
        assert v[3] == S.q_series_value(f, ys[3])[0]


def _L_incomplete(mp, f, s, twist, N=80):
    s = mp.mpf(s)
    k = 12
    out = mp.mpf(0)
    for n in range(1, N + 1):
        t = f.a(n) * (-1) ** n if twist else f.a(n)
        x = mp.pi * n if twist else 2 * mp.pi * n
        a1 = mp.power(2 * mp.pi * n, -s) * mp.gammainc(s, x)
        a2 = mp.power(2 * mp.pi * n, -(k - s)) * mp.gammainc(k - s, x)
        c2 = mp.power(2, k - 2 * s) if twist else 1
        out += t * (a1 + c2 * a2)
    return out


class TestLValues:
    @pytest.mark.parametrize("s", [2, 4.5, 6, 9])
    def test_untwisted_vs_incomplete_gamma(self, mp, f, s):
        ref = _L_incomplete(mp, f, s, False)
        L = S.completed_L(f, s)
        assert abs(L.value - float(ref)) <= max(L.abs_err, 1e-13 * abs(float(ref)))
        assert L.abs_err <= 1e-10 * abs(float(ref))

    @pytest.mark.parametrize("s", [3, 5, 7.5, 10])
    def test_twisted_vs_incomplete_gamma(self, mp, f, s):
        ref = _L_incomplete(mp, f, s, True)
        L = S.completed_twisted_L(f, s)
        assert abs(L.value - float(ref)) <= max(L.abs_err, 1e-13 * abs(float(ref)))

    def test_dirichlet_series(self, mp, f):
        # at s = 10 the Dirichlet series converges absolutely; 400 terms leave ~1e-9
        s = 10
        ref = mp.fsum(f.a(n) * mp.power(n, -s) for n in range(1, 401))
        lstar = float(mp.power(2 * mp.pi, -s) * mp.gamma(s) * ref)
        assert abs(S.completed_L(f, s).value - lstar) <= 1e-7 * abs(lstar)

    def test_functional_equations(self, f):
        for s in (3, 5.5, 7):
            a = S.completed_L(f, s).value
            b = S.completed_L(f, 12 - s).value
            assert abs(a - b) <= 1e-12 * abs(a)
        for s in (4, 5, 8.5):
            a = S.completed_twisted_L(f, 12 - s).value
            b = 2.0 ** (2 * s - 12) * S.completed_twisted_L(f, s).value
            assert abs(a - b) <= 1e-10 * abs(a)

    def test_domain_and_truncation(self, f):
        with pytest.raises(DomainError):
            S.completed_L(f, 0)
        with pytest.raises(DomainError):
            S.completed_twisted_L(f, 12.5)
        short = S.QSeries(12, f.coeffs[:5])
        with pytest.raises(TruncationError):
            S.completed_twisted_L(short, 6)


class TestPeterssonProbe:
    PAIRS = [X.ParityPoint(12, 5, 2), X.ParityPoint(12, 6, 3), X.ParityPoint(12, 7, 2)]

    def test_series_path(self, f):
        out = S.petersson_ratio_probe(self.PAIRS, f=f)
        for r, err in out:
            assert abs(r.imag) <= 1e-6 * abs(r)
            assert r.real > 0
            assert abs(r - DELTA_NORM) <= max(err, 1e-8 * DELTA_NORM)

    def test_exact_first_coefficient_path(self, f):
        # same ratio with c(1) taken from the exact rational instead of the series
        for p in self.PAIRS + [X.ParityPoint(12, 4, 3), X.ParityPoint(12, 3, 2)]:
            pt = E.DomainPoint(p.k, p.s, p.w)
            c1 = float(X.prop41_c1_exact(p)) * (2 * math.pi) ** (p.k + 1 - p.w) / 2
            r = (S.completed_twisted_L(f, 12 - p.s).value * S.completed_L(f, 12 - p.w).value
                 / (E.prefactor(pt) * c1))
            assert abs(r - DELTA_NORM) <= 1e-10 * DELTA_NORM

    def test_errors(self, f):
        with pytest.raises(DomainError):
            S.petersson_ratio_probe([X.ParityPoint(14, 5, 2)], f=f)
        with pytest.raises(DomainError):
            S.petersson_ratio_probe([X.ParityPoint(12, 9, 2)], f=f)
