"""Hot loops, each in a numba-compiled and a pure-numpy variant.

The public functions at the bottom dispatch on ``_backend.get_backend()``.
Both variants implement the same arithmetic; tests check they agree.
"""
from __future__ import annotations

import cmath
import math
from math import factorial

import numpy as np

from . import _backend
from ._backend import njit
from .exact_core import bernoulli

TWO_PI = 2.0 * math.pi

# B_2j/(2j)! for j = 1..13; the first 12 are the Euler-Maclaurin corrections
EM_COEFFS = np.array([float(bernoulli(2 * j) / factorial(2 * j)) for j in range(1, 14)])
EM_ORDER = 12
# shift rule: the first omitted correction is below HZ_TOL relative to x^-s
HZ_TOL = 1e-17
_SHIFT_CONST = 2.0 / (TWO_PI ** (2 * EM_ORDER + 2) * HZ_TOL)


# Hurwitz zeta, scaled: a^s zeta(s, a) for real a > 0 ------------------------

def _hz_shift(s, a):
    p = 1.0
    for i in range(2 * EM_ORDER + 1):
        p *= abs(s + i)
    L = (_SHIFT_CONST * p) ** (1.0 / (2 * EM_ORDER + 1))
    n = int(math.ceil(L - a))
    return n if n > 0 else 0


_hz_shift_nb = njit(_hz_shift)


@njit
def _hz_scaled_nb(s, a, em):
    sr = s.real
    N = _hz_shift_nb(s, a)
    la = math.log(a)
    acc = 0j
    for n in range(N):
        lt = la - math.log(n + a)
        acc += cmath.exp(s * lt)
        # remaining direct terms are bounded by the integral of the last one
        if n >= 1 and sr > 1.0:
            if (n + 1 + a) / (sr - 1.0) * math.exp(sr * (la - math.log(n + 1 + a))) < 1e-18 * abs(acc):
                return acc
    x = N + a
    ratio = cmath.exp(s * (la - math.log(x)))
    tail = x / (s - 1.0) + 0.5
    poch = s
    xp = 1.0 / x
    for j in range(EM_ORDER):
        tail += em[j] * poch * xp
        poch *= (s + 2 * j + 1) * (s + 2 * j + 2)
        xp /= x * x
    return acc + ratio * tail


@njit
def _hz_batch_nb(s, a, em):
    out = np.empty(s.size, np.complex128)
    for i in range(s.size):
        out[i] = _hz_scaled_nb(s[i], a[i], em)
    return out


def _hz_batch_np(s, a, em):
    s = np.asarray(s, np.complex128)
    a = np.asarray(a, np.float64)
    Ns = np.array([_hz_shift(si, ai) for si, ai in zip(s, a)], dtype=np.int64)
    la = np.log(a)
    acc = np.zeros(s.size, np.complex128)
    for n in range(int(Ns.max(initial=0))):
        m = Ns > n
        acc[m] += np.exp(s[m] * (la[m] - np.log(n + a[m])))
    x = Ns + a
    ratio = np.exp(s * (la - np.log(x)))
    tail = x / (s - 1.0) + 0.5
    poch = s.copy()
    xp = 1.0 / x
    for j in range(12):
        tail = tail + em[j] * poch * xp
        poch = poch * (s + 2 * j + 1) * (s + 2 * j + 2)
        xp = xp / (x * x)
    return acc + ratio * tail


# 1f1 by tanh-sinh quadrature ----------------------------------------------

def tanh_sinh_nodes(h=1.0 / 32, tmax=3.6):
    """Nodes u, log u, log(1-u) and weights du/dt * h on (0, 1)."""
    t = np.arange(-tmax, tmax + h / 2, h)
    v = math.pi * np.sinh(t)
    log_u = -np.logaddexp(0.0, -v)
    log_1mu = -np.logaddexp(0.0, v)
    u = np.exp(log_u)
    wts = h * math.pi * np.cosh(t) * np.exp(log_u + log_1mu)
    return u, log_u, log_1mu, wts


@njit
def _quad_nb(z, u, W):
    out = np.empty(z.size, np.complex128)
    for i in range(z.size):
        acc = 0j
        zi = z[i]
        for j in range(u.size):
            acc += W[j] * cmath.exp(zi * u[j])
        out[i] = acc
    return out


def _quad_np(z, u, W, chunk=2048):
    z = np.asarray(z, np.complex128)
    out = np.empty(z.size, np.complex128)
    for i0 in range(0, z.size, chunk):
        zz = z[i0:i0 + chunk]
        out[i0:i0 + chunk] = np.exp(np.outer(zz, u)) @ W
    return out


# 1f1 by its large-|z| expansion -------------------------------------------

@njit
def _asym_series_nb(a, b, zz, jmax, tol):
    """sum_j (a)_j (b)_j / j! zz^-j, stopped at convergence or at the smallest
    term once past the initial hump; returns (sum, error estimate)."""
    hump = abs(a) + abs(b) + 2.0
    acc = 0j
    t = 1.0 + 0j
    prev = np.inf
    for j in range(jmax):
        at = abs(t)
        if j > hump and at > prev:
            return acc, prev
        acc += t
        if at == 0.0 or at < tol * abs(acc):
            return acc, at
        prev = at
        t = t * (a + j) * (b + j) / ((j + 1) * zz)
    return acc, abs(t)


@njit
def _asym_nb(z, s, k, gs, gks, jmax):
    """1f1(s, k; z) ~ Gamma(k-s) e^z z^(s-k) sum A_j z^-j
                     + Gamma(s) (-z)^-s sum B_j (-z)^-j, principal branches."""
    sa, e1 = _asym_series_nb(1.0 - s, k - s, z, jmax, 1e-17)
    sb, e2 = _asym_series_nb(s, s - k + 1, -z, jmax, 1e-17)
    p1 = gks * cmath.exp(z + (s - k) * cmath.log(z))
    p2 = gs * cmath.exp(-s * cmath.log(-z))
    return p1 * sa + p2 * sb, abs(p1) * e1 + abs(p2) * e2


@njit
def _asym_batch_nb(z, s, k, gs, gks, jmax):
    out = np.empty(z.size, np.complex128)
    err = np.empty(z.size)
    for i in range(z.size):
        v, e = _asym_nb(z[i], s, k, gs, gks, jmax)
        out[i] = v
        err[i] = e
    return out, err


def _asym_series_np(a, b, zz, jmax, tol):
    hump = abs(a) + abs(b) + 2.0
    acc = np.zeros(zz.size, np.complex128)
    err = np.zeros(zz.size)
    t = np.ones(zz.size, np.complex128)
    live = np.ones(zz.size, bool)
    prev = np.full(zz.size, np.inf)
    for j in range(jmax):
        at = np.abs(t)
        if j > hump:
            grow = live & (at > prev)
            err[grow] = prev[grow]
            live &= ~grow
        acc[live] += t[live]
        done = live & ((at == 0.0) | (at < tol * np.abs(acc)))
        err[done] = at[done]
        live &= ~done
        if not live.any():
            return acc, err
        prev = at
        t = t * (a + j) * (b + j) / ((j + 1) * zz)
    err[live] = np.abs(t[live])
    return acc, err


def _asym_batch_np(z, s, k, gs, gks, jmax):
    z = np.asarray(z, np.complex128)
    sa, ea = _asym_series_np(1.0 - s, k - s, z, jmax, 1e-17)
    sb, eb = _asym_series_np(s, s - k + 1, -z, jmax, 1e-17)
    p1 = gks * np.exp(z + (s - k) * np.log(z))
    p2 = gs * np.exp(-s * np.log(-z))
    return p1 * sa + p2 * sb, np.abs(p1) * ea + np.abs(p2) * eb


# Direct inner n-sum of one (a, c) term --------------------------------------

@njit
def _direct_nb(p, q, x, N, s, w, u, W, za, k, gs, gks, jmax):
    """sum_{n<=N} n^(w-1) [e^(i pi s/2) e(n p/q) 1f1(-2 pi i n x)
                           + e^(-i pi s/2) e(-n p/q) 1f1(2 pi i n x)].

    1f1 means 1f1(s, k; .); its values come from the quadrature weights W on
    nodes u while 2 pi n x < za, and from the large-|z| expansion beyond.
    """
    ep = cmath.exp(0.5j * math.pi * s)
    em = cmath.exp(-0.5j * math.pi * s)
    acc = 0j
    absacc = 0.0
    asym_err = 0.0
    for n in range(1, N + 1):
        y = TWO_PI * n * x
        if y < za:
            fm = 0j
            fp = 0j
            for j in range(u.size):
                c = math.cos(y * u[j])
                sn = math.sin(y * u[j])
                fm += W[j] * complex(c, -sn)
                fp += W[j] * complex(c, sn)
        else:
            fm, e1 = _asym_nb(complex(0.0, -y), s, k, gs, gks, jmax)
            fp, e2 = _asym_nb(complex(0.0, y), s, k, gs, gks, jmax)
            asym_err += (e1 + e2) * n ** (w.real - 1.0)
        r = (n * p) % q
        ph = cmath.exp(complex(0.0, TWO_PI * r / q))
        nw = cmath.exp((w - 1.0) * math.log(n))
        t = nw * (ep * ph * fm + em * fp / ph)
        acc += t
        absacc += abs(t)
    return acc, absacc, asym_err


def _direct_np(p, q, x, N, s, w, u, W, za, k, gs, gks, jmax):
    n = np.arange(1, N + 1)
    y = TWO_PI * n * x
    small = y < za
    fm = np.empty(N, np.complex128)
    fp = np.empty(N, np.complex128)
    asym_err = 0.0
    if small.any():
        ys = y[small]
        arg = np.outer(ys, u)
        C = np.cos(arg) @ W
        S = np.sin(arg) @ W
        fm[small] = C - 1j * S
        fp[small] = C + 1j * S
    big = ~small
    if big.any():
        yb = y[big]
        vm, e1 = _asym_batch_np(-1j * yb, s, k, gs, gks, jmax)
        vp, e2 = _asym_batch_np(1j * yb, s, k, gs, gks, jmax)
        fm[big] = vm
        fp[big] = vp
        asym_err = float(np.sum((e1 + e2) * n[big] ** (w.real - 1.0)))
    r = (n * p) % q
    ph = np.exp(1j * TWO_PI * r / q)
    nw = np.exp((w - 1.0) * np.log(n))
    t = nw * (cmath.exp(0.5j * math.pi * s) * ph * fm + cmath.exp(-0.5j * math.pi * s) * fp / ph)
    return complex(t.sum()), float(np.abs(t).sum()), asym_err


# Dual (Hurwitz) form of whole residue classes --------------------------------

@njit
def _dual_nb(h, c, x0, th, th1, full, s, w, coef, cp, cm, extra, em, tol):
    """Per class: sum_j coef_j h^-s x0^j Z(s+j, h/c)
    [cp th^(-w-j) Z(w+j, th) + (-1)^j cm th1^(-w-j) Z(w+j, th1)].

    Z is the scaled Hurwitz value a^s zeta(s, a).  ``full`` marks classes
    with phase 0: there the second value is taken at argument 1 and the
    extra term cm * extra * h^-s x0^-w Z(s-w, h/c) is added.
    """
    nc = h.size
    J = coef.size
    out = np.empty(nc, np.complex128)
    err = np.empty(nc)
    for i in range(nc):
        hi = h[i]
        eta = hi / c[i]
        xi = x0[i]
        t1 = th[i]
        t2 = th1[i]
        base = cmath.exp(-s * math.log(hi))
        lt1 = math.log(t1)
        acc = 0j
        small = 0
        last = 0.0
        if full[i]:
            acc += cm * extra * base * cmath.exp(-w * math.log(xi)) * _hz_scaled_nb(s - w, eta, em)
        for j in range(J):
            z1 = _hz_scaled_nb(s + j, eta, em)
            a1 = cmath.exp(-(w + j) * lt1) * _hz_scaled_nb(w + j, t1, em)
            if full[i]:
                a2 = _hz_scaled_nb(w + j, 1.0, em)
            else:
                a2 = cmath.exp(-(w + j) * math.log(t2)) * _hz_scaled_nb(w + j, t2, em)
            sgn = -1.0 if j % 2 else 1.0
            term = coef[j] * base * xi ** j * z1 * (cp * a1 + sgn * cm * a2)
            acc += term
            last = abs(term)
            if last <= tol * abs(acc):
                small += 1
                if small >= 2:
                    break
            else:
                small = 0
        out[i] = acc
        err[i] = last
    return out, err


def _dual_np(h, c, x0, th, th1, full, s, w, coef, cp, cm, extra, em, tol):
    h = np.asarray(h, float)
    eta = h / c
    base = np.exp(-s * np.log(h))
    lt1 = np.log(th)
    lt2 = np.log(np.where(full, 1.0, th1))
    acc = np.zeros(h.size, np.complex128)
    if full.any():
        f = full
        acc[f] += cm * extra * base[f] * np.exp(-w * np.log(x0[f])) * \
            _hz_batch_np(np.full(f.sum(), s - w), eta[f], em)
    live = np.ones(h.size, bool)
    small = np.zeros(h.size, int)
    last = np.zeros(h.size)
    for j in range(coef.size):
        idx = np.nonzero(live)[0]
        if idx.size == 0:
            break
        sj = np.full(idx.size, s + j)
        wj = np.full(idx.size, w + j)
        z1 = _hz_batch_np(sj, eta[idx], em)
        a1 = np.exp(-(w + j) * lt1[idx]) * _hz_batch_np(wj, th[idx], em)
        a2arg = np.where(full[idx], 1.0, th1[idx])
        a2 = np.exp(-(w + j) * lt2[idx]) * _hz_batch_np(wj, a2arg, em)
        sgn = -1.0 if j % 2 else 1.0
        term = coef[j] * base[idx] * x0[idx] ** j * z1 * (cp * a1 + sgn * cm * a2)
        acc[idx] += term
        at = np.abs(term)
        last[idx] = at
        ok = at <= tol * np.abs(acc[idx])
        small[idx] = np.where(ok, small[idx] + 1, 0)
        live[idx[small[idx] >= 2]] = False
    return acc, last


# Brute-force matrix sum -------------------------------------------------------

@njit
def _enum_fill_nb(E, D, out):
    # one representative of each pair +-(a, b, c, d): first nonzero of (c, d) > 0
    cnt = 0
    # same order as the numpy variant: c, then a, b, d
    for c in range(0, E + 1):
        for a in range(-E, E + 1):
            for b in range(-E, E + 1):
                for d in range(-E, E + 1):
                    if c == 0 and d <= 0:
                        continue
                    det = a * d - b * c
                    if det > 0 and det <= D:
                        if out.shape[0] > 0:
                            out[cnt, 0] = a
                            out[cnt, 1] = b
                            out[cnt, 2] = c
                            out[cnt, 3] = d
                        cnt += 1
    return cnt


def _enum_nb(E, D):
    n = _enum_fill_nb(E, D, np.empty((0, 4), np.int64))
    out = np.empty((n, 4), np.int64)
    _enum_fill_nb(E, D, out)
    return out


def _enum_np(E, D):
    r = np.arange(-E, E + 1)
    rows = []
    for c in range(0, E + 1):
        a, b, d = np.meshgrid(r, r, r, indexing="ij")
        a, b, d = a.ravel(), b.ravel(), d.ravel()
        det = a * d - b * c
        m = (det > 0) & (det <= D)
        if c == 0:
            m &= d > 0
        rows.append(np.stack([a[m], b[m], np.full(m.sum(), c), d[m]], axis=1))
    return np.concatenate(rows).astype(np.int64)


@njit
def _msum_nb(mats, zs, k, s, w):
    out = np.empty(zs.size, np.complex128)
    nm = mats.shape[0]
    dw = np.empty(nm, np.complex128)
    for j in range(nm):
        det = mats[j, 0] * mats[j, 3] - mats[j, 1] * mats[j, 2]
        dw[j] = cmath.exp((w - 1.0) * math.log(det))
    for i in range(zs.size):
        z = zs[i]
        acc = 0j
        for j in range(nm):
            cz = mats[j, 2] * z + mats[j, 3]
            tau = (mats[j, 0] * z + mats[j, 1]) / cz + 0.5
            acc += dw[j] * cmath.exp(-s * cmath.log(tau) - k * cmath.log(cz))
        out[i] = 2.0 * acc
    return out


def _msum_np(mats, zs, k, s, w, chunk=1 << 16):
    a, b, c, d = (mats[:, i].astype(float) for i in range(4))
    det = a * d - b * c
    dw = np.exp((w - 1.0) * np.log(det))
    out = np.empty(zs.size, np.complex128)
    for i, z in enumerate(zs):
        acc = 0j
        for j0 in range(0, det.size, chunk):
            sl = slice(j0, j0 + chunk)
            cz = c[sl] * z + d[sl]
            tau = (a[sl] * z + b[sl]) / cz + 0.5
            acc += np.sum(dw[sl] * np.exp(-s * np.log(tau) - k * np.log(cz)))
        out[i] = 2.0 * acc
    return out


# Dispatch -------------------------------------------------------------------

def _use_numba() -> bool:
    return _backend.get_backend() == "numba"


def hurwitz_scaled_batch(s, a):
    """a^s zeta(s, a) elementwise, for real a > 0 and s != 1."""
    s = np.ascontiguousarray(np.broadcast_to(np.asarray(s, np.complex128), np.shape(a)).ravel())
    a = np.ascontiguousarray(np.asarray(a, np.float64).ravel())
    if _use_numba():
        return _hz_batch_nb(s, a, EM_COEFFS)
    return _hz_batch_np(s, a, EM_COEFFS)


def hurwitz_scaled(s, a) -> complex:
    return complex(hurwitz_scaled_batch(np.array([s]), np.array([a]))[0])


def quad_sum(z, u, W):
    """sum_j W_j exp(z u_j) for each z."""
    z = np.ascontiguousarray(np.asarray(z, np.complex128).ravel())
    if _use_numba():
        return _quad_nb(z, u, W)
    return _quad_np(z, u, W)


def asym_1f1_batch(z, s, k, gs, gks, jmax=60):
    z = np.ascontiguousarray(np.asarray(z, np.complex128).ravel())
    s, k, gs, gks = complex(s), float(k), complex(gs), complex(gks)
    if _use_numba():
        return _asym_batch_nb(z, s, k, gs, gks, jmax)
    return _asym_batch_np(z, s, k, gs, gks, jmax)


def direct_nsum(p, q, x, N, s, w, u, W, za, k, gs, gks, jmax=60):
    args = (int(p), int(q), float(x), int(N), complex(s), complex(w), u, W,
            float(za), float(k), complex(gs), complex(gks), int(jmax))
    if _use_numba():
        return _direct_nb(*args)
    return _direct_np(*args)


def dual_class_sums(h, c, x0, th, th1, full, s, w, coef, cp, cm, extra, tol=1e-17):
    args = (np.ascontiguousarray(h, np.float64), np.ascontiguousarray(c, np.float64),
            np.ascontiguousarray(x0, np.float64), np.ascontiguousarray(th, np.float64),
            np.ascontiguousarray(th1, np.float64), np.ascontiguousarray(full, np.bool_),
            complex(s), complex(w), np.ascontiguousarray(coef, np.complex128),
            complex(cp), complex(cm), complex(extra), EM_COEFFS, float(tol))
    if _use_numba():
        return _dual_nb(*args)
    return _dual_np(*args)


def enumerate_matrices(E: int, D: int):
    """Integer matrices with entries in [-E, E] and 0 < det <= D, one per +-pair."""
    if _use_numba():
        return _enum_nb(int(E), int(D))
    return _enum_np(int(E), int(D))


def matrix_sum(mats, zs, k, s, w):
    """sum of det^(w-1) ((az+b)/(cz+d) + 1/2)^-s (cz+d)^-k over M and -M,
    for each representative M in ``mats`` (the two terms agree for even k)."""
    zs = np.ascontiguousarray(np.asarray(zs, np.complex128))
    if _use_numba():
        return _msum_nb(mats, zs, float(k), complex(s), complex(w))
    return _msum_np(mats, zs, float(k), complex(s), complex(w))
