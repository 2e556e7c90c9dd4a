import math
import os
import subprocess
import sys

import numpy as np
import pytest

from twisted_eisenstein import eisenstein as E
from twisted_eisenstein import kernels as K
from twisted_eisenstein._backend import ENV_FLAG, HAVE_NUMBA, get_backend, set_backend


def _backend_in_subprocess(value):
    env = dict(os.environ)
    if value is None:
        env.pop(ENV_FLAG, None)
    else:
        env[ENV_FLAG] = value
    out = subprocess.run([sys.executable, "-c",
                          "from twisted_eisenstein._backend import get_backend; print(get_backend())"],
                         env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


class TestBackendSelection:
    def test_env_flag_off(self):
        assert _backend_in_subprocess("0") == "numpy"

    @pytest.mark.skipif(not HAVE_NUMBA, reason="numba not importable")
    def test_env_flag_default(self):
        assert _backend_in_subprocess(None) == "numba"
        assert _backend_in_subprocess("1") == "numba"

    def test_set_backend(self):
        prev = set_backend("numpy")
        try:
            assert get_backend() == "numpy"
            with pytest.raises(ValueError):
                set_backend("fortran")
        finally:
            set_backend(prev)


class TestHurwitzKernel:
    def test_against_mpmath(self, mp):
        rng = np.random.default_rng(4)
        s = rng.uniform(0, 12, 40) + 1j * rng.uniform(-20, 20, 40)
        a = rng.uniform(0.05, 40, 40)
        got = K.hurwitz_scaled_batch(s, a)
        for si, ai, g in zip(s, a, got):
            ref = complex(mp.zeta(mp.mpc(si.real, si.imag), ai) * mp.power(ai, mp.mpc(si.real, si.imag)))
            assert abs(g - ref) <= 1e-13 * abs(ref)

    def test_backends_agree(self, both_backends):
        rng = np.random.default_rng(5)
        s = rng.uniform(-1, 12, 500) + 1j * rng.uniform(-30, 30, 500)
        a = rng.uniform(0.01, 100, 500)
        nb, npy = both_backends(lambda: K.hurwitz_scaled_batch(s, a))
        assert np.max(np.abs(nb - npy) / np.abs(npy)) <= 1e-14


class TestQuadAndAsymptotic:
    def test_quad_backends_agree(self, both_backends):
        u, lu, l1u, w = K.tanh_sinh_nodes()
        W = w * np.exp(2.0 * lu + 5.0 * l1u)
        z = np.linspace(-30, 30, 101) * 1j
        nb, npy = both_backends(lambda: K.quad_sum(z, u, W))
        assert np.max(np.abs(nb - npy)) <= 1e-15 * np.max(np.abs(npy))

    def test_asymptotic_matches_series(self, mp):
        s, k = 4.5 + 0.3j, 12
        gs = complex(mp.gamma(mp.mpc(s)))
        gks = complex(mp.gamma(mp.mpc(k - s)))
        z = np.array([60j, -75j, 90j])
        vals, errs = K.asym_1f1_batch(z, s, k, gs, gks)
        for zi, v, e in zip(z, vals, errs):
            ref = complex(mp.hyp1f1(mp.mpc(s), k, mp.mpc(zi)) * mp.gamma(mp.mpc(s)) * mp.gamma(mp.mpc(k - s)) / mp.gamma(k))
            assert abs(v - ref) <= 1e-13 * abs(ref) + 2 * e

    def test_asymptotic_backends_agree(self, both_backends):
        z = 1j * np.linspace(40, 400, 64)
        nb, npy = both_backends(lambda: K.asym_1f1_batch(z, 5.5, 14, 52.34, 3.2e5)[0])
        assert np.max(np.abs(nb - npy) / np.abs(npy)) <= 1e-14


class TestMatrixKernels:
    def test_enumeration_backends_identical(self, both_backends):
        nb, npy = both_backends(lambda: K.enumerate_matrices(8, 10))
        assert nb.shape == npy.shape and (nb == npy).all()

    def test_enumeration_contents(self):
        m = K.enumerate_matrices(3, 2)
        det = m[:, 0] * m[:, 3] - m[:, 1] * m[:, 2]
        assert ((det > 0) & (det <= 2)).all()
        assert np.abs(m).max() <= 3
        # one representative per +-pair: the first nonzero of (c, d) is positive
        first = np.where(m[:, 2] != 0, m[:, 2], m[:, 3])
        assert (first > 0).all()
        # no duplicates
        assert len({tuple(r) for r in m}) == len(m)

    def test_enumeration_count_brute(self):
        E_, D_ = 4, 3
        n = 0
        r = range(-E_, E_ + 1)
        for a in r:
            for b in r:
                for c in r:
                    for d in r:
                        if 0 < a * d - b * c <= D_:
                            n += 1
        assert 2 * len(K.enumerate_matrices(E_, D_)) == n

    def test_matrix_sum_backends_agree(self, both_backends):
        mats = K.enumerate_matrices(6, 8)
        zs = np.arange(16) / 16 + 0.8j
        nb, npy = both_backends(lambda: K.matrix_sum(mats, zs, 12, 4.5 + 0.2j, 2.0))
        assert np.max(np.abs(nb - npy)) <= 1e-13 * np.max(np.abs(npy))

    def test_matrix_sum_single_term(self):
        mats = np.array([[1, 0, 0, 1]], np.int64)
        z = np.array([0.25 + 0.8j])
        s = 4.5
        # the representative stands for both M and -M (k even)
        ref = 2 * (z[0] + 0.5) ** -s
        assert abs(K.matrix_sum(mats, z, 12, s, 2.0)[0] - ref) <= 1e-15 * abs(ref)


class TestSeriesEngineBackends:
    @pytest.mark.parametrize("pt", [(12, 4.5, 2.2), (12, 5, 2), (14, 5.5 + 0.4j, 1.7 - 0.2j)])
    def test_c1_agrees(self, both_backends, pt):
        p = E.DomainPoint(*pt)
        tr = E.Truncation(c_max=60, n_max=200)
        nb, npy = both_backends(lambda: E.corollary22_c1(p, tr))
        assert abs(nb.value - npy.value) <= 1e-13 * nb.magnitude
        assert nb.trunc_error_estimate == pytest.approx(npy.trunc_error_estimate, rel=1e-6)

    def test_c2_agrees(self, both_backends):
        p = E.DomainPoint(12, 4.5, 2.0)
        tr = E.Truncation(c_max=40)
        nb, npy = both_backends(lambda: E.coefficient_c_m(p, 2, tr))
        assert abs(nb.value - npy.value) <= 1e-13 * nb.magnitude
