import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import Polynomial
from scipy import integrate, special

from covbounds.orthopoly import (GegenbauerBasis, gegenbauer_f0, jacobi_eval, jacobi_largest_zero,
                                 jacobi_zeros, measure_moment)


def quad_f0(n, f):
    """Independent oracle: normalized integral of f against (1 - t^2)^((n-3)/2)."""
    w = lambda t: (1 - t * t) ** ((n - 3) / 2)
    with warnings.catch_warnings():
        # requested accuracy is near machine precision; quad warns but delivers
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return _quad_ratio(f, w)


def _quad_ratio(f, w):
    num = integrate.quad(lambda t: f(t) * w(t), -1, 1, limit=200, epsabs=1e-15, epsrel=1e-14)[0]
    den = integrate.quad(w, -1, 1, limit=200, epsabs=1e-15, epsrel=1e-14)[0]
    return num / den


@pytest.mark.parametrize("n", [3, 4, 5, 7, 10])
@pytest.mark.parametrize("m", [0, 1, 2, 4, 6, 9])
def test_moments_match_quadrature(n, m):
    assert measure_moment(n, m) == pytest.approx(quad_f0(n, lambda t: t ** m), abs=1e-12)


@pytest.mark.parametrize("n", [3, 4, 6, 9])
def test_gegenbauer_matches_scipy(n):
    basis = GegenbauerBasis(n, 8)
    t = np.linspace(-1, 1, 31)
    lam = (n - 2) / 2
    for i in range(9):
        ref = special.eval_gegenbauer(i, lam, t) / special.eval_gegenbauer(i, lam, 1.0)
        assert np.allclose(basis.eval(i, t), ref, atol=1e-12)
        assert basis.eval(i, 1.0) == pytest.approx(1.0)


def test_legendre_norms():
    # for n = 3 the polynomials are Legendre's and r_j = 2j + 1
    basis = GegenbauerBasis(3, 6)
    assert np.allclose(basis.norms, [2 * j + 1 for j in range(7)], rtol=1e-11)


def test_chebyshev_dimension_two():
    basis = GegenbauerBasis(2, 5)
    t = np.linspace(-1, 1, 17)
    for i in range(6):
        assert np.allclose(basis.eval(i, t), np.cos(i * np.arccos(t)), atol=1e-12)


@pytest.mark.parametrize("n,i", [(3, 4), (5, 5), (8, 3)])
def test_gegenbauer_zeros(n, i):
    basis = GegenbauerBasis(n, i)
    ref = np.sort(special.roots_gegenbauer(i, (n - 2) / 2)[0])
    assert np.allclose(basis.zeros(i), ref, atol=1e-12)


def test_orthogonality():
    n = 5
    basis = GegenbauerBasis(n, 6)
    for i in range(6):
        for j in range(i):
            assert abs(gegenbauer_f0(n, basis.poly(i) * basis.poly(j))) < 1e-12


@pytest.mark.parametrize("alpha,beta,k", [(0.0, 1.0, 2), (0.5, 1.5, 3), (2.5, 3.5, 4), (1.0, 1.0, 5)])
def test_jacobi_against_scipy(alpha, beta, k):
    t = np.linspace(-1, 1, 11)
    assert np.allclose(jacobi_eval(k, alpha, beta, t), special.eval_jacobi(k, alpha, beta, t), atol=1e-10)
    ref = np.sort(special.roots_jacobi(k, alpha, beta)[0])
    assert np.allclose(jacobi_zeros(alpha, beta, k), ref, atol=1e-12)


def test_known_jacobi_zero():
    # alpha=0, beta=1, k=2: zeros of 10t^2 - 4t - 2 ... largest is (2 + sqrt(24)) / 10
    assert jacobi_largest_zero(0.0, 1.0, 2) == pytest.approx((2 + 24 ** 0.5) / 10, abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(3, 9), coefs=st.lists(st.floats(-3, 3), min_size=1, max_size=9))
def test_f0_property(n, coefs):
    f = Polynomial(coefs)
    assert gegenbauer_f0(n, f) == pytest.approx(quad_f0(n, f), abs=1e-10)


def test_index_errors():
    basis = GegenbauerBasis(3, 3)
    with pytest.raises(IndexError):
        basis.eval(4, 0.0)
