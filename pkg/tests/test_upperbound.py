import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from covbounds.lowerbound import DesignSpec, InvalidSpec
from covbounds.upperbound import (antipodal_3_upper, antipodal_5_upper, lp_upper_bound,
                                  optimal_parameters_4design, optimal_upper_4design, r_to_rho,
                                  rho_to_r, search_upper_bound, u_function)


def test_example_3_10():
    a0, b0 = optimal_parameters_4design(3, 10)
    s69 = math.sqrt(69)
    assert b0 == pytest.approx((s69 - 7) / 30, abs=1e-12)
    assert a0 == pytest.approx((3 + s69) * math.sqrt(45 + 10 * s69) / 150, abs=1e-12)
    assert optimal_upper_4design(3, 10).bound == pytest.approx(0.754443, abs=5e-6)


@pytest.mark.parametrize("n,M", [(4, 15), (10, 67), (6, 28)])
def test_closed_form_matches_lp(n, M):
    res = optimal_upper_4design(n, M)
    f = Polynomial([res.params["b"], res.params["a"], 1.0]) ** 2
    lp = lp_upper_bound(DesignSpec(n, 4, M), f)
    assert lp.bound == pytest.approx(res.bound, abs=1e-10)
    assert max(map(abs, res.params["gradient"])) <= 1e-6


def test_u_is_minimized_at_stationary_point():
    n, M = 5, 22
    a0, b0 = optimal_parameters_4design(n, M)
    u0 = u_function(n, M, a0, b0)
    rng = np.random.default_rng(0)
    for da, db in rng.normal(scale=1e-2, size=(50, 2)):
        assert u_function(n, M, a0 + da, b0 + db) >= u0 - 1e-12


def test_preconditions():
    with pytest.raises(InvalidSpec):
        optimal_parameters_4design(3, 6)
    with pytest.raises(InvalidSpec):
        antipodal_5_upper(3, 6)
    with pytest.raises(InvalidSpec):
        antipodal_3_upper(3, 7)


def test_antipodal_3():
    assert antipodal_3_upper(4, 8).bound == pytest.approx(0.5, abs=1e-15)
    for n in (3, 5, 7):
        assert antipodal_3_upper(n, 2 * n).bound == pytest.approx(1 / math.sqrt(n))
    spec = DesignSpec(3, 3, 12)
    lp = lp_upper_bound(spec, Polynomial([0, 0, 1]), antipodal=True)
    assert lp.bound == pytest.approx(math.sqrt(6) / 3, abs=1e-12)
    assert antipodal_3_upper(3, 12).bound == pytest.approx(math.sqrt(6) / 3, abs=1e-15)


def test_antipodal_5():
    res = antipodal_5_upper(3, 12)
    assert res.bound == pytest.approx(math.sqrt(1 / 3 + math.sqrt(12 / 15) / 3), abs=1e-15)
    assert res.bound == pytest.approx(0.794655, abs=1e-6)
    assert res.params["a_in_window"]
    # (4, 24) through the generic LP path with f = (t^2 - a)^2
    r4 = antipodal_5_upper(4, 24)
    a = r4.params["a"]
    lp = lp_upper_bound(DesignSpec(4, 5, 24), Polynomial([-a, 0, 1]) ** 2, antipodal=True)
    assert lp.bound == pytest.approx(r4.bound, abs=1e-10)
    # approaching |C| = 2n from above the bound tends to 1/sqrt(n)
    assert antipodal_5_upper(1000, 2002).bound == pytest.approx(1 / math.sqrt(1000), abs=1e-3)


def test_epsilon_improvement_for_reducible_f():
    spec = DesignSpec(3, 4, 12)
    B = Polynomial([0.5, 1.0]) ** 2        # double zero at -0.5
    D = Polynomial([2.0, 0.0, 1.0])        # no real zeros
    f = lp_upper_bound(spec, B * D).bound
    g = lp_upper_bound(spec, B * (D - 0.5)).bound
    assert g < f


def test_certification_rejects():
    spec = DesignSpec(3, 4, 10)
    with pytest.raises(ValueError, match="negative"):
        lp_upper_bound(spec, Polynomial([0, 0, -1]))
    with pytest.raises(ValueError, match="increasing"):
        lp_upper_bound(spec, Polynomial([1.0, -1.0]))
    with pytest.raises(ValueError, match="exceeds"):
        lp_upper_bound(spec, Polynomial([0, 0, 0, 0, 0, 1]))


def test_search_matches_closed_form():
    assert search_upper_bound(DesignSpec(3, 4, 10)).bound == pytest.approx(
        optimal_upper_4design(3, 10).bound, abs=1e-6)
    assert search_upper_bound(DesignSpec(3, 3, 12), antipodal=True).bound == pytest.approx(
        antipodal_3_upper(3, 12).bound, abs=1e-12)
    assert search_upper_bound(DesignSpec(3, 6, 17)).bound >= 0.822824


def test_monotone_in_cardinality():
    for n in (3, 5, 8):
        D = n * (n + 3) // 2
        vals = [optimal_upper_4design(n, M).bound for M in range(D + 1, D + 31)]
        assert all(x <= y + 1e-15 for x, y in zip(vals, vals[1:]))


def test_rho_r_roundtrip():
    rho = np.random.default_rng(0).uniform(-1, 1, 1000)
    assert np.max(np.abs(r_to_rho(rho_to_r(rho)) - rho)) <= 1e-14
    res = optimal_upper_4design(4, 15)
    assert 1 - res.radius ** 2 / 2 == pytest.approx(res.bound, abs=1e-14)
