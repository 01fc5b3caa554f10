import math

import numpy as np
import pytest

from covbounds.lowerbound import fl_bound
from covbounds.oracle import (PointSet, attaining_points, builtin_design, deep_hole, load_pointset,
                              measure_covering, save_pointset, verify_strength)
from covbounds.upperbound import antipodal_3_upper, antipodal_5_upper


def test_cross_polytope_points():
    ps = builtin_design("cross-polytope", 3)
    assert {tuple(p) for p in ps.points} == {tuple(s * e) for s in (1, -1) for e in np.eye(3)}
    assert ps.antipodal


@pytest.mark.parametrize("n", [2, 3, 6])
def test_simplex_inner_products(n):
    ps = builtin_design(f"simplex({n})")
    G = ps.points @ ps.points.T
    off = G[~np.eye(n + 1, dtype=bool)]
    assert np.allclose(off, -1 / n, atol=1e-14)


@pytest.mark.parametrize("name,tau_ok,tau_bad", [("cross-polytope(4)", 3, 4), ("simplex(4)", 2, 3),
                                                ("icosahedron", 5, 6), ("cube(3)", 3, 4)])
def test_strength(name, tau_ok, tau_bad):
    ps = builtin_design(name)
    assert verify_strength(ps, tau_ok).passed
    bad = verify_strength(ps, tau_bad)
    assert not bad.passed and bad.worst_residual > 1e-3


def test_measured_values():
    assert measure_covering(builtin_design("cross-polytope(4)")) == pytest.approx(0.5, abs=1e-12)
    for n in (3, 4, 5):
        assert measure_covering(builtin_design(f"simplex({n})")) == pytest.approx(1 / n, abs=1e-12)
    rho = measure_covering(builtin_design("icosahedron"))
    assert 0.7746 <= rho <= 0.79466
    assert measure_covering(builtin_design("cube(3)")) == pytest.approx(1 / math.sqrt(3), abs=1e-12)


@pytest.mark.parametrize("name", ["cross-polytope(3)", "cross-polytope(4)", "simplex(3)",
                                  "simplex(5)", "icosahedron", "cube(3)", "cube(4)"])
def test_facet_has_n_vertices(name):
    ps = builtin_design(name)
    _, y = deep_hole(ps)
    assert attaining_points(ps, y) >= ps.dimension


@pytest.mark.parametrize("name,tau", [("cross-polytope(3)", 3), ("cross-polytope(5)", 3),
                                      ("simplex(4)", 2), ("icosahedron", 5), ("cube(3)", 3),
                                      ("cube(4)", 3)])
def test_sandwich(name, tau):
    ps = builtin_design(name)
    rho = measure_covering(ps)
    assert rho >= fl_bound(ps.dimension, tau) - 1e-9
    if ps.antipodal and tau == 3:
        assert rho <= antipodal_3_upper(ps.dimension, len(ps)).bound + 1e-9
    if ps.antipodal and tau == 5:
        assert rho <= antipodal_5_upper(ps.dimension, len(ps)).bound + 1e-9


def test_deterministic():
    ps = builtin_design("icosahedron")
    a, b = deep_hole(ps, seed=3), deep_hole(ps, seed=3)
    assert a[0] == b[0] and np.array_equal(a[1], b[1])


def test_file_roundtrip(tmp_path):
    ps = builtin_design("icosahedron")
    path = tmp_path / "ico.txt"
    save_pointset(ps, path)
    back = load_pointset(path)
    assert np.array_equal(back.points, ps.points) and back.antipodal
    assert path.read_text().splitlines()[0] == "3 12"


def test_bad_inputs(tmp_path):
    with pytest.raises(ValueError):
        PointSet(2, np.array([[1.0, 1.0]]))
    with pytest.raises(ValueError):
        PointSet(2, np.array([[1.0, 0.0]]), antipodal=True)
    with pytest.raises(ValueError):
        builtin_design("dodecahedron")
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2\n1 0\n")
    with pytest.raises(ValueError):
        load_pointset(bad)
