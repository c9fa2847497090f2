import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tallplateau import hyperbolic as hyp

angles = st.floats(0, 2 * math.pi)
radii = st.floats(0.0, 8.0)


def random_points(seed, n=50, rho_max=4.0):
    rng = np.random.default_rng(seed)
    return hyp.polar_to_disk(rng.uniform(0, rho_max, n), rng.uniform(0, 2 * math.pi, n))


@given(radii, angles)
def test_polar_round_trip(rho, th):
    p = hyp.HypPoint.from_polar(rho, th)
    r2, t2 = p.to_polar()
    assert r2 == pytest.approx(rho, abs=1e-12)
    if rho > 1e-6:
        assert math.cos(t2 - th) == pytest.approx(1.0, abs=1e-12)


def test_point_outside_disk_rejected():
    with pytest.raises(ValueError):
        hyp.HypPoint(1.0, 0.0)


def test_distance_from_origin_is_rho():
    p = hyp.polar_to_disk(np.array([0.5, 2.0, 5.0]), np.array([0.0, 1.0, 2.0]))
    assert np.allclose(hyp.disk_distance(np.zeros((3, 2)), p), [0.5, 2.0, 5.0], atol=1e-12)


def isometries():
    return st.one_of(
        st.builds(hyp.rotation, angles),
        st.builds(hyp.reflection, angles),
        st.builds(lambda a, w, t: hyp.translation(a, a + w, t), angles, st.floats(0.05, 6.2), st.floats(-3, 3)),
    )


@given(isometries(), st.integers(0, 1000))
def test_isometries_preserve_distance(g, seed):
    p = random_points(seed)
    q = random_points(seed + 1)
    assert np.allclose(hyp.disk_distance(g(p), g(q)), hyp.disk_distance(p, q), atol=1e-12, rtol=1e-12)


@given(isometries(), isometries(), st.integers(0, 1000))
def test_composition_and_inverse(g, f, seed):
    p = random_points(seed, 20)
    assert np.allclose(g.compose(f)(p), g(f(p)), atol=1e-12)
    assert np.allclose(g.inverse()(g(p)), p, atol=1e-12)


def test_translation_moves_along_axis():
    g = hyp.translation(math.pi, 0.0, 1.3)
    # the axis through pi and 0 is the real diameter; the origin moves by 1.3 toward theta=0
    p = g(np.array([0.0, 0.0]))
    assert p[1] == pytest.approx(0.0, abs=1e-15)
    assert hyp.disk_distance(np.zeros(2), p) == pytest.approx(1.3, abs=1e-12)
    assert p[0] > 0


@given(st.floats(-4, 4), st.floats(-4, 4), angles, st.floats(0.1, 6.0))
def test_fermi_round_trip(r, s, a, w):
    p = hyp.from_fermi(r, s, a, a + w)
    r2, s2 = hyp.to_fermi(p, a, a + w)
    assert r2 == pytest.approx(r, abs=1e-9)
    assert s2 == pytest.approx(s, abs=1e-9)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_fermi_metric(r, s, ds):
    # points at equal r: the geodesic distance grows with cosh(r) ds for small ds
    a, b = 0.0, 2.0
    eps = 1e-5
    p = hyp.from_fermi(r, s, a, b)
    q = hyp.from_fermi(r, s + eps, a, b)
    u = hyp.from_fermi(r + eps, s, a, b)
    assert hyp.disk_distance(p, q) / eps == pytest.approx(math.cosh(r), rel=1e-4)
    assert hyp.disk_distance(p, u) / eps == pytest.approx(1.0, rel=1e-4)


def test_fermi_r_is_signed_distance_to_axis():
    a, b = 0.0, 2.0
    r0 = hyp.distance_origin_to_geodesic(a, b)
    assert r0 == pytest.approx(-0.6046, abs=1e-4)
    # distance from the origin to the geodesic, computed from the chord midpoint
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    assert abs(r0) == pytest.approx(math.atanh(math.cos(half)), abs=1e-12)
    assert hyp.disk_distance(np.zeros(2), hyp.from_fermi(0.0, hyp.to_fermi(np.zeros(2), a, b)[1], a, b)) == pytest.approx(abs(r0), abs=1e-12)
    # points toward the arc have positive r
    assert hyp.to_fermi(hyp.polar_to_disk(5.0, mid), a, b)[0] > 0


def test_degenerate_geodesic_rejected():
    with pytest.raises(ValueError):
        hyp.translation(1.0, 1.0, 0.5)


def test_uhp_scaling_fixes_axis_ends():
    g = hyp.uhp_scaling(2.0)
    ends = np.array([1.0 + 0j, -1.0 + 0j])
    assert np.allclose(g(ends), ends)
