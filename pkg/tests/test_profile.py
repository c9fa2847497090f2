import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import ellipk

from tallplateau import hyperbolic as hyp
from tallplateau.catenoid import DomainError, OutOfRange, ResolutionTooLow
from tallplateau.cover import TallRectangle
from tallplateau.profile import (
    generating_curve,
    half_height,
    neck_for_height,
    ph_mesh,
    widened_mesh,
    widened_side,
    widening,
)


def H_oracle(r0):
    # closed form of the half height as a complete elliptic integral
    return ellipk(1.0 / math.cosh(r0) ** 2)


@given(st.floats(1e-3, 12.0))
def test_half_height_matches_elliptic_oracle(r0):
    assert half_height(r0) == pytest.approx(H_oracle(r0), abs=1e-10)


def test_half_height_examples():
    rs = np.geomspace(0.01, 10, 30)
    Hs = [half_height(r) for r in rs]
    assert all(b < a for a, b in zip(Hs, Hs[1:]))
    assert math.pi / 2 < half_height(10.0) < math.pi / 2 + 0.01
    assert half_height(0.01) > 3
    with pytest.raises(DomainError):
        half_height(0.0)


@given(st.floats(math.pi + 0.05, 30.0))
def test_neck_inverts_half_height(h):
    r0 = neck_for_height(h)
    assert abs(2 * half_height(r0) - h) <= 1e-9


def test_neck_laws():
    up = [neck_for_height(math.pi + e) for e in (1.0, 0.3, 0.1, 0.03, 0.01)]
    assert all(b > a for a, b in zip(up, up[1:]))
    down = [neck_for_height(h) for h in (4, 6, 10, 20)]
    assert all(b < a for a, b in zip(down, down[1:]))
    with pytest.raises(OutOfRange):
        neck_for_height(math.pi)


@pytest.fixture(scope="module")
def gc4():
    return generating_curve(4.0)


def test_generating_curve_shape(gc4):
    r, f = gc4.samples.T
    assert f[0] == pytest.approx(0.0, abs=1e-15)
    assert r[0] == pytest.approx(gc4.r0)
    assert np.all(np.diff(f) >= 0)
    rising = f < 2.0 - 1e-12
    assert np.all(np.diff(f[rising]) > 0)
    assert abs(gc4(gc4.r0 + 40.0) - 2.0) < 1e-9
    # the two halves (r, +-f) span the full height
    assert float(gc4(1e3)) - float(-gc4(1e3)) == pytest.approx(4.0, abs=1e-9)
    assert np.isnan(gc4(gc4.r0 - 0.1))


def test_generating_curve_matches_direct_quadrature(gc4):
    from scipy.integrate import quad

    c0 = math.cosh(gc4.r0)
    for r in (gc4.r0 + 0.01, gc4.r0 + 0.5, gc4.r0 + 3.0):
        # substitute rho = r0 + u^2 to remove the endpoint singularity
        g = lambda u: 2 * u * c0 / math.sqrt(math.cosh(gc4.r0 + u * u) ** 2 - c0**2) if u > 0 else 2 * c0 / math.sqrt(2 * c0 * math.sinh(gc4.r0))
        val, _ = quad(g, 0.0, math.sqrt(r - gc4.r0), epsabs=1e-13, epsrel=1e-13)
        assert float(gc4(r)) == pytest.approx(val, abs=1e-9)


@given(st.floats(0.0, 1.999))
def test_inverse_profile(z):
    gc = _gc4_cached()
    r = gc.inverse(z)
    assert float(gc(r)) == pytest.approx(z, abs=1e-9)


_cache = {}


def _gc4_cached():
    if "gc" not in _cache:
        _cache["gc"] = generating_curve(4.0)
    return _cache["gc"]


def test_ph_mesh_sheets(gc4):
    rect = TallRectangle(0.0, 2.0, -2.0, 2.0)
    res = 16
    m = ph_mesh(rect, res, gc=gc4)
    z = m.vertices[:, 2]
    assert z.max() < 2.0 and z.min() > -2.0
    assert z.max() > 2.0 - 0.05
    r, s = hyp.to_fermi(m.xy, 0.0, 2.0)
    assert np.all(r >= gc4.r0 - 1e-9)
    # each sheet is a vertical graph: distinct (r, s) per node within a sheet
    upper = z > 1e-12
    key = np.round(np.column_stack([r[upper], s[upper]]), 9)
    assert len(np.unique(key, axis=0)) == upper.sum()
    # the whole surface is a graph r = w(s, z)
    key = np.round(np.column_stack([s, z]), 9)
    assert len(np.unique(key, axis=0)) == len(z)
    with pytest.raises(ResolutionTooLow):
        ph_mesh(rect, 4, gc=gc4)


def test_widening_schedule():
    H0 = 2.0
    vals = [widening(H, H0) for H in (1.6, 1.8, 2.0, 3.0, 10.0)]
    assert all(0 < v < 2 for v in vals)
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert widening(H0, H0) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        widening(math.pi / 2, H0)


@pytest.mark.parametrize("H,H2", [(1.8, 2.0), (2.0, 2.5), (1.7, 3.0)])
def test_widened_planes_are_nested_and_disjoint(H, H2):
    H0, th1 = 2.0, 1.0
    g1, g2 = generating_curve(2 * H), generating_curve(2 * H2)
    inner = widened_mesh(H, H0, th1, 16, gc=g1)
    outer = widened_mesh(H2, H0, th1, 16, gc=g2)
    assert np.all(widened_side(inner.xy, inner.vertices[:, 2], H2, H0, th1, g2) < 0)
    assert np.all(widened_side(outer.xy, outer.vertices[:, 2], H, H0, th1, g1) > 0)
