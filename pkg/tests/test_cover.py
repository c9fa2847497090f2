import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import distance_to_family, sample_segments
from tallplateau import hyperbolic as hyp
from tallplateau.corpus import tall_corpus
from tallplateau.cover import (
    MissingBarrier,
    NearCritical,
    NotTall,
    TallRectangle,
    crossing_parities,
    mch,
    mch_contains,
    omega_sides,
    tall_cover,
)
from tallplateau.curves import CurveFamily, horizontal_circle, rectangle

L_SHAPE = CurveFamily.of([(0, 0), (3, 0), (3, 5), (1.5, 5), (1.5, 8), (0, 8)])


def fam(*c):
    return CurveFamily.of(*c)


def test_rectangle_validation():
    with pytest.raises(ValueError):
        TallRectangle(0, 1, 0, 3)
    with pytest.raises(ValueError):
        TallRectangle(0, 7, 0, 4)
    r = TallRectangle(6.0, 7.0, -math.inf, 0.0)
    assert r.kind == "lower"
    assert r.contains(0.5, -3.0) and not r.contains(1.5, -3.0)


def test_omega_sides_examples():
    s = omega_sides(fam(rectangle(0, 2, 0, 4)))
    assert s.face_count == 2
    assert s.label(1.0, 2.0)[0] == "+" and s.label(3.0, 2.0)[0] == "-"
    nested = omega_sides(fam(rectangle(0, 3, 0, 9), rectangle(1, 2, 2, 7)))
    assert nested.face_count == 3
    assert list(nested.label([4.0, 0.5, 1.5], [1.0, 5.0, 5.0])) == ["-", "+", "-"]
    circ = omega_sides(fam(horizontal_circle(0.0)))
    assert circ.face_count == 2
    assert list(circ.label([1.0, 1.0], [-1.0, 1.0])) == ["+", "-"]


def test_crossing_parity_per_component():
    f = fam(rectangle(0, 1, 0, 4), rectangle(2, 3, 0, 4))
    p = crossing_parities(f, [0.5, 2.5, 4.0], [1.0, 1.0, 1.0])
    assert p.tolist() == [[1, 0, 0], [0, 1, 0]]


def test_cover_single_rectangle():
    f = fam(rectangle(0, 2, 0, 4))
    c = tall_cover(f)
    assert any(r.theta_lo == 0 and r.theta_hi == 2 and r.t_lo == 0 and r.t_hi == 4 for r in c.plus)
    assert all(r.height > math.pi for r, _ in c.all())


def test_cover_requires_tall():
    with pytest.raises(NotTall):
        tall_cover(fam(rectangle(0, 2, 0, 3)))


def test_near_critical_depth_cap():
    # height barely above pi with slanted edges cannot be resolved within the depth cap
    f = fam([(0.0, 0.0), (1.0, 0.5), (1.0, 0.5 + math.pi + 1e-12), (0.0, math.pi + 1e-12)])
    with pytest.raises(NearCritical):
        tall_cover(f, eps=1e-3, tol=1e-13, max_depth=20)


def strictly_inside(r, th, t, tol=1e-9):
    u = np.mod(th - r.theta_lo, 2 * math.pi)
    return (u > tol) & (u < r.theta_hi - r.theta_lo - tol) & (t > r.t_lo + tol) & (t < r.t_hi - tol)


def check_cover(f, c, n=20_000, seed=0):
    rng = np.random.default_rng(seed)
    lo, hi = f.t_range()
    th = rng.uniform(0, 2 * math.pi, n)
    t = rng.uniform(lo - 4, hi + 4, n)
    far = distance_to_family(f, th, t) > c.coverage_margin
    assert np.all(c.covers(th[far], t[far]))
    # rectangles avoid the curve and carry the label of their side
    sth, st_ = sample_segments(f)
    rects = c.all()
    for r, _ in rects:
        assert r.height > math.pi
        assert not np.any(strictly_inside(r, sth, st_))
    centers = np.array([r.center() for r, _ in rects])
    labels = omega_sides(f).label(centers[:, 0], centers[:, 1])
    assert list(labels) == [side for _, side in rects]


def test_cover_l_shape():
    c = tall_cover(L_SHAPE)
    assert len(c.plus) >= 2
    check_cover(L_SHAPE, c)


@settings(max_examples=6)
@given(st.integers(0, 1000))
def test_cover_random_tall(seed):
    f = tall_corpus(1, seed)[0]
    check_cover(f, tall_cover(f, eps=1e-2), n=5000, seed=seed)


def test_clearance_shrinks():
    f = fam(rectangle(0, 2, 0, 4))
    c = tall_cover(f, clearance=0.1)
    for r, _ in c.all():
        assert r.height > math.pi
    sth, st_ = sample_segments(f)
    for r, _ in c.all():
        inside = r.contains(sth, st_)
        assert not inside.any()


@pytest.fixture(scope="module")
def tall_mch():
    f = fam(rectangle(0, 2, -2, 2))
    return mch(f, tall_cover(f))


def test_mch_examples(tall_mch):
    d = tall_mch
    assert d.slab == (-2.0, 2.0)
    r0 = hyp.from_fermi(0.5 * 0.6881276637562735, 0.0, 0.0, 2.0)
    assert mch_contains(d, r0, 0.0)[0]
    assert not mch_contains(d, r0, 2.5)[0]
    deep = hyp.from_fermi(2.0, 0.0, 0.0, 2.0)
    assert not mch_contains(d, deep, 0.0)[0]
    assert not mch_contains(d, hyp.from_fermi(-0.1, 0.0, 0.0, 2.0), 0.0)[0]


def test_mch_requires_barriers():
    f = fam(rectangle(0, 2, -2, 2))
    d = mch(f, tall_cover(f), with_barriers=False)
    with pytest.raises(MissingBarrier):
        mch_contains(d, np.zeros(2), 0.0)


def test_mch_monotone_under_component_removal():
    two = fam(rectangle(0, 1, -2, 2), rectangle(3, 4, -2, 2))
    one = fam(rectangle(0, 1, -2, 2))
    d2, d1 = mch(two, tall_cover(two)), mch(one, tall_cover(one))
    rng = np.random.default_rng(3)
    p = hyp.polar_to_disk(rng.uniform(0, 4, 400), rng.uniform(0, 2 * math.pi, 400))
    z = rng.uniform(-2, 2, 400)
    inside2 = mch_contains(d2, p, z)
    inside1 = mch_contains(d1, p, z)
    assert np.all(inside2[inside1])


def test_mch_to_dict(tall_mch):
    d = tall_mch.to_dict()
    assert d["slab"] == [-2.0, 2.0]
    assert len(d["barriers"]) == len(d["carved"])
