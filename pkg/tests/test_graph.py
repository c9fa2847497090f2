import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tallplateau import hyperbolic as hyp
from tallplateau.config import SolverConfig
from tallplateau.curves import ClosedCurve, CurveFamily
from tallplateau.graph import (
    GraphFunctional,
    NonConvergence,
    UnsupportedCurve,
    discrete_min_graph,
    disk_mesh,
    essential_graph_values,
    radial_projection,
    strip_problem,
)
from tallplateau.mesh import Mesh

CFG = SolverConfig(tol=1e-11)


def small_disk(n=2.0):
    return disk_mesh(n, n_radial=8, n_angular=24)


def bumpy(mesh, boundary, seed):
    rng = np.random.default_rng(seed)
    th = np.arctan2(mesh.xy[boundary, 1], mesh.xy[boundary, 0])
    a = rng.normal(size=3)
    return a[0] * np.cos(th) + a[1] * np.sin(2 * th) + a[2] * np.cos(3 * th)


def test_constant_boundary_gives_slice():
    mesh, b = small_disk()
    sol = discrete_min_graph(mesh, b, np.full(len(b), 0.7), CFG)
    assert np.all(sol.u == 0.7)
    assert sol.converged


@settings(max_examples=15)
@given(st.integers(0, 10_000))
def test_maximum_principle(seed):
    mesh, b = small_disk()
    vals = bumpy(mesh, b, seed)
    sol = discrete_min_graph(mesh, b, vals, CFG)
    assert sol.u.min() >= vals.min() and sol.u.max() <= vals.max()


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_energy_descent(seed):
    mesh, b = small_disk()
    sol = discrete_min_graph(mesh, b, 3 * bumpy(mesh, b, seed), CFG)
    e = np.array(sol.log.energies)
    assert np.all(np.diff(e) <= 1e-12 * abs(e[0]))


def test_gradient_and_hessian_match_finite_differences():
    mesh, b = small_disk()
    F = GraphFunctional(mesh)
    rng = np.random.default_rng(1)
    u = rng.normal(size=len(mesh.xy))
    g, H = F.gradient_hessian(u)
    d = rng.normal(size=u.size)
    eps = 1e-6
    fd = (F.energy(u + eps * d) - F.energy(u - eps * d)) / (2 * eps)
    assert fd == pytest.approx(g @ d, rel=1e-6)
    g1, _ = F.gradient_hessian(u + eps * d)
    g0, _ = F.gradient_hessian(u - eps * d)
    assert np.allclose((g1 - g0) / (2 * eps), H @ d, atol=1e-6)


def test_symmetric_data_symmetric_solution():
    # data even under y -> -y; the mesh is symmetric under the same reflection
    mesh, b = disk_mesh(2.0, n_radial=8, n_angular=24)
    th = np.arctan2(mesh.xy[b, 1], mesh.xy[b, 0])
    sol = discrete_min_graph(mesh, b, np.cos(th) + 0.5 * np.cos(2 * th), CFG)
    xy = mesh.xy
    mirror = np.array([np.argmin(np.sum((xy - [x, -y]) ** 2, axis=1)) for x, y in xy])
    assert np.allclose(xy[mirror], xy * [1, -1], atol=1e-12)
    assert np.max(np.abs(sol.u[mirror] - sol.u)) < 1e-10


symmetries = st.one_of(st.builds(hyp.rotation, st.floats(0, 2 * math.pi)), st.builds(hyp.reflection, st.floats(0, 2 * math.pi)))


@settings(max_examples=10)
@given(symmetries, st.integers(0, 10_000))
def test_equivariance_under_disk_symmetries(g, seed):
    mesh, b = small_disk()
    vals = bumpy(mesh, b, seed)
    moved = Mesh(g(mesh.xy), mesh.triangles)
    u1 = discrete_min_graph(mesh, b, vals, CFG).u
    u2 = discrete_min_graph(moved, b, vals, CFG).u
    assert np.max(np.abs(u1 - u2)) < 1e-10


def test_nonconvergence_reports_residual():
    mesh, b = small_disk()
    with pytest.raises(NonConvergence) as info:
        discrete_min_graph(mesh, b, 5 * bumpy(mesh, b, 0), SolverConfig(max_iter=1, tol=1e-14))
    assert info.value.residual > 0


def strip_errors(levels=(8, 16, 32)):
    out = []
    for k in levels:
        mesh, b, vals, exact = strip_problem(4.0, 2.0, 1.0, k, k)
        sol = discrete_min_graph(mesh, b, vals, CFG)
        out.append((mesh.max_edge_hyperbolic(), float(np.max(np.abs(sol.u - exact)))))
    return out


def test_strip_oracle_refinement():
    errs = strip_errors()
    edges = [e for e, _ in errs]
    err = [x for _, x in errs]
    for (h0, e0), (h1, e1) in zip(errs, errs[1:]):
        assert h1 / h0 == pytest.approx(0.5, rel=0.1)
        # at least halves, within 30%
        assert e1 / e0 <= 0.5 * 1.3
    assert err[-1] < 1e-2 and edges[0] > edges[-1]


@given(st.floats(0.1, 6.0), st.floats(0.1, 6.0))
def test_radial_projection(n1, n2):
    f = CurveFamily.of(ClosedCurve.from_points([(0.3, -1), (1.2, -1), (1.2, 2), (0.3, 2)]))
    p = radial_projection(f, n1)[0]
    c = f.components[0]
    assert np.allclose(np.arctan2(p[:, 1], p[:, 0]), c.theta, atol=1e-12)
    assert np.array_equal(p[:, 2], c.t)
    rad = np.hypot(p[:, 0], p[:, 1])
    assert np.allclose(rad, math.tanh(n1 / 2), atol=1e-14)
    assert np.allclose(hyp.disk_distance(np.zeros_like(p[:, :2]), p[:, :2]), n1, rtol=1e-9)
    q = radial_projection(f, n2)[0]
    if n1 < n2:
        assert np.all(rad < np.hypot(q[:, 0], q[:, 1]))


def test_essential_values_and_unsupported():
    th = np.linspace(0, 2 * math.pi, 7)[:-1]
    f = CurveFamily.of(ClosedCurve.from_points(list(zip(th, np.sin(th)))))
    x = np.array([0.1, 2.0, 5.9])
    v = essential_graph_values(f, x)
    assert np.all(np.abs(v) <= 1.0)
    assert np.allclose(essential_graph_values(f, th), np.sin(th), atol=1e-12)
    box = CurveFamily.of(ClosedCurve.from_points([(0, 0), (1, 0), (1, 4), (0, 4)]))
    with pytest.raises(UnsupportedCurve):
        essential_graph_values(box, x)
