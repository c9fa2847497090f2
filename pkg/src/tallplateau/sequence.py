"""Solution sequences for radially projected boundary data on B_n x R.

Rectangle data.  For R = [theta_a, theta_b] x [m - c, m + c] the projected
curve on the cylinder dB_n x R bounds a disk that is a graph r = w(s, z) in
Fermi coordinates (r, s) about the axis geodesic of R.  In those coordinates
the metric is dr^2 + cosh(r)^2 ds^2 + dz^2 and the area of the graph is

    A(w) = int sqrt(cosh(w)^2 (1 + w_z^2) + w_s^2) ds dz.

The top and bottom edges carry w = r_n(s), the Fermi distance of the circle
dB_n over the arc; the side edges carry the constant values at the arc ends.
A is not convex in w, so Newton steps use a shifted Hessian when needed.

Essential graph data are solved as vertical graphs over the disk mesh of B_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, sparse

from . import hyperbolic as hyp
from .config import SolverConfig
from .curves import TWO_PI, CurveFamily, _jsonable
from .graph import (
    GraphFunctional,
    GraphSolution,
    NonConvergence,
    discrete_min_graph,
    disk_mesh,
    essential_graph_values,
    newton_minimize,
)
from .mesh import QUAD_BARY, QUAD_W, Mesh, conformal_factor, structured_triangles


@dataclass(frozen=True)
class RectData:
    theta_a: float
    theta_b: float
    mid: float
    c: float


def rectangle_data(family: CurveFamily) -> RectData | None:
    """Recognise the boundary of an axis-parallel rectangle; None otherwise."""
    if len(family.components) != 1:
        return None
    c = family.components[0]
    if c.winding != 0:
        return None
    ts = np.unique(c.t)
    if ts.size != 2:
        return None
    lo, hi = float(ts[0]), float(ts[1])
    d = c.dtheta
    # vertical sides: exactly two vertical segments spanning [lo, hi]
    vert = np.nonzero(d == 0)[0]
    if vert.size != 2:
        return None
    # every non-vertical segment is horizontal
    n = len(c)
    for i in range(n):
        if d[i] != 0 and c.t[i] != c.t[(i + 1) % n]:
            return None
    lifted = c.unwrapped
    span = lifted[:, 0].max() - lifted[:, 0].min()
    start = lifted[:, 0].min()
    if not (0 < span < TWO_PI):
        return None
    return RectData(float(start), float(start + span), 0.5 * (lo + hi), 0.5 * (hi - lo))


# ------------------------------------------------------------ horizontal graph


class HorizontalFunctional:
    """Area of graphs r = asinh(v(s, z)) over a triangulated (s, z) rectangle.

    With v = sinh r the density is sqrt(1 + v^2 + v_z^2 + v_s^2 / (1 + v^2)),
    which grows only linearly in v.  In the variable r itself the density
    carries cosh(r)^2, and low-order quadrature on steep triangles then
    underestimates the area badly enough to create spurious minimizers.
    """

    def __init__(self, sz: np.ndarray, tris: np.ndarray):
        self.tris = tris
        self.n = len(sz)
        x = sz[tris]
        e1 = x[:, 1] - x[:, 0]
        e2 = x[:, 2] - x[:, 0]
        det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
        self.area = 0.5 * np.abs(det)
        inv = np.empty((len(tris), 2, 2))
        inv[:, 0, 0] = e2[:, 1] / det
        inv[:, 0, 1] = -e2[:, 0] / det
        inv[:, 1, 0] = -e1[:, 1] / det
        inv[:, 1, 1] = e1[:, 0] / det
        ref = np.array([[-1.0, 1.0, 0.0], [-1.0, 0.0, 1.0]])
        self.B = np.einsum("mij,ik->mjk", inv, ref)  # rows d/ds, d/dz
        self._rows = np.repeat(tris, 3, axis=1).ravel()
        self._cols = np.tile(tris, (1, 3)).ravel()

    def _fields(self, v, bary=QUAD_BARY):
        vt = v[self.tris]
        grad = np.einsum("mjk,mk->mj", self.B, vt)
        vq = vt @ bary.T  # (M, q)
        return vq, grad[:, 0], grad[:, 1]

    def density(self, vq, p, q):
        D = 1.0 + vq**2
        return np.sqrt(D + q[:, None] ** 2 + p[:, None] ** 2 / D)

    def energy(self, v) -> float:
        vq, p, q = self._fields(v)
        return float(np.sum(self.area * (self.density(vq, p, q) @ QUAD_W)))

    def gradient_hessian(self, v):
        vq, p, q = self._fields(v)
        P = p[:, None]
        Q = q[:, None]
        D = 1.0 + vq**2
        A = D + Q**2 + P**2 / D
        G = np.sqrt(A)
        Av = 2.0 * vq - 2.0 * vq * P**2 / D**2
        Ap = 2.0 * P / D
        Aq = 2.0 * Q
        Avv = 2.0 - 2.0 * P**2 / D**2 + 8.0 * vq**2 * P**2 / D**3
        Avp = -4.0 * vq * P / D**2
        App = 2.0 / D
        G3 = 4.0 * G**3
        Gv, Gp, Gq = Av / (2 * G), Ap / (2 * G), Aq / (2 * G)
        Gvv = Avv / (2 * G) - Av * Av / G3
        Gvp = Avp / (2 * G) - Av * Ap / G3
        Gvq = -Av * Aq / G3
        Gpp = App / (2 * G) - Ap * Ap / G3
        Gpq = -Ap * Aq / G3
        Gqq = 1.0 / G - Aq * Aq / G3
        wA = self.area[:, None] * QUAD_W[None, :]
        phi = QUAD_BARY  # (q, k)
        Bp = self.B[:, 0, :]
        Bq = self.B[:, 1, :]
        loc = (wA * Gv) @ phi + np.sum(wA * Gp, axis=1)[:, None] * Bp + np.sum(wA * Gq, axis=1)[:, None] * Bq
        grad = np.bincount(self.tris.ravel(), loc.ravel(), minlength=self.n)
        # Hessian: sum_q wA J^T D2G J with J rows (phi, Bp, Bq)
        H = np.einsum("mq,qk,ql->mkl", wA * Gvv, phi, phi)
        cp = np.einsum("mq,qk->mk", wA * Gvp, phi)
        cq = np.einsum("mq,qk->mk", wA * Gvq, phi)
        H += np.einsum("mk,ml->mkl", cp, Bp) + np.einsum("mk,ml->mkl", Bp, cp)
        H += np.einsum("mk,ml->mkl", cq, Bq) + np.einsum("mk,ml->mkl", Bq, cq)
        spp = np.sum(wA * Gpp, axis=1)[:, None, None]
        spq = np.sum(wA * Gpq, axis=1)[:, None, None]
        sqq = np.sum(wA * Gqq, axis=1)[:, None, None]
        H += spp * np.einsum("mk,ml->mkl", Bp, Bp)
        H += spq * (np.einsum("mk,ml->mkl", Bp, Bq) + np.einsum("mk,ml->mkl", Bq, Bp))
        H += sqq * np.einsum("mk,ml->mkl", Bq, Bq)
        Hs = sparse.csr_matrix((H.ravel(), (self._rows, self._cols)), shape=(self.n, self.n))
        return grad, Hs


def boundary_arc(rd: RectData, n: float):
    """Fermi (r, s) of the circle dB_n over the arc, as functions of s.

    Returns (s_a, s_b, r_of_s) where r_of_s inverts s(theta) by root finding.
    """
    def fermi(theta):
        p = hyp.polar_to_disk(np.array([n]), np.array([theta]))
        r, s = hyp.to_fermi(p, rd.theta_a, rd.theta_b)
        return float(r[0]), float(s[0])

    r_a, s_a = fermi(rd.theta_a)
    r_b, s_b = fermi(rd.theta_b)

    def r_of_s(s_vals):
        out = np.empty(len(s_vals))
        for k, s in enumerate(s_vals):
            if s <= s_a:
                out[k] = r_a
            elif s >= s_b:
                out[k] = r_b
            else:
                th = optimize.brentq(lambda t: fermi(t)[1] - s, rd.theta_a, rd.theta_b, xtol=1e-14)
                out[k] = fermi(th)[0]
        return out

    return s_a, s_b, r_of_s


@dataclass
class SurfaceSolution:
    """Solution surface as a mesh in disk coordinates with heights."""

    mesh: Mesh
    param: np.ndarray  # (N, 2) parameters of the nodes
    area: float
    window_area: float
    core_area_fraction: float
    drift: float
    iterations: int
    residual: float
    extra: dict = field(default_factory=dict)


def _sub_bary(k: int) -> np.ndarray:
    """Barycentric centroids of the k^2 sub-triangles of a uniform split."""
    pts = []
    for i in range(k):
        for j in range(k - i):
            pts.append(((i + 1 / 3) / k, (j + 1 / 3) / k))
            if i + j < k - 1:
                pts.append(((i + 2 / 3) / k, (j + 2 / 3) / k))
    a = np.array(pts)
    return np.column_stack([1 - a.sum(axis=1), a])


SUB = _sub_bary(4)


def _region_areas(dens_fn, pos_fn, tris, area, radii):
    """Area split by hyperbolic distance from the origin via sub-triangle sampling.

    dens_fn(bary) -> (M, k) densities, pos_fn(bary) -> (M, k) distances.
    Returns total area and the areas inside each radius.
    """
    dens = dens_fn(SUB)
    dist = pos_fn(SUB)
    wts = area[:, None] * dens / SUB.shape[0]
    total = float(np.sum(wts))
    return total, [float(np.sum(wts[dist < R])) for R in radii]


def height_nodes(c: float, n: float, nz: int) -> np.ndarray:
    """Nodes on [-c, c]: nearly uniform in the middle, geometric toward the edges.

    A surface meeting the top edge of the data at radius n approaches it
    nearly horizontally, with c - z of order e^{-r} at distance r.  The
    distance to the edge is d(xi) = c (1 - xi) exp(-n xi^2) on a uniform xi
    grid, which resolves that sheet down to about c e^{-n}.
    """
    half = max(4, nz // 2)
    xi = np.linspace(0.0, 1.0, half + 1)
    up = c - c * (1.0 - xi) * np.exp(-n * xi**2)
    up[-1] = c
    return np.concatenate([-up[:0:-1], up])


def solve_rectangle(rd: RectData, n: float, cfg: SolverConfig, w0=None) -> SurfaceSolution:
    s_a, s_b, r_of_s = boundary_arc(rd, n)
    ns = max(8, int(math.ceil((s_b - s_a) / cfg.ds)))
    s_nodes = np.linspace(s_a, s_b, ns + 1)
    z_nodes = height_nodes(rd.c, n, cfg.nz)
    S, Z = np.meshgrid(s_nodes, z_nodes, indexing="ij")
    sz = np.column_stack([S.ravel(), Z.ravel()])
    tris = structured_triangles(ns, len(z_nodes) - 1)
    nzp = len(z_nodes)
    idx = np.arange(len(sz)).reshape(ns + 1, nzp)
    rb = r_of_s(s_nodes)
    w = np.repeat(rb, nzp)  # start from the projected cylinder patch
    if w0 is not None:
        w = np.maximum(np.minimum(w0(sz), w), -abs(rb).max())
    boundary = np.unique(np.concatenate([idx[0], idx[-1], idx[:, 0], idx[:, -1]]))
    w[idx[:, 0]] = rb
    w[idx[:, -1]] = rb
    w[idx[0]] = rb[0]
    w[idx[-1]] = rb[-1]
    fixed = np.zeros(len(sz), dtype=bool)
    fixed[boundary] = True
    free = np.nonzero(~fixed)[0]
    F = HorizontalFunctional(sz, tris)
    v, E, log, ok = newton_minimize(F.energy, F.gradient_hessian, np.sinh(w), free, cfg, convex=False, max_step=0.5 * math.sinh(n))
    if not ok:
        raise NonConvergence(f"rectangle solve at n={n:g} did not converge", log.residuals[-1])
    w = np.arcsinh(v)
    xy = hyp.from_fermi(w, sz[:, 0], rd.theta_a, rd.theta_b)
    mesh = Mesh(np.column_stack([xy, rd.mid + sz[:, 1]]), tris)

    def bary_fields(bary):
        vt = v[tris]
        grad = np.einsum("mjk,mk->mj", F.B, vt)
        return vt @ bary.T, grad

    def dens_fn(bary):
        vq, grad = bary_fields(bary)
        return F.density(vq, grad[:, 0], grad[:, 1])

    def pos_fn(bary):
        vq, _ = bary_fields(bary)
        wq = np.arcsinh(vq)
        sq = sz[tris, 0] @ bary.T
        p = hyp.from_fermi(wq, sq, rd.theta_a, rd.theta_b)
        return 2.0 * np.arctanh(np.minimum(np.hypot(p[..., 0], p[..., 1]), 1 - 1e-16))

    total, (win, core) = _region_areas(dens_fn, pos_fn, tris, F.area, [cfg.window, 0.5 * n])
    drift = float(np.min(2.0 * np.arctanh(np.hypot(xy[:, 0], xy[:, 1]))))
    sol = SurfaceSolution(mesh, sz, total, win, core / total, drift, log.iterations, log.residuals[-1])
    sol.extra["w"] = w
    sol.extra["s_range"] = (s_a, s_b)
    return sol


def _interpolator(prev: SurfaceSolution):
    """Warm start: previous solution's w as a function of (s, z), clamped outside."""
    from scipy.interpolate import LinearNDInterpolator, NearestNDInterpolator

    lin = LinearNDInterpolator(prev.param, prev.extra["w"])
    near = NearestNDInterpolator(prev.param, prev.extra["w"])

    def f(sz):
        v = lin(sz)
        bad = np.isnan(v)
        v[bad] = near(sz[bad])
        return v

    return f


# ----------------------------------------------------------- essential graphs


def solve_essential(family: CurveFamily, n: float, cfg: SolverConfig) -> SurfaceSolution:
    mesh, boundary = disk_mesh(n, cfg.n_radial, cfg.n_angular)
    th = np.mod(np.arctan2(mesh.xy[boundary, 1], mesh.xy[boundary, 0]), TWO_PI)
    values = essential_graph_values(family, th)
    sol: GraphSolution = discrete_min_graph(mesh, boundary, values, cfg)
    m = sol.mesh
    F = GraphFunctional(mesh)
    g2 = np.sum(F.grads(sol.u) ** 2, axis=1)
    pts = np.einsum("qk,mkd->mqd", SUB, mesh.xy[mesh.triangles])

    def dens_fn(bary):
        lam2 = conformal_factor(pts) ** 2
        return np.sqrt(lam2**2 + lam2 * g2[:, None])

    def pos_fn(bary):
        return 2.0 * np.arctanh(np.hypot(pts[..., 0], pts[..., 1]))

    total, (win, core) = _region_areas(dens_fn, pos_fn, mesh.triangles, F.area, [cfg.window, 0.5 * n])
    out = SurfaceSolution(m, m.xy.copy(), total, win, core / total, 0.0, sol.log.iterations, sol.log.residuals[-1])
    out.extra["u"] = sol.u
    return out


# ----------------------------------------------------------------- reports


@dataclass
class SolveReport:
    n: float
    status: str  # Converged | Escaped | Indeterminate
    core_area_fraction: float
    drift: float
    window_area: float
    window_change: float | None
    area: float
    iterations: int
    residual: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "status": self.status,
            "core_area_fraction": self.core_area_fraction,
            "drift": self.drift,
            "window_area": self.window_area,
            "window_change": _jsonable(self.window_change),
            "area": self.area,
            "iterations": self.iterations,
            "residual": self.residual,
        }


ESCAPE_RATE = 0.25  # drift increment per unit n that counts as escaping


def solve_sequence(family: CurveFamily, n_list, cfg: SolverConfig | None = None, keep: bool = False, warm_start: bool = True):
    """Solve on B_n for each n and label the trend.

    Converged: the area inside the window B_{n0} changed by less than
    rel_tol since the previous n and the surface meets the window.
    A rectangle solve that fails from the cylinder-patch start is retried
    from the previous solution when warm_start is set.
    Escaped: the fraction of area inside B_{n/2} is below escape_frac and
    the distance from the origin to the surface has grown at every step by
    at least ESCAPE_RATE times the step in n.
    Returns the reports and, when keep is set, the solutions.
    """
    cfg = cfg or SolverConfig()
    n_list = [float(x) for x in n_list]
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be increasing")
    rd = rectangle_data(family)
    if rd is None:
        essential_graph_values(family, np.zeros(1))  # raises for unsupported data
    reports, sols = [], []
    prev = None
    drifts = []
    for n in n_list:
        if rd is not None:
            try:
                sol = solve_rectangle(rd, n, cfg)
            except NonConvergence:
                # continuation from the previous radius rescues the harder solves
                if not (warm_start and prev is not None):
                    raise
                sol = solve_rectangle(rd, n, cfg, _interpolator(prev))
        else:
            sol = solve_essential(family, n, cfg)
        drifts.append(sol.drift)
        change = None
        status = "Indeterminate"
        if prev is not None:
            base = max(prev.window_area, 1e-300)
            change = abs(sol.window_area - prev.window_area) / base if prev.window_area > 0 else math.inf
            if sol.window_area > 0 and change < cfg.rel_tol:
                status = "Converged"
        if status != "Converged" and len(drifts) >= 2:
            steps = zip(drifts, drifts[1:], n_list, n_list[1:])
            increasing = all(d1 - d0 >= ESCAPE_RATE * (m1 - m0) for d0, d1, m0, m1 in steps)
            if sol.core_area_fraction < cfg.escape_frac and increasing:
                status = "Escaped"
        reports.append(
            SolveReport(n, status, sol.core_area_fraction, sol.drift, sol.window_area, change, sol.area, sol.iterations, sol.residual)
        )
        sols.append(sol)
        prev = sol
    return (reports, sols) if keep else reports
