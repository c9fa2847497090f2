"""Translation-invariant minimal planes P_h over tall rectangles.

In Fermi coordinates (r, s, z) about the axis geodesic of a rectangle the
metric is dr^2 + cosh(r)^2 ds^2 + dz^2.  A surface z = f(r) invariant under
translation in s has area density cosh(r) sqrt(1 + f'^2); the first integral
of its Euler-Lagrange equation is

    f'(r) = cosh(r0) / sqrt(cosh(r)^2 - cosh(r0)^2),   r >= r0,

so the plane over a rectangle of height h is {|z - m| = f(r)} with neck r0
fixed by 2 H(r0) = h, H(r0) = f(inf).  Writing sinh r = sinh(r0) cosh(q)
turns the profile into the smooth integral

    f = int_0^q cosh(r0) / sqrt(1 + sinh(r0)^2 cosh(q')^2) dq'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import interpolate, optimize

from . import hyperbolic as hyp
from .catenoid import DomainError, OutOfRange, ResolutionTooLow
from .mesh import Mesh
from .quadrature import integrate, integrate_to_infinity


def _integrand(r0: float):
    b = math.sinh(r0)
    c0 = math.cosh(r0)

    def g(q):
        return c0 / math.sqrt(1.0 + (b * math.cosh(q)) ** 2) if q < 700 else 0.0

    return g


def _knee(r0: float) -> float:
    """q where sinh(r0) cosh(q) ~ 1; the integrand turns from ~c0 to decay there."""
    return math.acosh(max(1.0, 1.0 / math.sinh(r0)))


def half_height(r0: float, tol: float = 1e-12) -> float:
    """H(r0): total rise of the half profile with neck r0."""
    if not (r0 > 0 and math.isfinite(r0)):
        raise DomainError("r0 must be positive")
    b = math.sinh(r0)
    c0 = math.cosh(r0)
    # integrand <= c0 / (b cosh q) <= 2 coth(r0) e^{-q}
    tail = lambda x: 2.0 * (c0 / b) * math.exp(-x)
    k = _knee(r0)
    return integrate_to_infinity(_integrand(r0), 0.0, tail, tol, points=[k, k + 2])


def neck_for_height(h: float, tol: float = 1e-9) -> float:
    """Neck distance r0 of the plane over a rectangle of height h > pi."""
    if not (h > math.pi):
        raise OutOfRange("planes exist only over rectangles of height > pi")
    g = lambda x: 2.0 * half_height(math.exp(x)) - h
    lo, hi = -1.0, 1.0
    while g(lo) < 0:
        lo -= 4.0
        if lo < -700:
            raise OutOfRange("height too large to resolve")
    while g(hi) > 0:
        hi += 2.0
        if hi > 6:
            raise OutOfRange("height too close to pi to resolve")
    x = optimize.brentq(g, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)
    r0 = math.exp(x)
    if abs(2.0 * half_height(r0) - h) > tol:
        raise OutOfRange(f"residual above {tol:g} at h={h}")
    return r0


@dataclass
class GeneratingCurve:
    """Half profile f on [r0, inf) with f(r0) = 0 and f -> h/2."""

    h: float
    r0: float
    samples: np.ndarray  # (n, 2) array of (r, f)
    q_max: float
    _spline: object = field(repr=False, default=None)

    @property
    def H(self) -> float:
        return 0.5 * self.h

    def f_of_q(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        inside = np.clip(q, 0.0, self.q_max)
        val = self._spline(inside)
        # beyond q_max the remaining rise is c0/b * (pi/2 - gd(q)) to leading order
        b = math.sinh(self.r0)
        c0 = math.cosh(self.r0)
        far = self.H - (c0 / b) * (math.pi / 2 - 2 * np.arctan(np.tanh(np.maximum(q, self.q_max) / 2)))
        return np.where(q > self.q_max, far, val)

    def q_of_r(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        with np.errstate(over="ignore"):
            ratio = np.sinh(r) / math.sinh(self.r0)
        return np.arccosh(np.maximum(ratio, 1.0))

    def __call__(self, r) -> np.ndarray:
        """f(r) for r >= r0; nan for r < r0."""
        r = np.asarray(r, dtype=float)
        out = self.f_of_q(self.q_of_r(r))
        return np.where(r >= self.r0, out, np.nan)

    def r_of_q(self, q) -> np.ndarray:
        return np.arcsinh(math.sinh(self.r0) * np.cosh(q))

    def inverse(self, z) -> np.ndarray:
        """r with f(r) = |z|, for |z| < h/2; inf at or beyond h/2."""
        z = np.abs(np.asarray(z, dtype=float))
        qs = np.linspace(0.0, self.q_max, 4001)
        fs = self.f_of_q(qs)
        out = np.full(z.shape, np.inf)
        ok = z < fs[-1]
        q = np.interp(z[ok], fs, qs)
        # two Newton steps polish the table inverse
        g = _integrand(self.r0)
        for _ in range(2):
            dq = (self.f_of_q(q) - z[ok]) / np.array([g(float(x)) for x in q])
            q = np.maximum(q - dq, 0.0)
        out[ok] = self.r_of_q(q)
        far = (~ok) & (z < self.H)
        if np.any(far):
            b = math.sinh(self.r0)
            c0 = math.cosh(self.r0)
            # invert the far-field asymptotic form
            gd = math.pi / 2 - (self.H - z[far]) * b / c0
            q_far = 2 * np.arctanh(np.tan(np.clip(gd, 0, math.pi / 2 - 1e-300) / 2))
            out[far] = self.r_of_q(q_far)
        return out


def generating_curve(h: float, n_samples: int = 400, q_max: float | None = None, dq: float = 0.005) -> GeneratingCurve:
    r0 = neck_for_height(h)
    if q_max is None:
        # far enough that r >= r0 + 40 is reached
        q_max = float(np.arccosh(max(1.0, math.sinh(r0 + 40.0) / math.sinh(r0))))
    g = _integrand(r0)
    nq = int(math.ceil(q_max / dq))
    qs = np.linspace(0.0, q_max, nq + 1)
    k = _knee(r0)
    pieces = [integrate(g, a, b, 1e-14, points=[k]) for a, b in zip(qs[:-1], qs[1:])]
    F = np.concatenate([[0.0], np.cumsum(pieces)])
    spline = interpolate.CubicSpline(qs, F)
    gc = GeneratingCurve(h, r0, np.empty((0, 2)), q_max, spline)
    # sample graded toward the neck: uniform in q is already dense near r0
    qsamp = np.linspace(0.0, q_max, n_samples)
    gc.samples = np.column_stack([gc.r_of_q(qsamp), gc.f_of_q(qsamp)])
    return gc


# ------------------------------------------------------------- swept surfaces


def ph_mesh(rect, resolution: int = 32, s_max: float = 4.0, q_max: float | None = None, gc: GeneratingCurve | None = None) -> Mesh:
    """Both sheets of the plane over `rect`, swept along its axis geodesic.

    Rows run over q (neck to far field) on both sheets, columns over the
    translation parameter s in [-s_max, s_max].
    """
    if resolution < 8:
        raise ResolutionTooLow("resolution must be at least 8")
    h = rect.t_hi - rect.t_lo
    if gc is None:
        gc = generating_curve(h)
    if q_max is None:
        q_max = float(np.arccosh(max(1.0, math.sinh(gc.r0 + 8.0) / math.sinh(gc.r0))))
    qs = np.linspace(0.0, q_max, resolution + 1)
    r = gc.r_of_q(qs)
    f = gc.f_of_q(qs)
    mid = 0.5 * (rect.t_lo + rect.t_hi)
    ring_r = np.concatenate([r[::-1], r[1:]])
    ring_z = np.concatenate([mid - f[::-1], mid + f[1:]])
    ss = np.linspace(-s_max, s_max, 2 * resolution + 1)
    R, S = np.meshgrid(ring_r, ss, indexing="ij")
    xy = hyp.from_fermi(R.ravel(), S.ravel(), rect.theta_lo, rect.theta_hi)
    z = np.repeat(ring_z, ss.size)
    from .mesh import structured_triangles

    tris = structured_triangles(ring_r.size - 1, ss.size - 1)
    return Mesh(np.column_stack([xy, z]), tris)


# ------------------------------------------------------------ widening schedule


def widening(H: float, H0: float) -> float:
    """Scale factor in (0, 2), increasing in the half height H > pi/2, equal to 1 at H0."""
    if H <= math.pi / 2:
        raise DomainError("half height must exceed pi/2")
    return (4.0 / math.pi) * math.atan((H - math.pi / 2) / (H0 - math.pi / 2))


def widened_side(p, z, H: float, H0: float, theta1: float, gc: GeneratingCurve) -> np.ndarray:
    """Signed side of points relative to the widened plane of half height H.

    The plane is the image under the half-plane scaling by widening(H, H0) of
    the plane over [-theta1, theta1] x [-H, H].  Returns negative values for
    points enclosed between the plane and its rectangle, positive outside.
    """
    g = hyp.uhp_scaling(widening(H, H0))
    q = g.inverse()(p)
    r, _ = hyp.to_fermi(q, -theta1, theta1)
    fz = np.where(r > gc.r0, gc(np.maximum(r, gc.r0)), 0.0)
    z = np.abs(np.asarray(z))
    return np.where(r > gc.r0, z - fz, np.maximum(gc.r0 - r, 0.0) + z)


def widened_mesh(H: float, H0: float, theta1: float, resolution: int = 24, gc: GeneratingCurve | None = None) -> Mesh:
    from .cover import TallRectangle

    rect = TallRectangle(-theta1, theta1, -H, H)
    m = ph_mesh(rect, resolution, gc=gc)
    g = hyp.uhp_scaling(widening(H, H0))
    return Mesh(np.column_stack([g(m.xy), m.vertices[:, 2]]), m.triangles)
