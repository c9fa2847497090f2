"""Rotational minimal catenoids C_d in H^2 x R.

C_d is obtained by rotating the profile z = +-lambda_d(rho), rho >= arsinh(d),
about the vertical axis through the origin, with

    lambda_d(rho) = int_{arsinh d}^{rho} d / sqrt(sinh(x)^2 - d^2) dx.

With a = sqrt(1 + d^2), the substitutions u = cosh x and u = a cosh s remove
the inverse square root at the neck:

    lambda_d(rho)          = int_0^S d / sqrt(a^2 cosh^2 s - 1) ds
    slice_area(d, rho)/4pi = int_0^S sqrt(a^2 cosh^2 s - 1) ds

where S = arcosh(cosh(rho) / a).  Both integrands are smooth on [0, S].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .mesh import Mesh
from .quadrature import integrate, integrate_to_infinity

FOUR_PI = 4.0 * math.pi


class DomainError(ValueError):
    pass


class OutOfRange(ValueError):
    pass


class NoSignChange(RuntimeError):
    pass


class MultipleRoots(RuntimeError):
    pass


class ResolutionTooLow(ValueError):
    pass


@dataclass(frozen=True)
class CatenoidParams:
    d: float

    def __post_init__(self):
        if not (self.d > 0 and math.isfinite(self.d)):
            raise DomainError("d must be positive")

    @property
    def neck_radius(self) -> float:
        return math.asinh(self.d)

    @property
    def a(self) -> float:
        return math.hypot(1.0, self.d)


def _s_of_rho(d: float, rho: float) -> float:
    neck = math.asinh(d)
    if rho < neck:
        raise DomainError(f"rho={rho} below the neck radius arsinh(d)={neck}")
    a = math.hypot(1.0, d)
    # cosh(rho)/a >= 1 up to rounding at the neck
    return math.acosh(max(1.0, math.cosh(rho) / a))


def _profile_integrand(d: float):
    a2 = 1.0 + d * d

    def f(s):
        c = math.cosh(s)
        # a^2 cosh^2 s - 1 = d^2 + a^2 sinh^2 s, free of cancellation
        return d / math.sqrt(d * d + a2 * math.sinh(s) ** 2) if c < 1e150 else 0.0

    return f


def _area_integrand(d: float):
    a2 = 1.0 + d * d

    def f(s):
        return math.sqrt(d * d + a2 * math.sinh(s) ** 2)

    return f


def lambda_(d: float, rho: float, tol: float = 1e-12) -> float:
    """Profile height lambda_d(rho)."""
    CatenoidParams(d)
    S = _s_of_rho(d, rho)
    if S == 0.0:
        return 0.0
    # the integrand varies on the scale d/a near s = 0
    scale = d / math.hypot(1.0, d)
    return integrate(_profile_integrand(d), 0.0, S, tol, points=[scale, 4 * scale])


def profile_table(d: float, rho_max: float, n: int = 200, tol: float = 1e-12) -> list[tuple[float, float]]:
    """Samples (rho, lambda) on a grid graded toward the neck."""
    neck = math.asinh(d)
    if rho_max <= neck:
        raise DomainError("rho_max must exceed the neck radius")
    u = np.linspace(0.0, 1.0, n + 1)[1:]
    rhos = neck + (rho_max - neck) * u**2
    return [(float(r), lambda_(d, float(r), tol)) for r in rhos]


def height_h(d: float, tol: float = 1e-12) -> float:
    """h(d) = lim lambda_d(rho) as rho -> inf."""
    CatenoidParams(d)
    a = math.hypot(1.0, d)
    f = _profile_integrand(d)
    scale = d / a
    # for a cosh s >= sqrt 2 the integrand is at most sqrt(2) d / (a cosh s) <= 2 sqrt(2) (d/a) e^{-s}
    s0 = math.acosh(max(1.0, math.sqrt(2.0) / a))

    def tail(x):
        if x < s0:
            return math.inf
        return 2.0 * math.sqrt(2.0) * scale * math.exp(-x)

    return integrate_to_infinity(f, 0.0, tail, tol, points=[scale, 4 * scale])


def d_for_height(target: float, tol: float = 1e-10, d_max: float = 1e8) -> float:
    """Inverse of height_h by bisection in log d."""
    if not (0.0 < target < math.pi / 2):
        raise OutOfRange("target height must lie in (0, pi/2)")
    if height_h(d_max) < target:
        raise OutOfRange(f"target needs d > {d_max:g}")
    lo = -30.0
    hi = math.log(d_max)
    g = lambda x: height_h(math.exp(x)) - target
    x = optimize.brentq(g, lo, hi, xtol=tol, rtol=1e-15, maxiter=500)
    return math.exp(x)


# ------------------------------------------------------------------------ areas


@dataclass(frozen=True)
class AreaComparison:
    d: float
    rho: float
    slice_area: float
    disks_area: float
    margin: float
    I1: float
    I2: float

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("d", "rho", "slice_area", "disks_area", "margin", "I1", "I2")}


def disks_area(rho: float) -> float:
    """Total area of two geodesic disks of radius rho."""
    if rho < 0:
        raise DomainError("rho must be nonnegative")
    return FOUR_PI * (math.cosh(rho) - 1.0)


def slice_area(d: float, rho: float, tol: float = 1e-12) -> float:
    return area_margin(d, rho, tol).slice_area


def _margin_reduced(d: float, S: float, tol: float) -> float:
    """(slice_area - disks_area)/4pi without cancellation.

    Uses sqrt(A^2 - 1) = A - 1/(A + sqrt(A^2 - 1)) with A = a cosh s, so the
    difference becomes 1 - a e^{-S} - int_0^S ds / (A + sqrt(A^2 - 1)).
    """
    a = math.hypot(1.0, d)
    a2 = a * a

    def g(s):
        A = a * math.cosh(s)
        return 1.0 / (A + math.sqrt(d * d + a2 * math.sinh(s) ** 2))

    return 1.0 - a * math.exp(-S) - integrate(g, 0.0, S, tol)


def area_margin(d: float, rho: float, tol: float = 1e-12) -> AreaComparison:
    """Compare the catenoid slice inside the cylinder of radius rho with two flat disks.

    The audit integrals split the slice area at x = arsinh(d + 1).
    """
    CatenoidParams(d)
    S = _s_of_rho(d, rho)
    if S == 0.0:
        raise DomainError("rho must exceed the neck radius")
    a = math.hypot(1.0, d)
    f = _area_integrand(d)
    s1 = min(S, math.acosh(math.hypot(1.0, d + 1.0) / a))
    I1 = integrate(f, 0.0, s1, tol * max(1.0, a))
    I2 = integrate(f, s1, S, tol * max(1.0, a * math.cosh(S))) if S > s1 else 0.0
    disks = disks_area(rho)
    margin = FOUR_PI * _margin_reduced(d, S, tol)
    return AreaComparison(d, rho, FOUR_PI * (I1 + I2), disks, margin, I1, I2)


def margin(d: float, rho: float, tol: float = 1e-12) -> float:
    CatenoidParams(d)
    S = _s_of_rho(d, rho)
    return FOUR_PI * _margin_reduced(d, S, tol)


def rho_hat(d: float) -> float:
    return 1.5 * math.log(d)


def rho_star(d: float, rho_max: float | None = None, tol: float = 1e-8) -> float:
    """Radius where the slice stops beating the two disks in area."""
    CatenoidParams(d)
    neck = math.asinh(d)
    if rho_max is None:
        rho_max = 3.0 * neck + 5.0
    if rho_max <= neck:
        raise NoSignChange("search interval is empty")
    g = lambda r: margin(d, r)
    if g(rho_max) <= 0:
        raise NoSignChange(f"margin stays negative up to rho_max={rho_max:g}")
    lo = neck + 1e-9 * max(1.0, neck)
    if g(lo) >= 0:
        raise NoSignChange("margin is not negative at the neck")
    return float(optimize.brentq(g, lo, rho_max, xtol=tol, rtol=1e-15))


def h_hat(d: float, tol: float = 1e-12) -> float:
    """lambda_d at rho_hat(d) = 1.5 ln d."""
    if d <= 1:
        raise DomainError("h_hat needs d > 1")
    r = rho_hat(d)
    if r < math.asinh(d):
        raise DomainError(f"1.5 ln d lies inside the neck for d={d:g}")
    return lambda_(d, r, tol)


# ------------------------------------------------------------- intersection


def iota_grid(d1: float, d2: float, n: int = 400, span: float = 60.0) -> np.ndarray:
    neck = math.asinh(d2)
    return neck + np.geomspace(1e-6, span, n)


def iota(d1: float, d2: float, tol: float = 1e-10, n_grid: int = 400, span: float = 60.0) -> float:
    """Unique radius beyond arsinh(d2) where the profiles of C_d1 and C_d2 cross."""
    if not (0 < d1 < d2):
        raise DomainError("need 0 < d1 < d2")
    qtol = 1e-15
    g = lambda r: lambda_(d1, r, qtol) - lambda_(d2, r, qtol)
    grid = iota_grid(d1, d2, n_grid, span)
    vals = np.array([g(float(r)) for r in grid])
    signs = np.sign(vals)
    changes = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    if changes.size == 0:
        raise NoSignChange("profiles do not cross on the search grid")
    if changes.size > 1:
        raise MultipleRoots(f"{changes.size} sign changes at rho ~ {grid[changes].tolist()}")
    k = int(changes[0])
    return float(optimize.brentq(g, grid[k], grid[k + 1], xtol=tol, rtol=1e-15))


def iota_sign_changes(d1: float, d2: float, n_grid: int = 400, span: float = 60.0) -> int:
    g = lambda r: lambda_(d1, r, 1e-15) - lambda_(d2, r, 1e-15)
    vals = np.array([g(float(r)) for r in iota_grid(d1, d2, n_grid, span)])
    s = np.sign(vals)
    return int(np.count_nonzero(s[:-1] * s[1:] < 0))


# --------------------------------------------------------------------- mesh


def catenoid_mesh(d: float, rho_max: float, n_rho: int, n_theta: int) -> Mesh:
    """Both sheets of C_d up to radius rho_max, in disk-model coordinates."""
    if n_rho < 8 or n_theta < 8:
        raise ResolutionTooLow("n_rho and n_theta must be at least 8")
    neck = math.asinh(d)
    if rho_max <= neck:
        raise DomainError("rho_max must exceed the neck radius")
    # uniform in s = arcosh(cosh rho / a), which resolves the neck
    S = _s_of_rho(d, rho_max)
    a = math.hypot(1.0, d)
    s = np.linspace(0.0, S, n_rho + 1)
    rho = np.arccosh(a * np.cosh(s))
    rho[0] = neck
    f = _profile_integrand(d)
    lam = np.concatenate([[0.0], np.cumsum([integrate(f, s[i], s[i + 1], 1e-13) for i in range(n_rho)])])
    radius = np.tanh(rho / 2.0)
    ang = 2 * math.pi * np.arange(n_theta) / n_theta
    # rings from the bottom boundary through the neck to the top boundary
    ring_r = np.concatenate([radius[::-1], radius[1:]])
    ring_z = np.concatenate([-lam[::-1], lam[1:]])
    nr = ring_r.size
    x = np.outer(ring_r, np.cos(ang))
    y = np.outer(ring_r, np.sin(ang))
    z = np.repeat(ring_z[:, None], n_theta, axis=1)
    verts = np.column_stack([x.ravel(), y.ravel(), z.ravel()])
    tris = []
    for i in range(nr - 1):
        for j in range(n_theta):
            a0 = i * n_theta + j
            a1 = i * n_theta + (j + 1) % n_theta
            b0 = a0 + n_theta
            b1 = a1 + n_theta
            tris.append((a0, a1, b1))
            tris.append((a0, b1, b0))
    return Mesh(verts, np.array(tris, dtype=int))
