"""Poincare disk model of H^2: points, distances, isometries, Fermi coordinates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class HypPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (self.x * self.x + self.y * self.y < 1.0):
            raise ValueError("point must lie strictly inside the unit disk")

    @classmethod
    def from_polar(cls, rho: float, theta: float) -> "HypPoint":
        r = math.tanh(rho / 2.0)
        return cls(r * math.cos(theta), r * math.sin(theta))

    def to_polar(self) -> tuple[float, float]:
        """Geodesic polar coordinates (distance from the origin, angle in [0, 2pi))."""
        r = math.hypot(self.x, self.y)
        return 2.0 * math.atanh(r), math.atan2(self.y, self.x) % (2 * math.pi)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


def disk_distance(p, q) -> np.ndarray:
    """Hyperbolic distance between arrays of disk points (..., 2) or complex arrays."""
    a = _as_complex(p)
    b = _as_complex(q)
    num = np.abs(a - b)
    den = np.abs(1.0 - np.conj(a) * b)
    return 2.0 * np.arctanh(np.minimum(num / den, 1.0))


def _as_complex(p) -> np.ndarray:
    p = np.asarray(p)
    if np.iscomplexobj(p):
        return p
    return p[..., 0] + 1j * p[..., 1]


def polar_to_disk(rho, theta) -> np.ndarray:
    r = np.tanh(np.asarray(rho) / 2.0)
    return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)


def disk_to_polar(p) -> tuple[np.ndarray, np.ndarray]:
    w = _as_complex(p)
    return 2.0 * np.arctanh(np.abs(w)), np.mod(np.angle(w), 2 * np.pi)


# --------------------------------------------------------------------- isometries


def _normalize(m: np.ndarray) -> np.ndarray:
    return m / np.sqrt(np.linalg.det(m))


@dataclass(frozen=True)
class HypIsometry:
    """z -> M . (conj z if reflect else z) with M a Mobius matrix preserving the disk."""

    kind: str  # rotation | translation | reflection | composite
    matrix: np.ndarray
    reflect: bool = False

    def __call__(self, p):
        w = _as_complex(p)
        if self.reflect:
            w = np.conj(w)
        (a, b), (c, d) = self.matrix
        out = (a * w + b) / (c * w + d)
        if np.iscomplexobj(np.asarray(p)):
            return out
        return np.stack([out.real, out.imag], axis=-1)

    def compose(self, other: "HypIsometry") -> "HypIsometry":
        """self after other."""
        m2 = np.conj(other.matrix) if self.reflect else other.matrix
        return HypIsometry("composite", _normalize(self.matrix @ m2), self.reflect != other.reflect)

    def inverse(self) -> "HypIsometry":
        inv = np.linalg.inv(self.matrix)
        if self.reflect:
            # z = M conj(w)  =>  w = conj(M^{-1} z) = conj(M^{-1}) conj(z)
            return HypIsometry(self.kind, _normalize(np.conj(inv)), True)
        return HypIsometry(self.kind, _normalize(inv), False)


def rotation(phi: float) -> HypIsometry:
    e = np.exp(0.5j * phi)
    return HypIsometry("rotation", np.array([[e, 0], [0, 1 / e]]))


def reflection(phi: float = 0.0) -> HypIsometry:
    """Reflection in the diameter at angle phi."""
    e = np.exp(1j * phi)
    return HypIsometry("reflection", _normalize(np.array([[e, 0], [0, 1 / e]], dtype=complex)), True)


def uhp_chart(theta_a: float, theta_b: float) -> np.ndarray:
    """Mobius matrix disk -> upper half plane sending theta_a -> 0, theta_b -> inf.

    The ideal arc running counter-clockwise from theta_a to theta_b goes to
    the positive real axis.
    """
    if abs(math.sin(0.5 * (theta_b - theta_a))) < 1e-12:
        raise ValueError("a geodesic needs two distinct ideal endpoints")
    k = np.exp(0.5j * (theta_b - theta_a))
    m = np.array([[-k, k * np.exp(1j * theta_a)], [1.0, -np.exp(1j * theta_b)]], dtype=complex)
    return _normalize(m)


def translation(theta_a: float, theta_b: float, length: float) -> HypIsometry:
    """Translation by `length` along the geodesic from ideal point theta_a toward theta_b."""
    z = uhp_chart(theta_a, theta_b)
    e = math.exp(0.5 * length)
    m = np.linalg.inv(z) @ np.array([[e, 0], [0, 1 / e]]) @ z
    return HypIsometry("translation", _normalize(m))


def uhp_scaling(factor: float) -> HypIsometry:
    """x -> factor * x in the half-plane chart with theta=0 at 0 and theta=pi at infinity."""
    return translation(0.0, math.pi, math.log(factor))


# ------------------------------------------------------------------- Fermi coords


def to_fermi(p, theta_a: float, theta_b: float) -> tuple[np.ndarray, np.ndarray]:
    """Fermi coordinates (r, s) about the geodesic with ideal ends theta_a, theta_b.

    r is the signed distance to the geodesic, positive toward the ideal arc
    (theta_a, theta_b) traversed counter-clockwise; s is the arclength
    parameter of the foot point, zero at the foot of the origin's image under
    the chart.  The metric reads dr^2 + cosh(r)^2 ds^2.
    """
    (a, b), (c, d) = uhp_chart(theta_a, theta_b)
    w = _as_complex(p)
    Z = (a * w + b) / (c * w + d)
    r = np.arcsinh(Z.real / Z.imag)
    s = np.log(np.abs(Z))
    return r, s


def from_fermi(r, s, theta_a: float, theta_b: float) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    Z = np.exp(s) * (np.tanh(r) + 1j / np.cosh(r))
    m = np.linalg.inv(uhp_chart(theta_a, theta_b))
    (a, b), (c, d) = m
    w = (a * Z + b) / (c * Z + d)
    return np.stack([w.real, w.imag], axis=-1)


def distance_origin_to_geodesic(theta_a: float, theta_b: float) -> float:
    """Signed Fermi r of the origin (negative when it lies across from the arc)."""
    r, _ = to_fermi(np.array([0.0, 0.0]), theta_a, theta_b)
    return float(r)
