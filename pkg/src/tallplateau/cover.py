"""Tall-rectangle covers of the complement of a tall curve and its mean convex hull."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import hyperbolic as hyp
from .curves import (
    TWO_PI,
    CurveFamily,
    SlabView,
    canonical_angle,
    height,
    kind_for,
    slabs,
    vertical_gaps,
)


class NotTall(ValueError):
    pass


class NearCritical(RuntimeError):
    pass


class NotTwoColorable(RuntimeError):
    pass


class MissingBarrier(ValueError):
    pass


@dataclass(frozen=True)
class TallRectangle:
    """Open rectangle (theta_lo, theta_hi) x (t_lo, t_hi); t bounds may be infinite."""

    theta_lo: float
    theta_hi: float
    t_lo: float
    t_hi: float

    def __post_init__(self):
        w = self.theta_hi - self.theta_lo
        if not (0.0 < w < TWO_PI):
            raise ValueError(f"angular width {w} outside (0, 2pi)")
        if not (self.t_hi - self.t_lo > math.pi):
            raise ValueError(f"rectangle height {self.t_hi - self.t_lo} is not above pi")

    @property
    def height(self) -> float:
        return self.t_hi - self.t_lo

    @property
    def kind(self) -> str:
        lo_inf, hi_inf = math.isinf(self.t_lo), math.isinf(self.t_hi)
        if lo_inf and hi_inf:
            return "strip"
        if hi_inf:
            return "upper"
        if lo_inf:
            return "lower"
        return "finite"

    def center(self) -> tuple[float, float]:
        th = canonical_angle(0.5 * (self.theta_lo + self.theta_hi))
        if self.kind == "strip":
            return th, 0.0
        if self.kind == "upper":
            return th, self.t_lo + 1.0
        if self.kind == "lower":
            return th, self.t_hi - 1.0
        return th, 0.5 * (self.t_lo + self.t_hi)

    def contains(self, theta, t) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        u = np.mod(theta - self.theta_lo, TWO_PI)
        return (u > 0) & (u < self.theta_hi - self.theta_lo) & (np.asarray(t) > self.t_lo) & (np.asarray(t) < self.t_hi)

    def to_dict(self) -> dict:
        f = lambda x: x if math.isfinite(x) else ("inf" if x > 0 else "-inf")
        return {"theta_lo": self.theta_lo, "theta_hi": self.theta_hi, "t_lo": f(self.t_lo), "t_hi": f(self.t_hi)}


# ----------------------------------------------------------------- two-colouring


@dataclass(frozen=True)
class OmegaSides:
    """Faces of the complement labelled by the parity of crossings above a point.

    A point strictly below an odd number of curve crossings is on the '+'
    side.  A single rectangle then has '+' inside and '-' outside, and an
    essential circle has '+' below it.  Faces are identified by their
    signature: the parity with respect to each component separately.
    """

    family: CurveFamily
    faces: tuple[tuple[int, ...], ...]

    def signature(self, theta, t) -> np.ndarray:
        return crossing_parities(self.family, theta, t)

    def label(self, theta, t) -> np.ndarray:
        sig = self.signature(theta, t)
        return np.where(sig.sum(axis=0) % 2 == 1, "+", "-")

    @property
    def face_count(self) -> int:
        return len(self.faces)

    def face_labels(self) -> dict:
        return {f: ("+" if sum(f) % 2 else "-") for f in self.faces}


def crossing_parities(family: CurveFamily, theta, t) -> np.ndarray:
    """Per component, parity of crossings of the upward vertical ray from (theta, t)."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float)) % TWO_PI
    t = np.atleast_1d(np.asarray(t, dtype=float))
    tab = family.segments
    d = tab.th1 - tab.th0
    out = np.zeros((len(family.components), theta.size), dtype=int)
    for i in range(len(tab)):
        if d[i] == 0:
            continue
        span = abs(d[i])
        if d[i] > 0:
            u = np.mod(theta - tab.th0[i], TWO_PI)
            hit = u < span
            frac = u / span
        else:
            u = np.mod(tab.th0[i] - theta, TWO_PI)
            hit = (u > 0) & (u <= span)
            frac = u / span
        tc = tab.t0[i] + (tab.t1[i] - tab.t0[i]) * np.clip(frac, 0, 1)
        out[tab.comp[i]] += hit & (tc > t)
    return out % 2


def omega_sides(family: CurveFamily) -> OmegaSides:
    """Enumerate the faces of the complement and check the two-colouring."""
    k = len(family.components)
    # sample a fine grid of interior points of every gap on the slab midlines
    sigs = set()
    for sl in slabs(family):
        mid = 0.5 * (sl.lo + sl.hi)
        tv = sl.at(mid)[:, 0] if sl.seg.size else np.array([])
        cuts = np.concatenate([[tv[0] - 1.0] if tv.size else [0.0], 0.5 * (tv[:-1] + tv[1:]) if tv.size > 1 else [], [tv[-1] + 1.0] if tv.size else []])
        sig = crossing_parities(family, np.full(cuts.size, mid), cuts)
        for col in sig.T:
            sigs.add(tuple(int(x) for x in col))
    faces = tuple(sorted(sigs))
    if len(faces) != k + 1:
        raise NotTwoColorable(f"found {len(faces)} faces for {k} disjoint curves")
    # adjacent faces differ in exactly one component; that flips the parity label
    for a in faces:
        for b in faces:
            if sum(x != y for x, y in zip(a, b)) == 1 and sum(a) % 2 == sum(b) % 2:
                raise NotTwoColorable("adjacent faces share a label")
    return OmegaSides(family, faces)


# ----------------------------------------------------------------- slab cover


@dataclass
class TallCover:
    plus: list[TallRectangle]
    minus: list[TallRectangle]
    coverage_margin: float
    clearance: float = 0.0

    def all(self) -> list[tuple[TallRectangle, str]]:
        return [(r, "+") for r in self.plus] + [(r, "-") for r in self.minus]

    def covers(self, theta, t, bin_width: float = 0.01) -> np.ndarray:
        """Whether each point lies in some rectangle.

        Narrow rectangles are indexed by angular bins so that large covers
        (tens of thousands of rectangles) stay cheap to query.
        """
        theta = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        t = np.broadcast_to(np.asarray(t, dtype=float), theta.shape)
        rects = [r for r, _ in self.all()]
        hit = np.zeros(theta.shape, dtype=bool)
        if not rects:
            return hit
        lo = np.mod(np.array([r.theta_lo for r in rects]), TWO_PI)
        w = np.array([r.theta_hi - r.theta_lo for r in rects])
        tl = np.array([r.t_lo for r in rects])
        th = np.array([r.t_hi for r in rects])

        def test(pts, idx):
            u = np.mod(theta[pts, None] - lo[None, idx], TWO_PI)
            inside = (u > 0) & (u < w[idx]) & (t[pts, None] > tl[idx]) & (t[pts, None] < th[idx])
            hit[pts] |= inside.any(axis=1)

        wide = np.nonzero(w > 8 * bin_width)[0]
        for k in range(0, wide.size, 512):
            test(np.arange(theta.size), wide[k : k + 512])
        narrow = np.nonzero(w <= 8 * bin_width)[0]
        if narrow.size:
            nb = int(math.ceil(TWO_PI / bin_width))
            bin_width = TWO_PI / nb  # bins tile the circle exactly
            first = np.floor(lo[narrow] / bin_width).astype(int)
            last = np.floor((lo[narrow] + w[narrow]) / bin_width).astype(int)
            members: dict[int, list[int]] = {}
            for j, a, b in zip(narrow, first, last):
                for q in range(a, b + 1):
                    members.setdefault(q % nb, []).append(int(j))
            pbin = np.minimum(np.floor(theta / bin_width).astype(int), nb - 1)
            for q in np.unique(pbin[~hit]):
                pts = np.nonzero((pbin == q) & ~hit)[0]
                if q in members:
                    test(pts, np.array(members[q]))
        return hit

    def to_dict(self) -> dict:
        return {
            "coverage_margin": self.coverage_margin,
            "clearance": self.clearance,
            "plus": [r.to_dict() for r in self.plus],
            "minus": [r.to_dict() for r in self.minus],
        }


def _piece_bounds(sl: SlabView, edges: np.ndarray):
    """Inscribed gap bounds over the pieces [edges[k], edges[k+1]] of a slab.

    Returns bottoms, tops with shape (pieces, gaps) and the vertical loss
    of each gap boundary on each piece.
    """
    w = (edges - sl.lo) / (sl.hi - sl.lo)
    tv = sl.t_lo[None, :] + (sl.t_hi - sl.t_lo)[None, :] * w[:, None]  # (edges, segs)
    t_a, t_b = tv[:-1], tv[1:]
    m = len(edges) - 1
    lo_inf = np.full((m, 1), -math.inf)
    hi_inf = np.full((m, 1), math.inf)
    bottoms = np.concatenate([lo_inf, np.maximum(t_a, t_b)], axis=1)
    tops = np.concatenate([np.minimum(t_a, t_b), hi_inf], axis=1)
    loss = np.abs(t_b - t_a)
    zero = np.zeros((m, 1))
    loss_lo = np.concatenate([zero, loss], axis=1)
    loss_hi = np.concatenate([loss, zero], axis=1)
    return bottoms, tops, np.maximum(loss_lo, loss_hi)


def _gap_rects(sl: SlabView, lo: float, hi: float, eps: float, depth: int, max_depth: int, out: list):
    """Inscribed rectangles of every vertical gap over (lo, hi), bisecting as needed.

    A gap's inscribed rectangle drops the points between it and the slanted
    boundary, all within `loss` vertically of the curve, so pieces are split
    until that loss is at most eps/2 and every inscribed height exceeds pi.
    The loss criterion fixes a uniform bisection depth up front; pieces that
    still fail on height are bisected adaptively.
    """
    slope = float(np.max(np.abs(sl.t_hi - sl.t_lo))) / (sl.hi - sl.lo) if sl.seg.size else 0.0
    need = slope * (hi - lo) / (0.5 * eps)
    k = 0 if need <= 1 else int(math.ceil(math.log2(need)))
    if depth + k > max_depth:
        raise NearCritical(f"slab ({lo:.6g}, {hi:.6g}) needs depth {depth + k} > {max_depth}")
    edges = np.linspace(lo, hi, 2**k + 1)
    bottoms, tops, loss = _piece_bounds(sl, edges)
    ok = (tops - bottoms > math.pi) & (loss <= 0.5 * eps)
    for j in range(len(edges) - 1):
        a, b = float(edges[j]), float(edges[j + 1])
        if np.all(ok[j]):
            out.extend(TallRectangle(a, b, float(bt), float(tp)) for bt, tp in zip(bottoms[j], tops[j]))
            continue
        if depth + k >= max_depth:
            raise NearCritical(f"slab ({a:.6g}, {b:.6g}) still unresolved at depth {depth + k}")
        mid = 0.5 * (a + b)
        _gap_rects(sl, a, mid, eps, depth + k + 1, max_depth, out)
        _gap_rects(sl, mid, b, eps, depth + k + 1, max_depth, out)


def _straddle_rects(family: CurveFamily, theta: float, eps: float) -> list[TallRectangle]:
    """Rectangles centred on an event line covering its gaps away from the curve."""
    tab = family.segments
    out = []
    for lo, hi in vertical_gaps(family, theta).intervals:
        g = hi - lo
        eta = min(0.25 * eps, 0.25 * (g - math.pi)) if math.isfinite(g) else 0.25 * eps
        b_lo = lo + eta
        b_hi = hi - eta
        # angular clearance of the curve inside the band [b_lo, b_hi]
        delta = 0.5 * math.pi
        for i in range(len(tab)):
            t0, t1 = tab.t0[i], tab.t1[i]
            th0, th1 = tab.th0[i], tab.th1[i]
            if max(t0, t1) < b_lo or min(t0, t1) > b_hi:
                continue
            if t0 == t1:
                u0, u1 = 0.0, 1.0
            else:
                ua, ub = (b_lo - t0) / (t1 - t0), (b_hi - t0) / (t1 - t0)
                u0, u1 = max(0.0, min(ua, ub)), min(1.0, max(ua, ub))
            pa, pb = th0 + u0 * (th1 - th0), th0 + u1 * (th1 - th0)
            delta = min(delta, _angular_distance_to_piece(theta, pa, pb))
        if delta <= 0:
            continue
        out.append(TallRectangle(theta - 0.5 * delta, theta + 0.5 * delta, float(b_lo), float(b_hi)))
    return out


def _angular_distance_to_piece(theta: float, a: float, b: float) -> float:
    """Angular distance from theta to the arc of angles swept from a to b (|b - a| < pi)."""
    lo, hi = min(a, b), max(a, b)
    u = (theta - lo) % TWO_PI
    if u <= hi - lo:
        return 0.0
    return min(u - (hi - lo), TWO_PI - u)


def tall_cover(family: CurveFamily, eps: float = 1e-3, tol: float = 1e-9, max_depth: int = 40, clearance: float = 0.0) -> TallCover:
    """Finitely many open tall rectangles covering both sides away from the curve.

    Every point of the complement at distance more than eps from the curve
    lies in some rectangle.  Rectangles may overlap.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    h = height(family).h
    if kind_for(h, tol) != "Tall":
        raise NotTall(f"height {h:.12g} is not above pi")
    rects: list[TallRectangle] = []
    for sl in slabs(family):
        if sl.hi - sl.lo >= TWO_PI:
            half = 0.5 * (sl.lo + sl.hi)
            _gap_rects(sl, sl.lo, half, eps, 0, max_depth, rects)
            _gap_rects(sl, half, sl.hi, eps, 0, max_depth, rects)
        else:
            _gap_rects(sl, sl.lo, sl.hi, eps, 0, max_depth, rects)
    for th in family.event_angles():
        rects.extend(_straddle_rects(family, float(th), eps))
    if clearance > 0:
        rects = [_shrink(r, clearance) for r in rects]
        rects = [r for r in rects if r is not None]
    sides = omega_sides(family)
    plus, minus = [], []
    if rects:
        centers = np.array([r.center() for r in rects])
        labels = sides.label(centers[:, 0], centers[:, 1])
        for r, lab in zip(rects, labels):
            (plus if lab == "+" else minus).append(r)
    return TallCover(plus, minus, eps, clearance)


def _shrink(r: TallRectangle, c: float) -> TallRectangle | None:
    lo, hi = r.theta_lo + c, r.theta_hi - c
    tl, th = r.t_lo + c, r.t_hi - c
    if hi <= lo or th - tl <= math.pi:
        return None
    return TallRectangle(lo, hi, tl, th)


# ------------------------------------------------------------------- barriers


@lru_cache(maxsize=64)
def _profile_for_height(h: float):
    from .profile import generating_curve

    return generating_curve(h)


@dataclass
class Barrier:
    """Minimal surface carving the region between itself and a tall rectangle.

    Work in Fermi coordinates (r, s) about the rectangle's axis geodesic with
    r > 0 toward its ideal arc.  The surface is invariant in s, so distances
    to it are measured in the (r, z) half-plane with the flat metric.
    """

    rect: TallRectangle
    curve: np.ndarray  # boundary polyline (r, w) of the carved region in its reduced coordinate
    neck: float = 0.0
    mesh_path: str | None = None

    def reduced(self, p, z) -> tuple[np.ndarray, np.ndarray]:
        r, _ = hyp.to_fermi(p, self.rect.theta_lo, self.rect.theta_hi)
        z = np.asarray(z, dtype=float)
        k = self.rect.kind
        if k == "finite":
            w = np.abs(z - 0.5 * (self.rect.t_lo + self.rect.t_hi))
        elif k == "upper":
            w = z - self.rect.t_lo
        elif k == "lower":
            w = self.rect.t_hi - z
        else:
            w = np.zeros_like(z)
        return np.asarray(r), w

    def carved(self, r, w) -> np.ndarray:
        k = self.rect.kind
        if k == "strip":
            return r > 0
        if k == "finite":
            f = np.interp(r, self.curve[:, 0], self.curve[:, 1], left=0.0, right=self.curve[-1, 1])
            return (r > self.neck) & (w < f)
        # upper / lower: w > ln coth(r/2)
        with np.errstate(divide="ignore", over="ignore"):
            g = np.log(1.0 / np.tanh(np.maximum(r, 1e-300) / 2.0))
        return (r > 0) & (w > g)

    def penetration(self, p, z) -> np.ndarray:
        """Distance from each point to the outside of the carved region (0 outside)."""
        r, w = self.reduced(p, z)
        inside = self.carved(r, w)
        out = np.zeros(r.shape)
        if not np.any(inside):
            return out
        if self.rect.kind == "strip":
            out[inside] = r[inside]
            return out
        out[inside] = _polyline_distance(np.column_stack([r[inside], w[inside]]), self.curve)
        if self.rect.kind != "finite":
            out[inside] = np.minimum(out[inside], r[inside])
        return out


def _polyline_distance(pts: np.ndarray, poly: np.ndarray, chunk: int = 256) -> np.ndarray:
    a = poly[:-1]
    d = poly[1:] - a
    dd = np.maximum(np.sum(d * d, axis=1), 1e-300)
    out = np.empty(len(pts))
    for k in range(0, len(pts), chunk):
        p = pts[k : k + chunk, None, :]
        u = np.clip(np.sum((p - a) * d, axis=2) / dd, 0.0, 1.0)
        q = a + u[..., None] * d
        out[k : k + chunk] = np.sqrt(np.min(np.sum((p - q) ** 2, axis=2), axis=1))
    return out


def make_barrier(rect: TallRectangle) -> Barrier:
    k = rect.kind
    if k == "strip":
        return Barrier(rect, np.zeros((0, 2)))
    if k == "finite":
        gc = _profile_for_height(round(rect.height, 12))
        q = np.concatenate([np.linspace(0.0, 1.0, 400), np.linspace(1.0, gc.q_max, 2000)[1:]])
        curve = np.column_stack([gc.r_of_q(q), gc.f_of_q(q)])
        return Barrier(rect, curve, gc.r0)
    r = np.geomspace(1e-9, 50.0, 3000)
    return Barrier(rect, np.column_stack([r, np.log(1.0 / np.tanh(r / 2.0))]))


# ------------------------------------------------------------ mean convex hull


@dataclass
class MchDescriptor:
    slab: tuple[float, float]
    carved: list[tuple[TallRectangle, str]]
    barriers: list[Barrier] | None = None
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "slab": list(self.slab),
            "carved": [dict(r.to_dict(), side=s) for r, s in self.carved],
        }
        if self.barriers is not None:
            d["barriers"] = [
                {"kind": b.rect.kind, "neck": b.neck, "mesh": b.mesh_path} for b in self.barriers
            ]
        return d


def mch(family: CurveFamily, cover: TallCover, with_barriers: bool = True) -> MchDescriptor:
    desc = MchDescriptor(family.t_range(), cover.all())
    if with_barriers:
        attach_barriers(desc)
    return desc


def attach_barriers(desc: MchDescriptor) -> MchDescriptor:
    desc.barriers = [make_barrier(r) for r, _ in desc.carved]
    return desc


def mch_contains(desc: MchDescriptor, point, z, tol: float = 1e-2) -> np.ndarray:
    """Whether points (disk coordinates, height) lie in the mean convex hull up to tol.

    Accepts a single point or arrays of shape (n, 2) and (n,).
    """
    if desc.barriers is None or len(desc.barriers) != len(desc.carved):
        raise MissingBarrier("every carved rectangle needs a barrier surface")
    p = np.atleast_2d(np.asarray(point, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    c1, c2 = desc.slab
    ok = (z >= c1 - tol) & (z <= c2 + tol)
    for b in desc.barriers:
        ok &= b.penetration(p, z) <= tol
    return ok
