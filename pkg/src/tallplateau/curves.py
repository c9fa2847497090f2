"""Finite polygonal curves on the asymptotic cylinder S^1 x R.

A curve family is a finite set of disjoint closed polylines in the flat
cylinder with coordinates (theta, t).  Consecutive vertices are joined by the
shorter of the two straight segments between them, so every segment spans an
angular displacement in (-pi, pi).

The height of a family is the infimum, over all vertical lines
L_theta = {theta} x R, of the lengths of the bounded components of
L_theta minus the curve.  Unbounded components count as length infinity.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi
INF = math.inf


class CurveError(ValueError):
    """Base class for invalid curve input."""


class DegenerateSegment(CurveError):
    pass


class SelfIntersection(CurveError):
    def __init__(self, component: int, pair: tuple[int, int]):
        super().__init__(f"component {component}: segments {pair[0]} and {pair[1]} intersect")
        self.component = component
        self.pair = pair


class ComponentsIntersect(CurveError):
    def __init__(self, i: int, j: int):
        super().__init__(f"components {i} and {j} intersect")
        self.i = i
        self.j = j


class NotShort(ValueError):
    pass


class BadParameters(ValueError):
    pass


def canonical_angle(theta: float) -> float:
    th = math.fmod(float(theta), TWO_PI)
    if th < 0.0:
        th += TWO_PI
    if th >= TWO_PI:
        th = 0.0
    return th


def wrap_delta(delta: float) -> float:
    """Representative of an angle difference in [-pi, pi]."""
    d = math.fmod(delta, TWO_PI)
    if d > math.pi:
        d -= TWO_PI
    elif d < -math.pi:
        d += TWO_PI
    return d


@dataclass(frozen=True)
class CylPoint:
    theta: float
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.t)):
            raise CurveError(f"non-finite point ({self.theta}, {self.t})")
        object.__setattr__(self, "theta", canonical_angle(self.theta))
        object.__setattr__(self, "t", float(self.t))


@dataclass(frozen=True)
class ClosedCurve:
    """Closed polyline; `winding` is derived from the vertex sequence."""

    vertices: tuple[CylPoint, ...]
    winding: int = field(init=False)

    def __post_init__(self):
        verts = tuple(v if isinstance(v, CylPoint) else CylPoint(*v) for v in self.vertices)
        if len(verts) < 3:
            raise DegenerateSegment("a closed curve needs at least 3 vertices")
        object.__setattr__(self, "vertices", verts)
        total = 0.0
        for i, v in enumerate(verts):
            w = verts[(i + 1) % len(verts)]
            if v == w:
                raise DegenerateSegment(f"repeated vertex {i}")
            d = wrap_delta(w.theta - v.theta)
            if abs(abs(d) - math.pi) < 1e-12:
                raise DegenerateSegment(f"segment {i} spans exactly pi; direction is ambiguous")
            total += d
        object.__setattr__(self, "winding", int(round(total / TWO_PI)))

    @classmethod
    def from_points(cls, pts: Iterable[Sequence[float]]) -> "ClosedCurve":
        return cls(tuple(CylPoint(float(a), float(b)) for a, b in pts))

    def __len__(self):
        return len(self.vertices)

    @cached_property
    def theta(self) -> np.ndarray:
        return np.array([v.theta for v in self.vertices])

    @cached_property
    def t(self) -> np.ndarray:
        return np.array([v.t for v in self.vertices])

    @cached_property
    def dtheta(self) -> np.ndarray:
        """Signed angular displacement of each segment i -> i+1."""
        th = self.theta
        d = np.roll(th, -1) - th
        return np.array([wrap_delta(x) for x in d])

    @cached_property
    def unwrapped(self) -> np.ndarray:
        """Vertex coordinates lifted to the universal cover, closing after `winding` turns."""
        th = np.concatenate([[self.theta[0]], self.theta[0] + np.cumsum(self.dtheta)])
        t = np.concatenate([self.t, self.t[:1]])
        return np.column_stack([th, t])

    @property
    def essential(self) -> bool:
        return self.winding != 0

    def t_range(self) -> tuple[float, float]:
        return float(self.t.min()), float(self.t.max())


@dataclass(frozen=True)
class CurveFamily:
    components: tuple[ClosedCurve, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise CurveError("a curve family needs at least one component")
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, *curves: ClosedCurve | Sequence[Sequence[float]]) -> "CurveFamily":
        return cls(tuple(c if isinstance(c, ClosedCurve) else ClosedCurve.from_points(c) for c in curves))

    @cached_property
    def segments(self) -> "SegmentTable":
        return SegmentTable.build(self)

    def t_range(self) -> tuple[float, float]:
        lo = min(c.t_range()[0] for c in self.components)
        hi = max(c.t_range()[1] for c in self.components)
        return lo, hi

    def event_angles(self) -> np.ndarray:
        return np.unique(np.concatenate([c.theta for c in self.components]))

    def transformed(self, shift_theta=0.0, shift_t=0.0, flip_theta=False, flip_t=False) -> "CurveFamily":
        """Image under a rigid motion of the cylinder."""
        comps = []
        for c in self.components:
            pts = []
            for v in c.vertices:
                th = -v.theta if flip_theta else v.theta
                t = -v.t if flip_t else v.t
                pts.append((th + shift_theta, t + shift_t))
            comps.append(ClosedCurve.from_points(pts))
        return CurveFamily(tuple(comps))


@dataclass(frozen=True)
class SegmentTable:
    """Flat arrays over all segments of a family.

    th0 is the canonical start angle; th1 = th0 + dtheta may leave [0, 2pi).
    end_theta is the canonical angle of the end vertex, kept for exact tests.
    """

    comp: np.ndarray
    index: np.ndarray
    th0: np.ndarray
    t0: np.ndarray
    th1: np.ndarray
    t1: np.ndarray
    end_theta: np.ndarray

    @classmethod
    def build(cls, fam: CurveFamily) -> "SegmentTable":
        cols = [[] for _ in range(7)]
        for k, c in enumerate(fam.components):
            n = len(c)
            for i in range(n):
                j = (i + 1) % n
                cols[0].append(k)
                cols[1].append(i)
                cols[2].append(c.theta[i])
                cols[3].append(c.t[i])
                cols[4].append(c.theta[i] + c.dtheta[i])
                cols[5].append(c.t[j])
                cols[6].append(c.theta[j])
        arrs = [np.asarray(col) for col in cols]
        arrs[0] = arrs[0].astype(int)
        arrs[1] = arrs[1].astype(int)
        return cls(*arrs)

    def __len__(self):
        return len(self.th0)

    @property
    def vertical(self) -> np.ndarray:
        return self.th0 == self.end_theta

    def interior_offset(self, theta: float) -> tuple[np.ndarray, np.ndarray]:
        """Offset u of `theta` along each segment and a mask of strict interior hits."""
        d = self.th1 - self.th0
        sgn = np.sign(d)
        u = np.mod((theta - self.th0) * sgn, TWO_PI)
        inside = (sgn != 0) & (u > 0) & (u < np.abs(d)) & (theta != self.th0) & (theta != self.end_theta)
        return u, inside

    def t_at_offset(self, u: np.ndarray) -> np.ndarray:
        span = np.abs(self.th1 - self.th0)
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.clip(u / span, 0.0, 1.0)
        return self.t0 + (self.t1 - self.t0) * frac


# -------------------------------------------------------------------- validation


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _segments_intersect(p, q, r, s) -> bool:
    """Closed planar segments pq and rs share a point."""
    d1 = _orient(*r, *s, *p)
    d2 = _orient(*r, *s, *q)
    d3 = _orient(*p, *q, *r)
    d4 = _orient(*p, *q, *s)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True

    def on(a, b, c, d):
        return d == 0 and min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    return on(r, s, p, d1) or on(r, s, q, d2) or on(p, q, r, d3) or on(p, q, s, d4)


def _lifted(tab: SegmentTable, i: int, shift: float):
    return (tab.th0[i] + shift, tab.t0[i]), (tab.th1[i] + shift, tab.t1[i])


def _pair_hits(tab: SegmentTable, i: int, j: int) -> bool:
    a, b = _lifted(tab, i, 0.0)
    for k in (-1, 0, 1):
        c, d = _lifted(tab, j, k * TWO_PI)
        if _segments_intersect(a, b, c, d):
            return True
    return False


def _candidate_pairs(tab: SegmentTable) -> list[tuple[int, int]]:
    """Segment pairs whose angular and height ranges overlap on the cylinder."""
    lo = np.minimum(tab.th0, tab.th1)
    hi = np.maximum(tab.th0, tab.th1)
    tlo = np.minimum(tab.t0, tab.t1)
    thi = np.maximum(tab.t0, tab.t1)
    n = len(tab)
    out = []
    for i in range(n):
        j = np.arange(i + 1, n)
        if j.size == 0:
            break
        ok_t = (tlo[j] <= thi[i]) & (thi[j] >= tlo[i])
        ok_th = np.zeros(j.size, dtype=bool)
        for k in (-1, 0, 1):
            ok_th |= (lo[j] + k * TWO_PI <= hi[i]) & (hi[j] + k * TWO_PI >= lo[i])
        out.extend((i, int(x)) for x in j[ok_t & ok_th])
    return out


def validate(family: CurveFamily) -> None:
    """Raise the first invariant violation found, otherwise return None."""
    tab = family.segments
    sizes = [len(c) for c in family.components]
    for c in family.components:
        if abs(c.winding) > 1:
            raise SelfIntersection(family.components.index(c), (0, 0))
    for i, j in _candidate_pairs(tab):
        ci, cj = tab.comp[i], tab.comp[j]
        if ci != cj:
            if _pair_hits(tab, i, j):
                raise ComponentsIntersect(int(ci), int(cj))
            continue
        n = sizes[ci]
        a, b = int(tab.index[i]), int(tab.index[j])
        adjacent = (b - a) % n == 1 or (a - b) % n == 1
        if not adjacent:
            if _pair_hits(tab, i, j):
                raise SelfIntersection(int(ci), (a, b))
            continue
        # adjacent segments may only share their common vertex
        first, second = (i, j) if (b - a) % n == 1 else (j, i)
        if _adjacent_overlap(tab, first, second):
            raise SelfIntersection(int(ci), (a, b))


def _adjacent_overlap(tab: SegmentTable, first: int, second: int) -> bool:
    """Adjacent segments (first ends where second starts) fold back onto each other."""
    p = np.array([tab.th0[first], tab.t0[first]])
    q = np.array([tab.th1[first], tab.t1[first]])
    s = np.array([q[0] + (tab.th1[second] - tab.th0[second]), tab.t1[second]])
    u, v = p - q, s - q
    cross = u[0] * v[1] - u[1] * v[0]
    return cross == 0 and float(u @ v) > 0


# ------------------------------------------------------------------- vertical gaps


@dataclass(frozen=True)
class GapProfile:
    theta: float
    intervals: tuple[tuple[float, float], ...]
    blocked: tuple[tuple[float, float], ...] = ()

    def bounded(self) -> list[tuple[float, float]]:
        return [iv for iv in self.intervals if math.isfinite(iv[0]) and math.isfinite(iv[1])]


def line_hits(family: CurveFamily, theta: float) -> list[tuple[float, float]]:
    """Closed pieces of L_theta meeting the curve, merged and sorted."""
    theta = canonical_angle(theta)
    tab = family.segments
    pieces = []
    vert = tab.vertical
    for i in np.nonzero(vert & (tab.th0 == theta))[0]:
        pieces.append((min(tab.t0[i], tab.t1[i]), max(tab.t0[i], tab.t1[i])))
    for c in family.components:
        for k in np.nonzero(c.theta == theta)[0]:
            pieces.append((c.t[k], c.t[k]))
    u, inside = tab.interior_offset(theta)
    for val in tab.t_at_offset(u)[inside]:
        pieces.append((val, val))
    pieces.sort()
    merged: list[list[float]] = []
    for lo, hi in pieces:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(a, b) for a, b in merged]


def vertical_gaps(family: CurveFamily, theta: float) -> GapProfile:
    blocked = line_hits(family, theta)
    edges = [-INF]
    for lo, hi in blocked:
        edges.extend([lo, hi])
    edges.append(INF)
    intervals = tuple((edges[2 * k], edges[2 * k + 1]) for k in range(len(edges) // 2))
    return GapProfile(canonical_angle(theta), intervals, tuple(blocked))


# ------------------------------------------------------------------------ height


@dataclass(frozen=True)
class HeightReport:
    h: float
    witness_theta: float | None = None
    witness_interval: tuple[float, float] | None = None
    # "limit" when the infimum is approached from one side of an event angle
    attained: str = "exact"

    def to_dict(self) -> dict:
        return {
            "h": _jsonable(self.h),
            "witness_theta": self.witness_theta,
            "witness_interval": None if self.witness_interval is None else [_jsonable(x) for x in self.witness_interval],
        }


def _jsonable(x):
    if x is None:
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(x)


@dataclass(frozen=True)
class SlabView:
    """Active non-vertical segments over an open event-free interval (lo, hi)."""

    lo: float
    hi: float
    seg: np.ndarray  # segment ids sorted bottom to top
    t_lo: np.ndarray  # their heights at lo (limit from the right)
    t_hi: np.ndarray  # their heights at hi (limit from the left)

    def at(self, theta: np.ndarray | float) -> np.ndarray:
        """Heights of the active segments at theta in [lo, hi]; shape (nseg, ...)."""
        w = (np.asarray(theta) - self.lo) / (self.hi - self.lo)
        return self.t_lo[:, None] + np.outer(self.t_hi - self.t_lo, np.atleast_1d(w))


def slabs(family: CurveFamily) -> list[SlabView]:
    """Event-free angular intervals; the last wraps through 2pi."""
    tab = family.segments
    ev = family.event_angles()
    out = []
    n = len(ev)
    for k in range(n):
        lo = ev[k]
        hi = ev[k + 1] if k + 1 < n else ev[0] + TWO_PI
        if hi <= lo:
            continue
        mid = 0.5 * (lo + hi)
        u, inside = tab.interior_offset(canonical_angle(mid))
        ids = np.nonzero(inside)[0]
        sgn = np.sign(tab.th1[ids] - tab.th0[ids])
        um = u[ids]
        u_lo = um + sgn * (lo - mid)
        u_hi = um + sgn * (hi - mid)
        sub = SegmentTable(*(getattr(tab, f)[ids] for f in ("comp", "index", "th0", "t0", "th1", "t1", "end_theta")))
        tl = sub.t_at_offset(u_lo)
        th = sub.t_at_offset(u_hi)
        tm = sub.t_at_offset(um)
        order = np.argsort(tm, kind="stable")
        out.append(SlabView(float(lo), float(hi), ids[order], tl[order], th[order]))
    return out


def height(family: CurveFamily) -> HeightReport:
    """Exact height by sweeping event angles.

    Between consecutive event angles the active segments keep their vertical
    order and each gap length is affine in theta, so its infimum over the open
    interval is one of the two endpoint limits.  Gaps on the event lines
    themselves are evaluated directly.
    """
    best = (INF, None, None, "exact")
    for sl in slabs(family):
        if sl.seg.size < 2:
            continue
        for tvals, th in ((sl.t_lo, sl.lo), (sl.t_hi, sl.hi)):
            # segments meeting at an event can round to a slightly negative gap
            d = np.maximum(np.diff(tvals), 0.0)
            k = int(np.argmin(d))
            if d[k] < best[0]:
                best = (float(d[k]), canonical_angle(th), (float(tvals[k]), float(tvals[k + 1])), "limit")
    for th in family.event_angles():
        for lo, hi in vertical_gaps(family, th).bounded():
            if hi - lo < best[0]:
                best = (hi - lo, float(th), (lo, hi), "exact")
    h, wt, wi, how = best
    if math.isinf(h):
        return HeightReport(INF, None, None)
    return HeightReport(h, wt, wi, how)


# -------------------------------------------------------------------- classify


@dataclass(frozen=True)
class Verdict:
    kind: str  # "Tall" | "Short" | "Critical"
    exceptional: bool
    height: HeightReport
    tol: float
    diagnostic: str = ""

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "exceptional": self.exceptional, "tol": self.tol}
        d.update(self.height.to_dict())
        if self.diagnostic:
            d["diagnostic"] = self.diagnostic
        return d


def kind_for(h: float, tol: float) -> str:
    if h > math.pi + tol:
        return "Tall"
    if h < math.pi - tol:
        return "Short"
    return "Critical"


def classify(family: CurveFamily, tol: float = 1e-9) -> Verdict:
    """Tall means strongly fillable, Short means not, Critical makes no claim."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    rep = height(family)
    kind = kind_for(rep.h, tol)
    exceptional, diag = False, ""
    if kind == "Short":
        exceptional, diag = exceptional_report(family, tol)
    return Verdict(kind, exceptional, rep, tol, diag)


# ------------------------------------------------------------------- thin tails


@dataclass(frozen=True)
class ThinTailWitness:
    component: int
    arc: tuple[int, int]  # first and last vertex index of the contact run (cyclic)
    line_theta: float
    band: tuple[float, float]
    side: int  # -1: arc lies at theta <= line_theta, +1: at theta >= line_theta

    def to_dict(self) -> dict:
        return {
            "component": self.component,
            "arc": list(self.arc),
            "line_theta": self.line_theta,
            "band": list(self.band),
            "side": self.side,
        }


def _theta_extrema(curve: ClosedCurve):
    """Runs of vertices on one vertical line where the curve turns back in theta.

    Yields (first, last, side) with side = -1 for a local maximum of theta
    (the curve lies to the left) and +1 for a local minimum.
    """
    d = curve.dtheta
    n = len(curve)
    moving = np.nonzero(d != 0)[0]
    if moving.size == 0:
        return
    # start right after a moving segment so runs are not split
    start = (int(moving[-1]) + 1) % n
    i = start
    seen = 0
    while seen < n:
        first = i
        last = i
        while d[last] == 0 and seen < n:
            last = (last + 1) % n
            seen += 1
        seen += 1
        before = d[(first - 1) % n]
        after = d[last]
        if before > 0 and after < 0:
            yield first, last, -1
        elif before < 0 and after > 0:
            yield first, last, +1
        i = (last + 1) % n


def has_thin_tail(family: CurveFamily, offset: float = 1e-6) -> ThinTailWitness | None:
    """Search for a thin tail at the theta-extrema of every component.

    A polygonal curve touches a vertical line from one side only at a run of
    vertices where it turns back in theta.  The arc made of that run extended
    by `offset` (relative to the adjacent edge lengths) along both neighbouring
    edges meets the line, has endpoints off it and stays on one side.  It is a
    thin tail when its height extent is below pi.
    """
    for k, c in enumerate(family.components):
        n = len(c)
        for first, last, side in _theta_extrema(c):
            idx = [first]
            while idx[-1] != last:
                idx.append((idx[-1] + 1) % n)
            ts = c.t[idx]
            lo, hi = float(ts.min()), float(ts.max())
            # neighbouring edges contribute a vanishing extension
            p_prev = c.t[(first - 1) % n]
            p_next = c.t[(last + 1) % n]
            lo_ext = min(lo, c.t[first] + offset * (p_prev - c.t[first]), c.t[last] + offset * (p_next - c.t[last]))
            hi_ext = max(hi, c.t[first] + offset * (p_prev - c.t[first]), c.t[last] + offset * (p_next - c.t[last]))
            if hi_ext - lo_ext < math.pi:
                pad = 0.5 * (math.pi - (hi_ext - lo_ext))
                return ThinTailWitness(k, (int(first), int(last)), float(c.theta[first]), (lo_ext - pad, lo_ext - pad + math.pi), side)
    return None


# ------------------------------------------------------------------ exceptional


def exceptional_report(family: CurveFamily, tol: float = 1e-9) -> tuple[bool, str]:
    """Decide exceptionality of a short polygonal family.

    Exceptional when every gap shorter than pi lives on an isolated event line
    (limits from both sides stay >= pi) and each such gap is a slit whose ends
    are ends of vertical edges of the curve.
    """
    for sl in slabs(family):
        if sl.seg.size < 2:
            continue
        for tv in (sl.t_lo, sl.t_hi):
            if np.any(np.diff(tv) < math.pi - tol):
                return False, "short gaps persist over an open angular interval"
    tab = family.segments
    vert = tab.vertical
    slits = []
    for th in family.event_angles():
        for lo, hi in vertical_gaps(family, th).bounded():
            if hi - lo >= math.pi - tol:
                continue
            on_line = vert & (tab.th0 == th)
            tops = np.maximum(tab.t0, tab.t1)[on_line]
            bottoms = np.minimum(tab.t0, tab.t1)[on_line]
            if not (np.any(tops == lo) and np.any(bottoms == hi)):
                return False, f"short gap at theta={th:.12g} is not bounded by vertical edges"
            slits.append(float(th))
    if not slits:
        return False, "no short gap found"
    angles = ", ".join(f"{a:.12g}" for a in slits)
    return True, f"short gaps only on isolated lines theta in {{{angles}}}; slit ends are vertical-edge endpoints"


def is_exceptional(family: CurveFamily, tol: float = 1e-9) -> bool:
    if kind_for(height(family).h, tol) != "Short":
        raise NotShort("exceptionality is only defined for short curves")
    return exceptional_report(family, tol)[0]


# -------------------------------------------------------------------- generators


def rectangle(theta_lo: float, theta_hi: float, t_lo: float, t_hi: float) -> ClosedCurve:
    """Boundary of [theta_lo, theta_hi] x [t_lo, t_hi]; needs 0 < width < 2pi."""
    w = theta_hi - theta_lo
    if not (0 < w < TWO_PI) or not (t_hi > t_lo):
        raise BadParameters("rectangle needs 0 < width < 2pi and positive height")
    pts = [(theta_lo, t_lo), (theta_hi, t_lo), (theta_hi, t_hi), (theta_lo, t_hi)]
    if w >= math.pi:
        # split long edges so every segment spans less than pi
        mid = theta_lo + 0.5 * w
        pts = [(theta_lo, t_lo), (mid, t_lo), (theta_hi, t_lo), (theta_hi, t_hi), (mid, t_hi), (theta_lo, t_hi)]
    return ClosedCurve.from_points(pts)


def horizontal_circle(t: float, n: int = 8) -> ClosedCurve:
    return ClosedCurve.from_points([(TWO_PI * k / n, t) for k in range(n)])


def butterfly_curve(h0: float, s: float, m: float) -> CurveFamily:
    """(dR+ u dR-) symmetric-difference dQ with R+- = +-[s, pi/2] x [-m, m], Q = [-s, s] x [0, h0]."""
    if not (h0 > 0 and 0 < s < math.pi / 2 and m > h0):
        raise BadParameters("need h0 > 0, 0 < s < pi/2 and m > h0")
    q = math.pi / 2
    pts = [
        (s, h0), (s, m), (q, m), (q, -m), (s, -m), (s, 0.0),
        (-s, 0.0), (-s, -m), (-q, -m), (-q, m), (-s, m), (-s, h0),
    ]
    return CurveFamily.of(pts)


def exceptional_example() -> CurveFamily:
    """Two tall rectangles glued along a vertical edge with the shared slit removed."""
    a, b = math.pi / 3, 2 * math.pi / 3
    pts = [(0.0, -1.0), (a, -1.0), (a, -5.0), (b, -5.0), (b, 1.0), (a, 1.0), (a, 5.0), (0.0, 5.0)]
    return CurveFamily.of(pts)


# ---------------------------------------------------------------------- JSON io


def family_to_dict(family: CurveFamily) -> dict:
    return {
        "components": [
            {"vertices": [[v.theta, v.t] for v in c.vertices], "closed": True, "winding": c.winding}
            for c in family.components
        ]
    }


def family_from_dict(data: dict) -> CurveFamily:
    try:
        comps = data["components"]
        curves = []
        for comp in comps:
            if not comp.get("closed", True):
                raise CurveError("only closed components are supported")
            curves.append(ClosedCurve.from_points([(float(a), float(b)) for a, b in comp["vertices"]]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CurveError):
            raise
        raise CurveError(f"malformed curve JSON: {exc}") from exc
    return CurveFamily(tuple(curves))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def load_family(path) -> CurveFamily:
    with open(path) as fh:
        fam = family_from_dict(json.load(fh))
    validate(fam)
    return fam


def save_family(family: CurveFamily, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(family_to_dict(family)) + "\n")
