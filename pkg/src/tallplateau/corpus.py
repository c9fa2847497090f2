"""Seeded random generators of valid polygonal curve families.

Every generator draws from a numpy Generator and retries until the family
passes `validate`, so a seed fixes the output exactly.
"""

from __future__ import annotations

import math

import numpy as np

from .curves import TWO_PI, ClosedCurve, CurveError, CurveFamily, validate

KINDS = ("blob", "graph", "stacked", "blob_graph", "star", "pair")


def _chain(rng, th, lo, hi):
    return rng.uniform(lo, hi, size=th.size)


def blob(rng, theta0=None, width=None, k=None, min_gap=0.2, max_gap=4.0, t0=0.0) -> ClosedCurve:
    """Theta-monotone region with vertical ends; the gap inside is >= min_gap."""
    k = int(rng.integers(1, 6)) if k is None else k
    width = rng.uniform(0.3, 2.5) if width is None else width
    theta0 = rng.uniform(0, TWO_PI) if theta0 is None else theta0
    th = theta0 + np.linspace(0.0, width, k + 2)
    lower = t0 + _chain(rng, th, -1.5, 1.5)
    upper = lower + rng.uniform(min_gap, max_gap, size=th.size)
    pts = [(a, b) for a, b in zip(th, lower)] + [(a, b) for a, b in zip(th[::-1], upper[::-1])]
    return ClosedCurve.from_points(pts)


def graph(rng, k=None, t0=0.0, amp=1.5) -> ClosedCurve:
    """Essential curve t = f(theta), piecewise linear through k angles."""
    k = int(rng.integers(3, 10)) if k is None else k
    th = np.sort(rng.uniform(0, TWO_PI, size=k))
    # keep every step below pi
    while np.max(np.diff(np.concatenate([th, [th[0] + TWO_PI]]))) >= math.pi - 1e-3:
        th = np.sort(np.concatenate([th, rng.uniform(0, TWO_PI, size=1)]))
    t = t0 + rng.uniform(-amp, amp, size=th.size)
    return ClosedCurve.from_points(list(zip(th, t)))


def star(rng, k=None, radius=(0.3, 1.2)) -> ClosedCurve:
    """Star-shaped polygon about a random centre; not theta-monotone in general."""
    k = int(rng.integers(5, 12)) if k is None else k
    c_th = rng.uniform(0, TWO_PI)
    ang = np.sort(rng.uniform(0, TWO_PI, size=k))
    rad = rng.uniform(*radius, size=k)
    sx = rng.uniform(0.5, 1.5)
    pts = [(c_th + sx * r * math.cos(a), r * math.sin(a) * rng.uniform(1.0, 3.0)) for a, r in zip(ang, rad)]
    return ClosedCurve.from_points(pts)


def random_family(rng, kind: str | None = None) -> CurveFamily:
    kind = KINDS[int(rng.integers(len(KINDS)))] if kind is None else kind
    if kind == "blob":
        return CurveFamily.of(blob(rng))
    if kind == "graph":
        return CurveFamily.of(graph(rng))
    if kind == "stacked":
        return CurveFamily.of(graph(rng, t0=-2.0, amp=0.8), graph(rng, t0=2.0, amp=0.8))
    if kind == "blob_graph":
        return CurveFamily.of(blob(rng, t0=3.5), graph(rng, amp=0.5))
    if kind == "star":
        return CurveFamily.of(star(rng))
    if kind == "pair":
        a = blob(rng, theta0=0.0, width=rng.uniform(0.3, 2.5))
        b = blob(rng, theta0=rng.uniform(2.9, 3.2), width=rng.uniform(0.3, 2.5))
        return CurveFamily.of(a, b)
    raise ValueError(f"unknown corpus kind {kind!r}")


def _valid(make, rng, tries=200) -> CurveFamily:
    for _ in range(tries):
        try:
            fam = make(rng)
            validate(fam)
            return fam
        except CurveError:
            continue
    raise RuntimeError("could not draw a valid curve family")


def corpus(n: int, seed: int = 0, kind: str | None = None) -> list[CurveFamily]:
    rng = np.random.default_rng(seed)
    return [_valid(lambda g: random_family(g, kind), rng) for _ in range(n)]


def tall_family(rng, margin: float = 0.3) -> CurveFamily:
    """A random family with every complementary gap longer than pi + margin."""
    g = math.pi + margin
    choice = int(rng.integers(4))
    if choice == 0:
        return CurveFamily.of(blob(rng, min_gap=g, max_gap=g + 3.0))
    if choice == 1:
        return CurveFamily.of(graph(rng))
    if choice == 2:
        lo = graph(rng, k=6, t0=0.0, amp=0.5)
        return CurveFamily.of(lo, graph(rng, k=6, t0=1.0 + g + 0.5, amp=0.5))
    b = blob(rng, min_gap=g, max_gap=g + 2.0, t0=2.0 + g)
    return CurveFamily.of(b, graph(rng, amp=0.5))


def tall_corpus(n: int, seed: int = 0) -> list[CurveFamily]:
    rng = np.random.default_rng(seed)
    return [_valid(tall_family, rng) for _ in range(n)]
