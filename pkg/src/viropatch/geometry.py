"""Exact planar predicates on integer or rational points."""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence


def orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def on_segment(a, b, p) -> bool:
    return (orient(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_intersect(a, b, c, d) -> bool:
    """Closed segments ab and cd share at least one point."""
    o1, o2, o3, o4 = orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    return (o1 == 0 and on_segment(a, b, c)) or (o2 == 0 and on_segment(a, b, d)) \
        or (o3 == 0 and on_segment(c, d, a)) or (o4 == 0 and on_segment(c, d, b))


def common_denominator(points: Iterable[Sequence[Fraction]]) -> int:
    m = 1
    for p in points:
        for v in p:
            m = lcm(m, Fraction(v).denominator)
    return m


def scaled(p, m: int) -> tuple[int, int]:
    return (int(Fraction(p[0]) * m), int(Fraction(p[1]) * m))


def find_bad_crossings(segments: Sequence[tuple], allowed) -> list[tuple[int, int]]:
    """Pairs of segments that touch where ``allowed(i, j)`` does not permit it.

    ``segments`` hold integer endpoints.  ``allowed(i, j, shared)`` receives
    the set of shared endpoints and returns True when contact is legitimate
    (touching only at those endpoints).  A uniform grid keeps this near linear.
    """
    if not segments:
        return []
    xs = [c for s in segments for c in (s[0][0], s[1][0])]
    ys = [c for s in segments for c in (s[0][1], s[1][1])]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1)
    cell = max(span // max(int(len(segments) ** 0.5), 1), 1)
    x0, y0 = min(xs), min(ys)
    buckets = defaultdict(list)
    for idx, (a, b) in enumerate(segments):
        for gx in range((min(a[0], b[0]) - x0) // cell, (max(a[0], b[0]) - x0) // cell + 1):
            for gy in range((min(a[1], b[1]) - y0) // cell, (max(a[1], b[1]) - y0) // cell + 1):
                buckets[(gx, gy)].append(idx)
    bad = set()
    checked = set()
    for members in buckets.values():
        for ii in range(len(members)):
            i = members[ii]
            a, b = segments[i]
            for jj in range(ii + 1, len(members)):
                j = members[jj]
                key = (i, j) if i < j else (j, i)
                if key in checked:
                    continue
                checked.add(key)
                c, d = segments[j]
                if max(a[0], b[0]) < min(c[0], d[0]) or max(c[0], d[0]) < min(a[0], b[0]) \
                        or max(a[1], b[1]) < min(c[1], d[1]) or max(c[1], d[1]) < min(a[1], b[1]):
                    continue
                if not segments_intersect(a, b, c, d):
                    continue
                shared = {a, b} & {c, d}
                if shared and _touch_only_at(a, b, c, d, shared) and allowed(i, j, shared):
                    continue
                bad.add(key)
    return sorted(bad)


def _touch_only_at(a, b, c, d, shared) -> bool:
    # collinear overlap beyond the shared endpoint is a real intersection
    if orient(a, b, c) == 0 and orient(a, b, d) == 0:
        pts = {a, b, c, d}
        if len(pts) == 3:
            (p,) = shared
            others = [q for q in (a, b, c, d) if q != p]
            # both other endpoints on the same ray from p means overlap
            u, v = others
            dot = (u[0] - p[0]) * (v[0] - p[0]) + (u[1] - p[1]) * (v[1] - p[1])
            return dot < 0
        return False
    return True


def signed_area2(poly: Sequence[tuple[int, int]]) -> int:
    s = 0
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return s


def point_in_polygon(p, poly: Sequence[tuple[int, int]]) -> int:
    """1 inside, 0 on the boundary, -1 outside (exact)."""
    inside = False
    n = len(poly)
    px, py = p
    for i in range(n):
        a = poly[i]
        b = poly[(i + 1) % n]
        if on_segment(a, b, p):
            return 0
        if (a[1] > py) != (b[1] > py):
            # x-coordinate of the crossing compared with px, exactly
            lhs = (px - a[0]) * (b[1] - a[1])
            rhs = (b[0] - a[0]) * (py - a[1])
            if (b[1] - a[1]) > 0:
                crosses = lhs < rhs
            else:
                crosses = lhs > rhs
            if crosses:
                inside = not inside
    return 1 if inside else -1


def angle_key(d):
    """Sort key placing direction vectors in counter-clockwise order from +x."""
    x, y = d
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return half, _Slope(x, y)


class _Slope:
    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x, self.y = x, y

    def __lt__(self, other):
        # within one half-plane, a precedes b iff cross(a, b) > 0
        return self.x * other.y - self.y * other.x > 0

    def __eq__(self, other):
        return self.x * other.y - self.y * other.x == 0
