"""Exact geometry of convex lattice polygons.

Everything here works over the integers (or ``Fraction`` where a rational
bound is unavoidable); no floating point is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from math import floor, ceil, gcd
from typing import Iterable, NamedTuple, Sequence


class LatticePoint(NamedTuple):
    x: int
    y: int

    def __add__(self, other):  # type: ignore[override]
        return LatticePoint(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return LatticePoint(self.x - other[0], self.y - other[1])


def as_point(p: Sequence[int]) -> LatticePoint:
    x, y = p
    if int(x) != x or int(y) != y:
        raise ValueError(f"lattice point must have integer coordinates: {p!r}")
    return LatticePoint(int(x), int(y))


def cross(o, a, b):
    """Twice the signed area of the triangle ``o, a, b``."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class LatticeSegment:
    a: LatticePoint
    b: LatticePoint

    def __post_init__(self):
        a, b = as_point(self.a), as_point(self.b)
        if a == b:
            raise ValueError("segment endpoints must differ")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def direction(self) -> LatticePoint:
        """Primitive integer direction from ``a`` to ``b``."""
        dx, dy = self.b.x - self.a.x, self.b.y - self.a.y
        g = gcd(abs(dx), abs(dy))
        return LatticePoint(dx // g, dy // g)

    def points(self) -> list[LatticePoint]:
        d = self.direction
        n = integer_length(self)
        return [LatticePoint(self.a.x + s * d.x, self.a.y + s * d.y) for s in range(n + 1)]

    def contains(self, p) -> bool:
        if cross(self.a, self.b, p) != 0:
            return False
        return (min(self.a.x, self.b.x) <= p[0] <= max(self.a.x, self.b.x)
                and min(self.a.y, self.b.y) <= p[1] <= max(self.a.y, self.b.y))

    def key(self) -> tuple[LatticePoint, LatticePoint]:
        """Orientation-free identity of the segment."""
        return (self.a, self.b) if self.a <= self.b else (self.b, self.a)

    def reversed(self) -> "LatticeSegment":
        return LatticeSegment(self.b, self.a)

    def same_as(self, other: "LatticeSegment") -> bool:
        return self.key() == other.key()


@dataclass(frozen=True)
class LatticePolygon:
    """A convex lattice polygon with counter-clockwise vertices.

    Points and segments are representable (``dim`` 0 and 1); they show up as
    faces of honest polygons.
    """

    vertices: tuple[LatticePoint, ...]

    def __post_init__(self):
        verts = tuple(as_point(v) for v in self.vertices)
        if not verts:
            raise ValueError("polygon needs at least one vertex")
        n = len(verts)
        if n >= 3:
            for i in range(n):
                if cross(verts[i - 1], verts[i], verts[(i + 1) % n]) <= 0:
                    raise ValueError(f"vertices are not strictly convex CCW at {verts[i]}")
        elif n == 2 and verts[0] == verts[1]:
            raise ValueError("degenerate segment")
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def rectangle(cls, x0: int, y0: int, x1: int, y1: int) -> "LatticePolygon":
        return cls(((x0, y0), (x1, y0), (x1, y1), (x0, y1)))

    @property
    def dim(self) -> int:
        return min(len(self.vertices) - 1, 2)

    @property
    def is_degenerate(self) -> bool:
        return self.dim < 2

    @cached_property
    def _edges(self) -> tuple[LatticeSegment, ...]:
        v = self.vertices
        if len(v) == 1:
            return ()
        if len(v) == 2:
            return (LatticeSegment(v[0], v[1]),)
        return tuple(LatticeSegment(v[i], v[(i + 1) % len(v)]) for i in range(len(v)))

    def edges(self) -> list[LatticeSegment]:
        return list(self._edges)

    @cached_property
    def _bbox(self) -> tuple[int, int, int, int]:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def bbox(self) -> tuple[int, int, int, int]:
        return self._bbox

    def is_rectangle(self) -> bool:
        if len(self.vertices) != 4:
            return False
        x0, y0, x1, y1 = self.bbox()
        return set(self.vertices) == {(x0, y0), (x1, y0), (x1, y1), (x0, y1)}

    def contains(self, p, strict: bool = False) -> bool:
        """Closed (or open, with ``strict``) containment; exact for rational ``p``."""
        if self.dim == 0:
            return not strict and tuple(p) == tuple(self.vertices[0])
        if self.dim == 1:
            return not strict and self.edges()[0].contains(p)
        for e in self.edges():
            c = cross(e.a, e.b, p)
            if c < 0 or (strict and c == 0):
                return False
        return True

    def on_boundary(self, p) -> bool:
        return self.contains(p) and not self.contains(p, strict=True)

    def edge_containing(self, p) -> int | None:
        """Index of the edge whose closed segment contains ``p`` (first match)."""
        for i, e in enumerate(self.edges()):
            if e.contains(p):
                return i
        return None

    @cached_property
    def _lattice_points(self) -> tuple[LatticePoint, ...]:
        x0, y0, x1, y1 = self.bbox()
        return tuple(LatticePoint(x, y) for y in range(y0, y1 + 1) for x in range(x0, x1 + 1)
                     if self.contains((x, y)))

    def lattice_points(self) -> list[LatticePoint]:
        return list(self._lattice_points)

    def translate(self, dx: int, dy: int) -> "LatticePolygon":
        return LatticePolygon(tuple((v.x + dx, v.y + dy) for v in self.vertices))

    def has_face(self, face: "LatticeSegment | LatticePoint | LatticePolygon") -> bool:
        if isinstance(face, LatticePolygon):
            if face == self:
                return True
            if face.dim == 0:
                return face.vertices[0] in self.vertices
            if face.dim == 1:
                face = face.edges()[0]
            else:
                return False
        if isinstance(face, LatticeSegment):
            return any(e.same_as(face) for e in self.edges())
        return tuple(face) in self.vertices

    def __repr__(self) -> str:
        return "LatticePolygon(" + ", ".join(f"({v.x},{v.y})" for v in self.vertices) + ")"


def integer_length(seg: LatticeSegment) -> int:
    """Number of lattice points on ``seg`` minus one."""
    return gcd(abs(seg.b.x - seg.a.x), abs(seg.b.y - seg.a.y))


def area2(poly: LatticePolygon) -> int:
    """Twice the Euclidean area (shoelace), hence always an integer."""
    v = poly.vertices
    if len(v) < 3:
        return 0
    s = 0
    for i in range(len(v)):
        s += v[i].x * v[(i + 1) % len(v)].y - v[(i + 1) % len(v)].x * v[i].y
    return abs(s)


def boundary_count(poly: LatticePolygon) -> int:
    if poly.dim == 0:
        return 1
    if poly.dim == 1:
        return integer_length(poly.edges()[0]) + 1
    return sum(integer_length(e) for e in poly.edges())


def interior_count(poly: LatticePolygon) -> int:
    """Lattice points strictly inside ``poly``, counted row by row.

    Pick's formula is deliberately not used so that it can serve as a check.
    """
    if poly.dim < 2:
        return 0
    x0, y0, x1, y1 = poly.bbox()
    edges = poly.edges()
    total = 0
    for y in range(y0 + 1, y1):
        lo, hi = Fraction(x0), Fraction(x1)
        for e in edges:
            (ax, ay), (bx, by) = e.a, e.b
            if ay == by:
                continue
            if min(ay, by) <= y <= max(ay, by):
                xc = Fraction(ax) + Fraction((y - ay) * (bx - ax), by - ay)
                # CCW: edges going up bound the right side, edges going down the left.
                if by > ay:
                    hi = min(hi, xc)
                else:
                    lo = max(lo, xc)
        first = floor(lo) + 1
        last = ceil(hi) - 1
        if last >= first:
            total += last - first + 1
    return total


def convex_hull(points: Iterable[Sequence[int]]) -> LatticePolygon:
    """Monotone-chain hull; collinear boundary points are dropped."""
    pts = sorted({as_point(p) for p in points})
    if not pts:
        raise ValueError("convex hull of an empty point set")
    if len(pts) == 1:
        return LatticePolygon((pts[0],))

    def half(seq):
        out: list[LatticePoint] = []
        for p in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return LatticePolygon((pts[0], pts[-1]))
    return LatticePolygon(tuple(hull))
