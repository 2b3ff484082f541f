"""Regular subdivisions induced by rational liftings, and sweep orientations."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import networkx as nx

from .lattice import (
    LatticePoint,
    LatticePolygon,
    LatticeSegment,
    area2,
    as_point,
    convex_hull,
    cross,
)


class SubdivisionError(ValueError):
    pass


@dataclass(frozen=True)
class LiftingFunction:
    domain: LatticePolygon
    values: Mapping[LatticePoint, Fraction]

    def __post_init__(self):
        vals = {as_point(p): Fraction(v) for p, v in dict(self.values).items()}
        missing = [p for p in self.domain.lattice_points() if p not in vals]
        if missing:
            raise SubdivisionError(f"lift has no value at {missing[0]}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, domain: LatticePolygon, fn) -> "LiftingFunction":
        return cls(domain, {p: Fraction(fn(p.x, p.y)) for p in domain.lattice_points()})

    def __call__(self, p) -> Fraction:
        return self.values[as_point(p)]

    def scaled_to_integers(self) -> tuple["LiftingFunction", int]:
        """Multiply by the lcm of denominators; returns the new lift and the factor."""
        from math import lcm

        m = 1
        for v in self.values.values():
            m = lcm(m, v.denominator)
        return LiftingFunction(self.domain, {p: v * m for p, v in self.values.items()}), m


@dataclass(frozen=True)
class Subdivision:
    domain: LatticePolygon
    cells: tuple[LatticePolygon, ...]
    shared_edges: tuple[tuple[int, int, LatticeSegment], ...]

    @classmethod
    def from_cells(cls, domain: LatticePolygon, cells: Sequence[LatticePolygon]) -> "Subdivision":
        cells = tuple(cells)
        if not cells:
            raise SubdivisionError("a subdivision needs at least one cell")
        for c in cells:
            if c.dim < 2:
                raise SubdivisionError(f"degenerate cell {c!r}")
            for v in c.vertices:
                if not domain.contains(v):
                    raise SubdivisionError(f"cell {c!r} leaves the domain at {v}")
        if sum(area2(c) for c in cells) != area2(domain):
            raise SubdivisionError("cell areas do not add up to the domain area")
        def near(a, b):
            ax0, ay0, ax1, ay1 = a.bbox()
            bx0, by0, bx1, by1 = b.bbox()
            return ax0 <= bx1 and bx0 <= ax1 and ay0 <= by1 and by0 <= ay1

        for i in range(len(cells)):
            for j in range(i + 1, len(cells)):
                if near(cells[i], cells[j]) and _interiors_overlap(cells[i], cells[j]):
                    raise SubdivisionError(f"cells {i} and {j} overlap")
        # face-to-face: no vertex of one cell in the relative interior of another's edge
        for i, ci in enumerate(cells):
            for j, cj in enumerate(cells):
                if i == j or not near(ci, cj):
                    continue
                for v in ci.vertices:
                    for e in cj.edges():
                        if e.contains(v) and v not in (e.a, e.b):
                            raise SubdivisionError(
                                f"vertex {tuple(v)} of cell {i} splits an edge of cell {j}")
        owner: dict = {}
        shared = []
        for i, c in enumerate(cells):
            for e in c.edges():
                k = e.key()
                if k in owner:
                    shared.append((owner[k], i, LatticeSegment(*k)))
                else:
                    owner[k] = i
        return cls(domain, cells, tuple(shared))

    def cell_of_edge(self, seg: LatticeSegment) -> list[int]:
        return [i for i, c in enumerate(self.cells) if c.has_face(seg)]

    def is_boundary_edge(self, seg: LatticeSegment) -> bool:
        return any(e.contains(seg.a) and e.contains(seg.b) for e in self.domain.edges())


def _interiors_overlap(a: LatticePolygon, b: LatticePolygon) -> bool:
    # separating axis test over the edges of both convex polygons
    for p, q in ((a, b), (b, a)):
        for e in p.edges():
            if all(cross(e.a, e.b, v) <= 0 for v in q.vertices):
                return False
    return True


def _plane_through(p0, p1, p2):
    """Coefficients (a, b, c) of z = a x + b y + c through three lifted points."""
    (x0, y0, z0), (x1, y1, z1), (x2, y2, z2) = p0, p1, p2
    det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
    if det == 0:
        raise SubdivisionError("collinear points do not span a plane")
    a = Fraction((z1 - z0) * (y2 - y0) - (z2 - z0) * (y1 - y0), 1) / det
    b = Fraction((x1 - x0) * (z2 - z0) - (x2 - x0) * (z1 - z0), 1) / det
    c = z0 - a * x0 - b * y0
    return a, b, c


def _height(a, b, q, r, z) -> int:
    """Sign-normalised height of lifted r over the plane through lifted a, b, q.

    Positive above, zero on, negative below; integer arithmetic only (z must
    take integer values).
    """
    den = cross(a, b, q)
    ux, uy = r.x - a.x, r.y - a.y
    c1 = ux * (q.y - a.y) - uy * (q.x - a.x)
    c2 = (b.x - a.x) * uy - (b.y - a.y) * ux
    d = (z[r] - z[a]) * den - c1 * (z[b] - z[a]) - c2 * (z[q] - z[a])
    return d if den > 0 else -d


def regular_subdivision(domain: LatticePolygon, lift: LiftingFunction) -> Subdivision:
    """Project the lower faces of the lifted lattice points (gift wrapping)."""
    if domain.dim < 2:
        raise SubdivisionError("domain must be two-dimensional")
    pts = domain.lattice_points()
    ilift, _ = lift.scaled_to_integers()
    z = {p: int(ilift(p)) for p in pts}

    def facet_from(a, b, base=None):
        # the lower facet on the right of a->b: the candidate whose plane through
        # lifted a, b has every other right-hand point on or above it
        best = None
        for q in pts:
            if cross(a, b, q) >= 0:
                continue
            if best is None or _height(a, b, best, q, z) < 0:
                best = q
        if best is None:
            return None
        on = [q for q in pts if _height(a, b, best, q, z) == 0]
        return (a, b, best), on

    # seed: first lower-hull segment along a domain edge, oriented with the domain on its right
    e0 = domain.edges()[0]
    line_pts = sorted((q for q in pts if e0.contains(q)),
                      key=lambda q: (q.x - e0.a.x) * (e0.b.x - e0.a.x) + (q.y - e0.a.y) * (e0.b.y - e0.a.y))
    v0 = line_pts[0]

    def step(q):
        return max(abs(q.x - v0.x), abs(q.y - v0.y))

    w = min(line_pts[1:], key=lambda q: (Fraction(z[q] - z[v0], step(q)), step(q)))
    # domain lies left of v0->w (CCW domain), so walk w->v0 to have it on the right
    first = facet_from(w, v0)
    if first is None:
        raise SubdivisionError("could not seed the lower hull")

    cells: list[LatticePolygon] = []
    seen: set = set()
    queue = deque([first])
    while queue:
        plane, on = queue.popleft()
        key = frozenset(on)
        if key in seen:
            continue
        seen.add(key)
        poly = convex_hull(on)
        if poly.dim < 2:
            raise SubdivisionError("lower facet collapsed; lift is degenerate")
        cells.append(poly)
        for e in poly.edges():
            if any(de.contains(e.a) and de.contains(e.b) for de in domain.edges()):
                continue
            nxt = facet_from(e.a, e.b)
            if nxt is not None and frozenset(nxt[1]) not in seen:
                queue.append(nxt)
    cells.sort(key=lambda c: (min(v.y for v in c.vertices), min(v.x for v in c.vertices), c.vertices))
    return Subdivision.from_cells(domain, cells)


def cell_plane(cell: LatticePolygon, lift: LiftingFunction):
    v = cell.vertices
    for i in range(len(v)):
        for j in range(i + 1, len(v)):
            for k in range(j + 1, len(v)):
                if cross(v[i], v[j], v[k]) != 0:
                    return _plane_through(*((p.x, p.y, lift(p)) for p in (v[i], v[j], v[k])))
    raise SubdivisionError("degenerate cell")


def _cell_frame(cell: LatticePolygon):
    v = cell.vertices
    for i in range(len(v)):
        for j in range(i + 1, len(v)):
            for k in range(j + 1, len(v)):
                if cross(v[i], v[j], v[k]) != 0:
                    return v[i], v[j], v[k]
    raise SubdivisionError("degenerate cell")


def is_convex_subdivision(sub: Subdivision, lift: LiftingFunction) -> bool:
    for c in sub.cells:
        for p in c.lattice_points():
            if p not in lift.values:
                raise SubdivisionError(f"lattice point {tuple(p)} of cell {c!r} has no lift value")
    ilift, _ = lift.scaled_to_integers()
    z = {p: int(v) for p, v in ilift.values.items()}
    frames = [_cell_frame(c) for c in sub.cells]
    for c, (a, b, q) in zip(sub.cells, frames):
        # lattice points lifted above the cell's plane are simply unused
        if any(_height(a, b, q, p, z) != 0 for p in c.vertices):
            return False
        if any(_height(a, b, q, p, z) < 0 for p in z):
            return False
    # adjacent cells must not share a plane
    return all(any(_height(*frames[i], p, z) != 0 for p in sub.cells[j].vertices)
               for i, j, _ in sub.shared_edges)


def adjacency_graph(sub: Subdivision) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_nodes_from(range(len(sub.cells)))
    for i, j, seg in sub.shared_edges:
        g.add_edge(i, j, segment=seg)
    return g


@dataclass(frozen=True)
class OrientedAdjacency:
    subdivision: Subdivision
    arcs: tuple[tuple[int, int, LatticeSegment], ...]  # (source, target, edge)
    incoming_facets: tuple[frozenset, ...] = field(default=())

    def digraph(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(range(len(self.subdivision.cells)))
        for s, t, seg in self.arcs:
            g.add_edge(s, t, segment=seg)
        return g

    def incoming(self, cell: int) -> list[LatticeSegment]:
        return sorted((LatticeSegment(*k) for k in self.incoming_facets[cell]),
                      key=lambda s: s.key())


def _outward_normal(cell: LatticePolygon, seg: LatticeSegment):
    for e in cell.edges():
        if e.same_as(seg):
            return (e.b.y - e.a.y, -(e.b.x - e.a.x))
    raise SubdivisionError(f"{seg} is not an edge of {cell!r}")


def sweep_orientation(sub: Subdivision, direction=(0, 1)) -> OrientedAdjacency:
    dx, dy = Fraction(direction[0]), Fraction(direction[1])
    arcs = []
    incoming = [set() for _ in sub.cells]
    for i, j, seg in sub.shared_edges:
        nx_, ny_ = _outward_normal(sub.cells[i], seg)
        dot = nx_ * dx + ny_ * dy
        if dot == 0:
            raise SubdivisionError(
                f"direction {tuple(direction)} is parallel to shared edge {tuple(seg.a)}-{tuple(seg.b)}")
        s, t = (i, j) if dot > 0 else (j, i)
        arcs.append((s, t, seg))
        incoming[t].add(seg.key())
    oa = OrientedAdjacency(sub, tuple(arcs), tuple(frozenset(s) for s in incoming))
    if not nx.is_directed_acyclic_graph(oa.digraph()):
        raise SubdivisionError("sweep orientation has a directed cycle")
    for idx, c in enumerate(sub.cells):
        if len(incoming[idx]) == len(c.edges()):
            raise SubdivisionError(f"every facet of cell {idx} is incoming")
    return oa
