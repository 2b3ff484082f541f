"""Charts of cell polynomials, their gluing, and the arrangement on the torus.

Coordinates.  A cell chart stores, for every sign quadrant, polylines in the
*unsigned* coordinates of the cell (points of the cell polygon).  Gluing maps
the quadrant copy s_e(cell) into the plane by (u, v) -> (s1 u, s2 v), so for
a rectangle [0,a] x [0,b] the union of the four copies is R = [-a,a] x [-b,b]
and the quotient identifies x = -a with x = a and y = -b with y = b.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .geometry import (
    angle_key,
    common_denominator,
    find_bad_crossings,
    on_segment,
    point_in_polygon,
    scaled,
    signed_area2,
)
from .lattice import LatticePoint, LatticePolygon, LatticeSegment
from .polynomials import (
    QUADRANT_BITS,
    QUADRANTS,
    BITS_QUADRANT,
    SparsePolynomial,
    edge_root_data,
    quadrant_signs,
)
from .subdivision import Subdivision

Point = tuple[Fraction, Fraction]
NODE_KINDS = ("node", "cusp")


class ChartError(ValueError):
    pass


class GluingError(ChartError):
    pass


def _pt(p) -> Point:
    return (Fraction(p[0]), Fraction(p[1]))


@dataclass(frozen=True)
class ChartNode:
    at: Point
    kind: str = "node"

    def __post_init__(self):
        object.__setattr__(self, "at", _pt(self.at))
        if self.kind not in NODE_KINDS:
            raise ChartError(f"unknown singularity kind {self.kind!r}")


@dataclass(frozen=True)
class QuadrantChart:
    arcs: tuple = ()
    ovals: tuple = ()
    nodes: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(tuple(_pt(p) for p in a) for a in self.arcs))
        object.__setattr__(self, "ovals", tuple(tuple(_pt(p) for p in o) for o in self.ovals))
        object.__setattr__(self, "nodes", tuple(n if isinstance(n, ChartNode) else ChartNode(*n)
                                                for n in self.nodes))

    def is_empty(self) -> bool:
        return not (self.arcs or self.ovals or self.nodes)

    def map_points(self, fn) -> "QuadrantChart":
        return QuadrantChart(tuple(tuple(fn(p) for p in a) for a in self.arcs),
                             tuple(tuple(fn(p) for p in o) for o in self.ovals),
                             tuple(ChartNode(fn(n.at), n.kind) for n in self.nodes))


EMPTY = QuadrantChart()


@dataclass(frozen=True)
class CellChart:
    cell: LatticePolygon
    quadrants: Mapping[str, QuadrantChart]

    def __post_init__(self):
        qs = dict(self.quadrants)
        for k in qs:
            if k not in QUADRANT_BITS:
                raise ChartError(f"unknown quadrant label {k!r}")
        object.__setattr__(self, "quadrants", {q: qs.get(q, EMPTY) for q in QUADRANTS})

    def quadrant(self, q: str) -> QuadrantChart:
        return self.quadrants[q]

    @property
    def node_count(self) -> int:
        return sum(1 for q in QUADRANTS for n in self.quadrants[q].nodes if n.kind == "node")

    @property
    def cusp_count(self) -> int:
        return sum(1 for q in QUADRANTS for n in self.quadrants[q].nodes if n.kind == "cusp")

    def crossings(self) -> dict[tuple[int, str], list[tuple[Fraction, int, int]]]:
        """Arc endpoints per (edge index, quadrant), sorted along the CCW edge."""
        out: dict = defaultdict(list)
        edges = self.cell.edges()
        for q in QUADRANTS:
            for ai, arc in enumerate(self.quadrants[q].arcs):
                for end, p in ((0, arc[0]), (1, arc[-1])):
                    for ei, e in enumerate(edges):
                        if on_segment(e.a, e.b, p):
                            out[(ei, q)].append((_edge_param(e, p), ai, end))
                            break
        for v in out.values():
            v.sort()
        return dict(out)

    def transformed(self, point_map, new_cell: LatticePolygon) -> "CellChart":
        return CellChart(new_cell, {q: c.map_points(point_map) for q, c in self.quadrants.items()})

    def translate(self, dx, dy) -> "CellChart":
        dx, dy = Fraction(dx), Fraction(dy)
        return self.transformed(lambda p: (p[0] + dx, p[1] + dy), self.cell.translate(int(dx), int(dy)))

    def flip_y(self, h: int) -> "CellChart":
        """Chart of y^h f(x, 1/y): reflect v -> h - v in every quadrant."""
        verts = [(v.x, h - v.y) for v in self.cell.vertices]
        from .lattice import convex_hull
        return self.transformed(lambda p: (p[0], h - p[1]), convex_hull(verts))

    def polylines(self, q: str):
        qc = self.quadrants[q]
        for a in qc.arcs:
            yield a, False
        for o in qc.ovals:
            yield o, True


def _edge_param(e: LatticeSegment, p) -> Fraction:
    dx, dy = e.b.x - e.a.x, e.b.y - e.a.y
    return Fraction((p[0] - e.a.x) * dx + (p[1] - e.a.y) * dy) / (dx * dx + dy * dy)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    ok: bool
    problems: list[str]
    node_count: int = 0
    crossing_counts: dict = field(default_factory=dict)

    @property
    def first_problem(self) -> str | None:
        return self.problems[0] if self.problems else None


def _segments_of(poly, closed):
    pts = list(poly)
    segs = list(zip(pts, pts[1:]))
    if closed:
        segs.append((pts[-1], pts[0]))
    return segs


def validate_cell_chart(chart: CellChart, f: SparsePolynomial | None = None,
                        expected_nodes: int | None = None) -> ValidationReport:
    problems: list[str] = []
    cell = chart.cell
    verts = set((Fraction(v.x), Fraction(v.y)) for v in cell.vertices)
    for q in QUADRANTS:
        qc = chart.quadrants[q]
        for ai, arc in enumerate(qc.arcs):
            if len(arc) < 2:
                problems.append(f"[{q}] arc {ai} has fewer than two points")
                continue
            for end, p in ((0, arc[0]), (1, arc[-1])):
                if not cell.on_boundary(p):
                    problems.append(f"[{q}] arc {ai} endpoint {_fmt(p)} is not on the cell boundary")
                elif p in verts:
                    problems.append(f"[{q}] arc {ai} ends at lattice vertex {_fmt(p)}")
            for p in arc[1:-1]:
                if not cell.contains(p, strict=True):
                    problems.append(f"[{q}] arc {ai} vertex {_fmt(p)} is not interior to the cell")
        for oi, ov in enumerate(qc.ovals):
            if len(ov) < 3:
                problems.append(f"[{q}] oval {oi} has fewer than three points")
            for p in ov:
                if not cell.contains(p, strict=True):
                    problems.append(f"[{q}] oval {oi} vertex {_fmt(p)} is not interior to the cell")
        node_pts = {}
        for n in qc.nodes:
            if not cell.contains(n.at, strict=True):
                problems.append(f"[{q}] {n.kind} at {_fmt(n.at)} is not interior to the cell")
            node_pts[n.at] = n.kind
        # incidence at nodes
        incid = defaultdict(int)
        for poly, closed in chart.polylines(q):
            pts = list(poly)
            for i, p in enumerate(pts):
                if p in node_pts:
                    interior = closed or 0 < i < len(pts) - 1
                    incid[p] += 2 if interior else 1
        for p, kind in node_pts.items():
            want = 4 if kind == "node" else 2
            if incid[p] != want:
                problems.append(f"[{q}] {kind} at {_fmt(p)} has {incid[p]} incident branch ends, expected {want}")
        # pairwise disjointness away from nodes
        segs, owner = [], []
        for pi, (poly, closed) in enumerate(chart.polylines(q)):
            for si, s in enumerate(_segments_of(poly, closed)):
                segs.append(s)
                owner.append((pi, si, closed, len(poly)))
        if segs:
            m = common_denominator(p for s in segs for p in s)
            isegs = [(scaled(a, m), scaled(b, m)) for a, b in segs]
            inode = {scaled(p, m) for p in node_pts}

            def allowed(i, j, shared, owner=owner, inode=inode):
                if shared <= inode:
                    return True
                pi, si, closed, n = owner[i]
                pj, sj, _, _ = owner[j]
                if pi != pj:
                    return False
                nseg = n if closed else n - 1
                return abs(si - sj) == 1 or (closed and {si, sj} == {0, nseg - 1})

            for i, j in find_bad_crossings(isegs, allowed):
                problems.append(f"[{q}] curve pieces meet at an undeclared point near "
                                f"{_fmt(segs[i][0])}-{_fmt(segs[i][1])}")
                break
    counts = {k: len(v) for k, v in chart.crossings().items()}
    edges = cell.edges()
    if f is not None:
        if f.is_zero() or f.newton != cell:
            problems.append("attached polynomial does not have the cell as Newton polygon")
        else:
            for ei, e in enumerate(edges):
                rd = edge_root_data(f, e)
                d = e.direction
                for q in QUADRANTS:
                    e1, e2 = QUADRANT_BITS[q]
                    sign = (-1) ** (e1 * d.x + e2 * d.y)
                    want = rd.count_for_sign(sign)
                    have = counts.get((ei, q), 0)
                    if want != have:
                        problems.append(f"edge {ei} {_fmt(e.a)}-{_fmt(e.b)} quadrant {q}: "
                                        f"{have} crossings but {want} real roots of that sign")
    else:
        for ei, e in enumerate(edges):
            d = e.direction
            seen: dict = {}
            for q in QUADRANTS:
                e1, e2 = QUADRANT_BITS[q]
                sign = (-1) ** (e1 * d.x + e2 * d.y)
                have = counts.get((ei, q), 0)
                if sign in seen and seen[sign] != have:
                    problems.append(f"edge {ei} {_fmt(e.a)}-{_fmt(e.b)}: quadrant copies of the same "
                                    f"root sign carry {seen[sign]} and {have} crossings")
                seen.setdefault(sign, have)
            total = sum(seen.values())
            if total > e.points().__len__() - 1:
                problems.append(f"edge {ei} {_fmt(e.a)}-{_fmt(e.b)}: {total} crossings exceed its length")
    if expected_nodes is not None and chart.node_count != expected_nodes:
        problems.append(f"chart declares {chart.node_count} nodes, expected {expected_nodes}")
    return ValidationReport(not problems, problems, chart.node_count, counts)


def _fmt(p) -> str:
    return "(" + ",".join(str(Fraction(c)) for c in p) + ")"


# ---------------------------------------------------------------------------
# gluing


@dataclass
class GluedPolyline:
    points: list[Point]
    closed: bool
    cell: int
    quadrant: str


@dataclass(frozen=True)
class Link:
    a: tuple[int, int]  # (polyline index, 0 for start / 1 for end)
    b: tuple[int, int]
    kind: str  # "shared" (interior edge), "axis" (coordinate axis), "outer" (quotient)
    edge: LatticeSegment
    quadrants: tuple[str, str]


@dataclass(frozen=True)
class GlobalNode:
    at: Point
    kind: str
    cell: int
    quadrant: str


@dataclass
class GluedCurve:
    domain: LatticePolygon
    subdivision: Subdivision
    polylines: list[GluedPolyline]
    links: list[Link]
    nodes: list[GlobalNode]
    identifications: list[tuple[LatticeSegment, str, str]]
    offset: tuple[int, int] = (0, 0)

    @property
    def node_count(self) -> int:
        return sum(1 for n in self.nodes if n.kind == "node")

    def _uf(self, link_kinds: Iterable[str], same_quadrant_only: bool):
        parent = list(range(len(self.polylines)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        kinds = set(link_kinds)
        for ln in self.links:
            if ln.kind in kinds:
                union(ln.a[0], ln.b[0])
        at_node = defaultdict(list)
        node_pts = {(n.at, n.quadrant) for n in self.nodes}
        for i, pl in enumerate(self.polylines):
            for p in pl.points:
                if (p, pl.quadrant) in node_pts:
                    at_node[(p, pl.quadrant if same_quadrant_only else "")].append(i)
        for members in at_node.values():
            for m in members[1:]:
                union(members[0], m)
        return find

    def components(self) -> list[list[int]]:
        find = self._uf(("shared", "axis", "outer"), False)
        groups = defaultdict(list)
        for i in range(len(self.polylines)):
            groups[find(i)].append(i)
        return [groups[k] for k in sorted(groups)]

    def quadrant_components(self) -> dict[str, int]:
        find = self._uf(("shared",), True)
        out = {q: set() for q in QUADRANTS}
        for i, pl in enumerate(self.polylines):
            out[pl.quadrant].add(find(i))
        return {q: len(v) for q, v in out.items()}

    def quadrant_nodes(self) -> dict[str, int]:
        out = {q: 0 for q in QUADRANTS}
        for n in self.nodes:
            if n.kind == "node":
                out[n.quadrant] += 1
        return out


def _to_global(p, q):
    s1, s2 = quadrant_signs(q)
    return (p[0] * s1, p[1] * s2)


def glue_charts(sub: Subdivision, charts: Sequence[CellChart]) -> GluedCurve:
    if len(charts) != len(sub.cells):
        raise GluingError("one chart per cell is required")
    for i, (c, ch) in enumerate(zip(sub.cells, charts)):
        if ch.cell != c:
            raise GluingError(f"chart {i} is drawn on {ch.cell!r}, not on cell {c!r}")
    x0, y0, _, _ = sub.domain.bbox()
    offset = (x0, y0)
    if offset != (0, 0):
        charts = [ch.translate(-x0, -y0) for ch in charts]
        sub = Subdivision.from_cells(sub.domain.translate(-x0, -y0),
                                     [c.translate(-x0, -y0) for c in sub.cells])
    domain = sub.domain

    polylines: list[GluedPolyline] = []
    # endpoint bookkeeping: (edge key, quadrant) -> list of (param, cell, polyline idx, end, local pt)
    ends: dict = defaultdict(list)
    nodes: list[GlobalNode] = []
    for ci, ch in enumerate(charts):
        edges = ch.cell.edges()
        for q in QUADRANTS:
            for poly, closed in ch.polylines(q):
                idx = len(polylines)
                polylines.append(GluedPolyline(list(poly), closed, ci, q))
                if closed:
                    continue
                for end, p in ((0, poly[0]), (1, poly[-1])):
                    for e in edges:
                        if on_segment(e.a, e.b, p):
                            key = e.key()
                            base = LatticeSegment(*key)
                            ends[(key, q)].append((_edge_param(base, p), ci, idx, end))
                            break
                    else:
                        raise GluingError(f"cell {ci} quadrant {q}: arc end {_fmt(p)} is off the boundary")
            for n in ch.quadrants[q].nodes:
                nodes.append(GlobalNode(_to_global(n.at, q), n.kind, ci, q))

    links: list[Link] = []
    local_pos: dict = {}  # (polyline, end) -> snapped unsigned point

    def snap(e: LatticeSegment, items_a, items_b, kind, qa, qb):
        if len(items_a) != len(items_b):
            raise GluingError(
                f"edge {_fmt(e.a)}-{_fmt(e.b)}: {len(items_a)} crossings in quadrant {qa} "
                f"against {len(items_b)} in quadrant {qb}" if kind != "shared" else
                f"edge {_fmt(e.a)}-{_fmt(e.b)} quadrant {qa}: cells carry {len(items_a)} and "
                f"{len(items_b)} crossings")
        for (ta, _, ia, ea), (tb, _, ib, eb) in zip(items_a, items_b):
            t = (ta + tb) / 2
            p = (e.a.x + t * (e.b.x - e.a.x), e.a.y + t * (e.b.y - e.a.y))
            local_pos[(ia, ea)] = p
            local_pos[(ib, eb)] = p
            links.append(Link((ia, ea), (ib, eb), kind, e, (qa, qb)))

    shared_keys = {seg.key(): (i, j) for i, j, seg in sub.shared_edges}
    identifications = []
    for de in domain.edges():
        # primitive outward normal of a CCW edge
        dx, dy = de.b.x - de.a.x, de.b.y - de.a.y
        from math import gcd
        g = gcd(abs(dx), abs(dy))
        nx_, ny_ = dy // g, -dx // g
        for q in QUADRANTS:
            e1, e2 = QUADRANT_BITS[q]
            q2 = BITS_QUADRANT[((e1 + nx_) % 2, (e2 + ny_) % 2)]
            if QUADRANTS.index(q) < QUADRANTS.index(q2):
                identifications.append((de, q, q2))
    for e_key in sorted({k for k, _ in ends} | set(shared_keys)):
        seg = LatticeSegment(*e_key)
        if e_key in shared_keys:
            i, j = shared_keys[e_key]
            for q in QUADRANTS:
                items = sorted(ends.get((e_key, q), []))
                snap(seg, [t for t in items if t[1] == i], [t for t in items if t[1] == j], "shared", q, q)
    for de, q, q2 in identifications:
        # the whole domain edge may be split among several cells; gather all pieces on it
        items_a, items_b = [], []
        for (key, qq), items in ends.items():
            if key in shared_keys:
                continue
            s = LatticeSegment(*key)
            if not (de.contains(s.a) and de.contains(s.b)):
                continue
            for tpar, ci, idx, end in items:
                p = polylines[idx].points[0 if end == 0 else -1]
                entry = (_edge_param(de, p), ci, idx, end)
                if qq == q:
                    items_a.append(entry)
                elif qq == q2:
                    items_b.append(entry)
        items_a.sort()
        items_b.sort()
        # copies coincide in the plane exactly when the flipped coordinates vanish on the edge
        e1, e2 = QUADRANT_BITS[q]
        f1, f2 = QUADRANT_BITS[q2]
        on_axis = (e1 == f1 or (de.a.x == 0 and de.b.x == 0)) and (e2 == f2 or (de.a.y == 0 and de.b.y == 0))
        snap(de, items_a, items_b, "axis" if on_axis else "outer", q, q2)
    for (idx, end), p in local_pos.items():
        pl = polylines[idx]
        pl.points[0 if end == 0 else -1] = p
    for pl in polylines:
        pl.points = [_to_global(p, pl.quadrant) for p in pl.points]
    g = GluedCurve(domain, sub, polylines, links, nodes, identifications, offset)
    _check_glued_embedding(g)
    return g


def _check_glued_embedding(g: GluedCurve):
    segs, owner = [], []
    for pi, pl in enumerate(g.polylines):
        for si, s in enumerate(_segments_of(pl.points, pl.closed)):
            segs.append(s)
            owner.append((pi, si, pl.closed, len(pl.points)))
    if not segs:
        return
    m = common_denominator(p for s in segs for p in s)
    isegs = [(scaled(a, m), scaled(b, m)) for a, b in segs]
    joints = {scaled(n.at, m) for n in g.nodes}
    for ln in g.links:
        if ln.kind != "outer":
            pl = g.polylines[ln.a[0]]
            joints.add(scaled(pl.points[0 if ln.a[1] == 0 else -1], m))

    def allowed(i, j, shared):
        if shared <= joints:
            return True
        pi, si, closed, n = owner[i]
        pj, sj, _, _ = owner[j]
        if pi != pj:
            return False
        nseg = n if closed else n - 1
        return abs(si - sj) == 1 or (closed and {si, sj} == {0, nseg - 1})

    bad = find_bad_crossings(isegs, allowed)
    if bad:
        i, _ = bad[0]
        raise GluingError(f"glued curve self-intersects near {_fmt(segs[i][0])}-{_fmt(segs[i][1])}; "
                          "crossings must be declared as nodes")


# ---------------------------------------------------------------------------
# torus arrangement


@dataclass
class PlanarFace:
    cycle: int  # index into TorusArrangement.cycles
    holes: list[int]
    torus_face: int = -1

    @property
    def chi(self) -> int:
        return 1 - len(self.holes)


@dataclass
class TorusFace:
    planar: list[int]
    chi: int
    disk: bool
    boundary_components: frozenset
    contains_corner: bool


@dataclass
class NodeRecord:
    vertex: int
    at: Point
    sectors_planar: tuple[int, int, int, int]  # CCW order; opposite sectors are i and i+2
    sectors: tuple[int, int, int, int]  # torus faces


@dataclass
class TorusArrangement:
    curve: GluedCurve
    scale: int
    vertices: list[tuple[int, int]]
    he_origin: list[int]
    he_next: list[int]
    he_face: list[int]  # planar face, -1 for the unbounded outside of R
    he_polyline: list[int]  # -1 for boundary-of-R half-edges
    cycles: list[list[int]]
    planar_faces: list[PlanarFace]
    faces: list[TorusFace]
    boundary_pairs: list[tuple[int, int, str]]  # (planar face, planar face, "x" or "y")
    nodes: list[NodeRecord]
    curve_vertices: int
    curve_edges: int
    component_of_polyline: list[int]
    component_classes: list[tuple[int, int]]
    component_has_node: list[bool]

    @staticmethod
    def twin(h: int) -> int:
        return h ^ 1

    @property
    def euler_ok(self) -> bool:
        return self.curve_vertices - self.curve_edges + sum(f.chi for f in self.faces) == 0

    @property
    def V(self) -> int:
        return self.curve_vertices

    @property
    def E(self) -> int:
        return self.curve_edges

    @property
    def F(self) -> int:
        return len(self.faces)

    def curve_edge_faces(self):
        """(planar face left, planar face right) for every curve edge."""
        for h in range(0, len(self.he_origin), 2):
            if self.he_polyline[h] >= 0:
                yield self.he_face[h], self.he_face[h + 1]


def build_torus_arrangement(g: GluedCurve) -> TorusArrangement:
    dom = g.domain
    if not dom.is_rectangle():
        raise ChartError("torus quotient is implemented for rectangles only")
    _, _, a, b = dom.bbox()
    pts_all = [p for pl in g.polylines for p in pl.points]
    m = common_denominator(pts_all) if pts_all else 1
    A, B = a * m, b * m

    vid: dict = {}
    verts: list = []

    def vert(p):
        if p not in vid:
            vid[p] = len(verts)
            verts.append(p)
        return vid[p]

    edges: list[tuple[int, int, int]] = []  # (u, v, polyline or -1)
    seen_edges = set()
    for pi, pl in enumerate(g.polylines):
        ip = [scaled(p, m) for p in pl.points]
        for s, t in _segments_of(ip, pl.closed):
            u, v = vert(s), vert(t)
            if u == v or (min(u, v), max(u, v)) in seen_edges:
                raise ChartError("degenerate or repeated curve segment")
            seen_edges.add((min(u, v), max(u, v)))
            edges.append((u, v, pi))
    n_curve_vertices_R = len(verts)
    n_curve_edges = len(edges)
    # boundary of R, split at curve endpoints and corners
    sides = {
        "bottom": [(-A, -B), (A, -B)], "right": [(A, -B), (A, B)],
        "top": [(A, B), (-A, B)], "left": [(-A, B), (-A, -B)],
    }
    on_side = defaultdict(set)
    for p in list(vid):
        if p[1] == -B:
            on_side["bottom"].add(p)
        if p[0] == A:
            on_side["right"].add(p)
        if p[1] == B:
            on_side["top"].add(p)
        if p[0] == -A:
            on_side["left"].add(p)
    bseg = {}
    for name, (s, t) in sides.items():
        pts = sorted(on_side[name] | {s, t},
                     key=lambda p: (p[0] - s[0]) * (t[0] - s[0]) + (p[1] - s[1]) * (t[1] - s[1]))
        segs = []
        for p, q in zip(pts, pts[1:]):
            u, v = vert(p), vert(q)
            segs.append(len(edges))
            edges.append((u, v, -1))
        bseg[name] = segs
    nv = len(verts)
    he_origin, he_target, he_poly = [], [], []
    for u, v, pi in edges:
        he_origin += [u, v]
        he_target += [v, u]
        he_poly += [pi, pi]
    out = defaultdict(list)
    for h, u in enumerate(he_origin):
        out[u].append(h)
    pos = {}
    for u, hs in out.items():
        hs.sort(key=lambda h: angle_key((verts[he_target[h]][0] - verts[u][0],
                                         verts[he_target[h]][1] - verts[u][1])))
        for i, h in enumerate(hs):
            pos[h] = i
    nh = len(he_origin)
    he_next = [0] * nh
    for h in range(nh):
        v = he_target[h]
        tw = h ^ 1
        lst = out[v]
        he_next[h] = lst[(pos[tw] - 1) % len(lst)]
    cycle_of = [-1] * nh
    cycles: list[list[int]] = []
    for h in range(nh):
        if cycle_of[h] >= 0:
            continue
        cyc = []
        x = h
        while cycle_of[x] < 0:
            cycle_of[x] = len(cycles)
            cyc.append(x)
            x = he_next[x]
        cycles.append(cyc)
    area = [signed_area2([verts[he_origin[h]] for h in c]) for c in cycles]
    outer = None
    positives, holes = [], []
    for ci, c in enumerate(cycles):
        if area[ci] > 0:
            positives.append(ci)
        elif any(he_poly[h] < 0 for h in c):
            outer = ci
        else:
            holes.append(ci)
    if outer is None:
        raise ChartError("could not identify the outside of the fundamental rectangle")
    planar_faces = [PlanarFace(ci, []) for ci in positives]
    face_of_cycle = {ci: fi for fi, ci in enumerate(positives)}
    polys = {ci: [verts[he_origin[h]] for h in cycles[ci]] for ci in positives}
    for hc in holes:
        p = verts[he_origin[cycles[hc][0]]]
        best = None
        for ci in positives:
            if best is not None and area[ci] >= area[best]:
                continue
            if point_in_polygon(p, polys[ci]) == 1:
                best = ci
        if best is None:
            raise ChartError("floating curve component lies outside every face")
        planar_faces[face_of_cycle[best]].holes.append(hc)
        face_of_cycle[hc] = face_of_cycle[best]
    he_face = [face_of_cycle.get(cycle_of[h], -1) for h in range(nh)]

    # identify boundary segments of opposite sides
    def inner_face(e):
        h = 2 * e
        return he_face[h] if he_face[h] >= 0 else he_face[h + 1]

    pairs = []
    for s1, s2, axis in (("left", "right", "x"), ("bottom", "top", "y")):
        l1, l2 = bseg[s1], list(reversed(bseg[s2]))
        if len(l1) != len(l2):
            raise ChartError("crossings on identified sides do not match")
        for e1, e2 in zip(l1, l2):
            pairs.append((inner_face(e1), inner_face(e2), axis))
    parent = list(range(len(planar_faces)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f1, f2, _ in pairs:
        r1, r2 = find(f1), find(f2)
        if r1 != r2:
            parent[max(r1, r2)] = min(r1, r2)
    roots = sorted({find(i) for i in range(len(planar_faces))})
    tindex = {r: k for k, r in enumerate(roots)}
    for i, pf in enumerate(planar_faces):
        pf.torus_face = tindex[find(i)]
    corner_face = planar_faces[inner_face(bseg["bottom"][0])].torus_face
    chis = [0] * len(roots)
    members = [[] for _ in roots]
    for i, pf in enumerate(planar_faces):
        chis[pf.torus_face] += pf.chi
        members[pf.torus_face].append(i)
    for f1, _, _ in pairs:
        chis[planar_faces[f1].torus_face] -= 1
    chis[corner_face] += 1

    # curve components and classes
    comps = g.components()
    comp_of = [0] * len(g.polylines)
    for ci, grp in enumerate(comps):
        for i in grp:
            comp_of[i] = ci
    classes = [[0, 0] for _ in comps]
    for ln in g.links:
        if ln.kind == "outer":
            e = ln.edge
            vertical = e.a.x == e.b.x
            classes[comp_of[ln.a[0]]][0 if vertical else 1] ^= 1
    node_pts = {scaled(n.at, m): n for n in g.nodes}
    has_node = [False] * len(comps)
    bcomp = [set() for _ in roots]
    for h in range(nh):
        if he_poly[h] >= 0 and he_face[h] >= 0:
            bcomp[planar_faces[he_face[h]].torus_face].add(comp_of[he_poly[h]])
    nodes = []
    for p, n in sorted(node_pts.items()):
        v = vid.get(p)
        if v is None:
            raise ChartError(f"node {_fmt(n.at)} is not on the curve")
        hs = out[v]
        if n.kind == "node":
            if len(hs) != 4:
                raise ChartError(f"node {_fmt(n.at)} has degree {len(hs)}")
            sp_ = tuple(he_face[h] for h in hs)
            nodes.append(NodeRecord(v, n.at, sp_, tuple(planar_faces[f].torus_face for f in sp_)))
        for h in hs:
            has_node[comp_of[he_poly[h]]] = True
    for v, hs in out.items():
        curve_deg = sum(1 for h in hs if he_poly[h] >= 0)
        p = verts[v]
        is_bd = abs(p[0]) == A or abs(p[1]) == B
        if p in node_pts or is_bd:
            continue
        if curve_deg != 2:
            raise ChartError(f"curve vertex {p} has degree {curve_deg}; crossings must be declared as nodes")
    faces = []
    for k in range(len(roots)):
        faces.append(TorusFace(members[k], chis[k], chis[k] == 1, frozenset(bcomp[k]), k == corner_face))
    # curve vertices on the torus: far-side crossings are counted once per identified pair
    outer_links = sum(1 for ln in g.links if ln.kind == "outer")
    arr = TorusArrangement(
        curve=g, scale=m, vertices=verts, he_origin=he_origin, he_next=he_next, he_face=he_face,
        he_polyline=he_poly, cycles=cycles, planar_faces=planar_faces, faces=faces,
        boundary_pairs=pairs, nodes=nodes, curve_vertices=n_curve_vertices_R - outer_links,
        curve_edges=n_curve_edges, component_of_polyline=comp_of,
        component_classes=[tuple(c) for c in classes], component_has_node=has_node)
    if not arr.euler_ok:
        raise ChartError("Euler characteristic check failed on the torus arrangement")
    return arr


# ---------------------------------------------------------------------------
# summaries


@dataclass(frozen=True)
class CurveSummary:
    components: int
    ovals: int
    nodes: int
    cusps: int
    per_quadrant: dict
    per_quadrant_nodes: dict
    classes: tuple

    def line(self) -> str:
        return f"components: {self.components} ({self.ovals} ovals), nodes: {self.nodes}"


def curve_summary(g: GluedCurve, arr: TorusArrangement | None = None) -> CurveSummary:
    arr = build_torus_arrangement(g) if arr is None else arr
    comps = g.components()
    ovals = 0
    for ci, grp in enumerate(comps):
        if (len(grp) >= 1 and not arr.component_has_node[ci] and arr.component_classes[ci] == (0, 0)):
            ovals += 1
    cusps = sum(1 for n in g.nodes if n.kind == "cusp")
    return CurveSummary(len(comps), ovals, g.node_count, cusps, g.quadrant_components(),
                        g.quadrant_nodes(), tuple(arr.component_classes))


def empty_ovals(arr: TorusArrangement) -> list[tuple[int, int]]:
    """(component, torus face) for each oval bounding a disk face with no other curve."""
    out = []
    for fi, f in enumerate(arr.faces):
        if f.disk and len(f.boundary_components) == 1:
            (c,) = f.boundary_components
            if not arr.component_has_node[c] and arr.component_classes[c] == (0, 0):
                out.append((c, fi))
    return out


def merge_charts(domain: LatticePolygon, charts: Sequence[CellChart]) -> CellChart:
    """Concatenate charts whose crossings on shared edges coincide exactly.

    The result is one chart on ``domain``; arcs end on its boundary.
    """
    out = {}
    for q in QUADRANTS:
        pieces = []
        nodes = []
        for ch in charts:
            pieces.extend((list(p), c) for p, c in ch.polylines(q))
            nodes.extend(ch.quadrants[q].nodes)
        ovals = [p for p, c in pieces if c]
        open_ = [p for p, c in pieces if not c]
        at = defaultdict(list)
        for k, p in enumerate(open_):
            for end in (0, 1):
                pt = p[0] if end == 0 else p[-1]
                if not domain.on_boundary(pt):
                    at[pt].append((k, end))
        for pt, lst in at.items():
            if len(lst) != 2:
                raise GluingError(f"quadrant {q}: {len(lst)} curve ends meet at {_fmt(pt)}")
        used = [False] * len(open_)

        def walk(k, end):
            # start at the free end `end` of piece k and follow the joins
            chain = []
            while True:
                used[k] = True
                p = open_[k] if end == 0 else list(reversed(open_[k]))
                chain.extend(p if not chain else p[1:])
                tail = p[-1]
                nxt = [x for x in at.get(tail, []) if not (x[0] == k and x[1] == (1 - end))]
                if not nxt:
                    return chain, tail
                k, end = nxt[0]
                if used[k]:
                    return chain, None

        arcs = []
        for k, p in enumerate(open_):
            if used[k]:
                continue
            for end in (0, 1):
                pt = p[0] if end == 0 else p[-1]
                if domain.on_boundary(pt):
                    chain, _ = walk(k, end)
                    arcs.append(chain)
                    break
        for k, p in enumerate(open_):
            if used[k]:
                continue
            chain, _ = walk(k, 0)
            ovals.append(chain[:-1])
        out[q] = QuadrantChart(arcs=arcs, ovals=ovals, nodes=nodes)
    return CellChart(domain, out)


def triangle_chart(cell: LatticePolygon, f: SparsePolynomial) -> CellChart:
    """Combinatorial chart of a trinomial on a unimodular triangle.

    In each quadrant where the twisted signs of the three vertices are not all
    equal the curve is one segment joining the midpoints of the two edges
    with a sign change.
    """
    verts = list(cell.vertices)
    if len(verts) != 3 or abs(signed_area2([(v.x, v.y) for v in verts])) != 1:
        raise ChartError("triangle_chart needs a unimodular triangle")
    if set(f.support) != set(verts):
        raise ChartError("the polynomial must be supported on the triangle's vertices")
    out = {}
    for q in QUADRANTS:
        s1, s2 = quadrant_signs(q)
        sg = {v: (1 if f[v] > 0 else -1) * s1 ** v.x * s2 ** v.y for v in verts}
        mids = [((Fraction(a.x + b.x, 2)), Fraction(a.y + b.y, 2))
                for a, b in zip(verts, verts[1:] + verts[:1]) if sg[a] != sg[b]]
        out[q] = QuadrantChart(arcs=[mids]) if mids else EMPTY
    return CellChart(cell, out)
