"""Topology of (RP^1)^3 surfaces built as double covers over the torus.

The pipeline is ``sign_regions`` -> ``blow_up_nodes`` -> ``double_cover_topology``.
Faces of the torus arrangement get signs, every node is blown up (its two
negative sectors get joined by a twisted band, and so do its two positive
ones), and the negative part Y- is doubled along its boundary.
"""

from __future__ import annotations

from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .charts import ChartError, TorusArrangement, empty_ovals
from .geometry import point_in_polygon, scaled


class SurfaceError(ValueError):
    pass


# ---------------------------------------------------------------------------
# homology and numerical invariants


@dataclass(frozen=True)
class Tridegree:
    d1: int
    d2: int
    d3: int

    def __post_init__(self):
        if min(self.d1, self.d2, self.d3) < 1:
            raise ValueError("tridegree entries must be positive")

    def normalized(self) -> "Tridegree":
        return Tridegree(*sorted((self.d1, self.d2, self.d3), reverse=True))


@dataclass(frozen=True)
class HomologyClass:
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) % 2 for v in self.values)
        if len(vals) not in (2, 3):
            raise ValueError("classes have rank 2 (torus) or 3 ((RP^1)^3)")
        object.__setattr__(self, "values", vals)

    @property
    def rank(self) -> int:
        return len(self.values)

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        return HomologyClass(tuple(a ^ b for a, b in zip(self.values, other.values)))


def intersection_form(a: HomologyClass, b: HomologyClass) -> int:
    """Pairing of H_2 against H_1 of (RP^1)^3 over Z/2, in the dual bases."""
    if a.rank != 3 or b.rank != 3:
        raise ValueError("intersection form is defined on rank-3 classes")
    return sum(x * y for x, y in zip(a.values, b.values)) % 2


def surface_class(d: Tridegree) -> HomologyClass:
    return HomologyClass((d.d1, d.d2, d.d3))


def hodge_numbers(d1: int, d2: int) -> tuple[int, int]:
    """(h20, h11) of a smooth surface of tridegree (d1, d2, 2)."""
    if d1 < 1 or d2 < 1:
        raise ValueError("degrees must be positive")
    return d1 * d2 - d1 - d2 + 1, 6 * d1 * d2 - 2 * d1 - 2 * d2 + 4


@dataclass(frozen=True)
class BettiBounds:
    h20: int
    h11: int
    b0_bound: int
    b1_bound: int
    b1_max: int
    b1_max_even: int


def betti_bounds(d1: int, d2: int) -> BettiBounds:
    h20, h11 = hodge_numbers(d1, d2)
    raw = 7 * d1 * d2 - 3 * d1 - 3 * d2 + 5
    return BettiBounds(h20, h11, (h20 + h11 + 1) // 2, h20 + h11, raw, raw - (raw % 2))


def total_betti_complex(d1: int, d2: int) -> int:
    """Sum of the Betti numbers of the complex surface: b0 + b2 + b4 = 2 + h20 + h11 + h02."""
    h20, h11 = hodge_numbers(d1, d2)
    return 2 + h20 + h11 + h20


# ---------------------------------------------------------------------------
# signs


@dataclass(frozen=True)
class SignSeed:
    """Where the sign of the branch polynomial is fixed.

    ``kind`` is "face" (value = planar face index), "point" (value = a point
    of R off the curve) or "empty-oval" (value ignored; the sign goes inside
    the first empty oval).
    """

    kind: str
    sign: int
    value: object = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise SurfaceError("seed sign must be +1 or -1")
        if self.kind not in ("face", "point", "empty-oval"):
            raise SurfaceError(f"unknown seed kind {self.kind!r}")


@dataclass(frozen=True)
class NodeSectors:
    at: tuple
    negative: tuple[int, int]  # torus faces of the two negative sectors
    positive: tuple[int, int]


@dataclass
class RegionComplex:
    arrangement: TorusArrangement
    planar_signs: list[int]
    face_signs: list[int]
    nodes: list[NodeSectors]
    blowup_applied: bool = False
    ambient_chi: int = 0
    joins: dict = field(default_factory=lambda: {1: [], -1: []})

    def faces_of_sign(self, sign: int) -> list[int]:
        return [i for i, s in enumerate(self.face_signs) if s == sign]

    def empty_oval_signs(self) -> list[int]:
        return [self.face_signs[f] for _, f in empty_ovals(self.arrangement)]


def locate_point(arr: TorusArrangement, p) -> int:
    """Planar face containing the global point ``p``; raises if ``p`` is on the curve."""
    m = arr.scale
    ip = scaled(p, m)
    best = None
    for fi, pf in enumerate(arr.planar_faces):
        poly = [arr.vertices[arr.he_origin[h]] for h in arr.cycles[pf.cycle]]
        where = point_in_polygon(ip, poly)
        if where == 0:
            raise SurfaceError(f"seed point {tuple(p)} lies on the curve or on the boundary")
        if where == 1:
            area = _area(poly)
            if best is None or area < best[0]:
                best = (area, fi)
    if best is None:
        raise SurfaceError(f"seed point {tuple(p)} is outside the fundamental rectangle")
    fi = best[1]
    for hc in arr.planar_faces[fi].holes:
        poly = [arr.vertices[arr.he_origin[h]] for h in arr.cycles[hc]]
        if point_in_polygon(ip, poly) == 0:
            raise SurfaceError(f"seed point {tuple(p)} lies on the curve")
    return fi


def _area(poly):
    s = 0
    for i in range(len(poly)):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % len(poly)]
        s += x1 * y2 - x2 * y1
    return abs(s)


def sign_regions(arr: TorusArrangement, seed: SignSeed) -> RegionComplex:
    nf = len(arr.planar_faces)
    adj = defaultdict(list)
    for f1, f2 in arr.curve_edge_faces():
        adj[f1].append((f2, 1))
        adj[f2].append((f1, 1))
    _, _, a, b = arr.curve.domain.bbox()
    for f1, f2, axis in arr.boundary_pairs:
        flip = (a if axis == "x" else b) % 2
        adj[f1].append((f2, flip))
        adj[f2].append((f1, flip))
    if seed.kind == "face":
        start = int(seed.value)
        if not 0 <= start < nf:
            raise SurfaceError(f"seed face {start} does not exist")
    elif seed.kind == "point":
        start = locate_point(arr, seed.value)
    else:
        ovals = empty_ovals(arr)
        if not ovals:
            raise SurfaceError("no empty oval to seed the sign from")
        start = arr.faces[ovals[0][1]].planar[0]
    signs = [0] * nf
    signs[start] = seed.sign
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for g, flip in adj[f]:
            want = -signs[f] if flip else signs[f]
            if signs[g] == 0:
                signs[g] = want
                queue.append(g)
            elif signs[g] != want:
                raise SurfaceError("sign propagation is inconsistent: the curve does not bound the sign regions")
    if any(s == 0 for s in signs):
        raise SurfaceError("some faces are not reachable from the seed")
    face_signs = [0] * len(arr.faces)
    for pf, s in zip(arr.planar_faces, signs):
        face_signs[pf.torus_face] = s
    nodes = []
    for nd in arr.nodes:
        s = [signs[f] for f in nd.sectors_planar]
        if not (s[0] == s[2] and s[1] == s[3] and s[0] != s[1]):
            raise SurfaceError(f"node at {tuple(str(c) for c in nd.at)} has non-alternating sector signs")
        if s[0] < 0:
            neg, pos = (nd.sectors[0], nd.sectors[2]), (nd.sectors[1], nd.sectors[3])
        else:
            neg, pos = (nd.sectors[1], nd.sectors[3]), (nd.sectors[0], nd.sectors[2])
        nodes.append(NodeSectors(nd.at, neg, pos))
    return RegionComplex(arr, signs, face_signs, nodes)


def blow_up_nodes(rc: RegionComplex) -> RegionComplex:
    if rc.blowup_applied:
        raise SurfaceError("blow-up already applied")
    joins = {-1: [nd.negative for nd in rc.nodes], 1: [nd.positive for nd in rc.nodes]}
    return replace(rc, blowup_applied=True, ambient_chi=-len(rc.nodes), joins=joins)


# ---------------------------------------------------------------------------
# pieces of Y+ and Y-


@dataclass(frozen=True)
class RegionComponent:
    faces: tuple[int, ...]
    chi: int
    has_boundary: bool
    twisted: bool  # band twisting alone makes it non-orientable
    cycle_classes: tuple[tuple[int, int], ...]  # Z/2 torus classes spanning its cycles

    @property
    def is_disk(self) -> bool:
        return self.chi == 1 and self.has_boundary and not self.twisted


def region_components(rc: RegionComplex, sign: int) -> list[RegionComponent]:
    if not rc.blowup_applied:
        raise SurfaceError("blow up the nodes first")
    arr = rc.arrangement
    faces = rc.faces_of_sign(sign)
    joins = rc.joins[sign]
    parent = {f: f for f in faces}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f1, f2 in joins:
        r1, r2 = find(f1), find(f2)
        if r1 != r2:
            parent[max(r1, r2)] = min(r1, r2)
    groups = defaultdict(list)
    for f in faces:
        groups[find(f)].append(f)
    out = []
    for root in sorted(groups):
        members = groups[root]
        mset = set(members)
        inner = [j for j in joins if j[0] in mset]
        chi = sum(arr.faces[f].chi for f in members) - len(inner)
        bnd = any(arr.faces[f].boundary_components for f in members)
        out.append(RegionComponent(tuple(members), chi, bnd, _twisted(members, inner),
                                   _cycle_classes(arr, rc, members, inner)))
    return out


def _twisted(members, inner) -> bool:
    # each band reverses the torus orientation; orientable iff two-colourable
    colour = {}
    adj = defaultdict(list)
    for a, b in inner:
        if a == b:
            return True
        adj[a].append(b)
        adj[b].append(a)
    for f in members:
        if f in colour:
            continue
        colour[f] = 0
        stack = [f]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in colour:
                    colour[y] = 1 - colour[x]
                    stack.append(y)
                elif colour[y] == colour[x]:
                    return True
    return False


def _cycle_classes(arr: TorusArrangement, rc: RegionComplex, members, inner) -> tuple:
    """Z/2 torus classes of a cycle basis, by potentials over planar pieces."""
    mset = set(members)
    pieces = [i for i, pf in enumerate(arr.planar_faces) if pf.torus_face in mset]
    adj = defaultdict(list)
    for f1, f2, axis in arr.boundary_pairs:
        if arr.planar_faces[f1].torus_face in mset:
            v = (1, 0) if axis == "x" else (0, 1)
            adj[f1].append((f2, v))
            adj[f2].append((f1, v))
    # a band joins two sector pieces at a node, with no translation
    for nd in arr.nodes:
        secs = nd.sectors_planar
        for i in (0, 1):
            a, b = secs[i], secs[i + 2]
            if arr.planar_faces[a].torus_face in mset and (arr.planar_faces[a].torus_face,
                                                            arr.planar_faces[b].torus_face) in set(inner):
                adj[a].append((b, (0, 0)))
                adj[b].append((a, (0, 0)))
    pot = {}
    basis: list[tuple[int, int]] = []
    for s in pieces:
        if s in pot:
            continue
        pot[s] = (0, 0)
        stack = [s]
        while stack:
            x = stack.pop()
            for y, v in adj[x]:
                p = ((pot[x][0] + v[0]) % 2, (pot[x][1] + v[1]) % 2)
                if y not in pot:
                    pot[y] = p
                    stack.append(y)
                else:
                    c = ((p[0] + pot[y][0]) % 2, (p[1] + pot[y][1]) % 2)
                    if c != (0, 0):
                        basis.append(c)
    span = set()
    for c in basis:
        span |= {c} | {((c[0] + s[0]) % 2, (c[1] + s[1]) % 2) for s in span}
    span.discard((0, 0))
    return tuple(sorted(span))


# ---------------------------------------------------------------------------
# the double cover


@dataclass(frozen=True)
class SurfaceComponent:
    chi: int
    orientable: bool

    def __post_init__(self):
        if self.orientable and self.chi % 2:
            raise SurfaceError(f"orientable closed surface with odd Euler characteristic {self.chi}")
        if self.chi > 2 or (not self.orientable and self.chi > 1):
            raise SurfaceError(f"no closed surface has Euler characteristic {self.chi}")

    @property
    def genus_or_crosscaps(self) -> int:
        return (2 - self.chi) // 2 if self.orientable else 2 - self.chi

    @property
    def label(self) -> str:
        if self.orientable:
            g = self.genus_or_crosscaps
            return "S" if g == 0 else f"S{g}"
        return f"N{self.genus_or_crosscaps}"


@dataclass(frozen=True)
class SurfaceTopology:
    components: tuple[SurfaceComponent, ...]

    @property
    def b0(self) -> int:
        return len(self.components)

    @property
    def chi(self) -> int:
        return sum(c.chi for c in self.components)

    @property
    def b1(self) -> int:
        return 2 * self.b0 - self.chi

    def multiset(self) -> Counter:
        return Counter(c.label for c in self.components)

    def describe(self) -> str:
        def order(lbl):
            return (lbl[0] != "S", int(lbl[1:] or 0))
        parts = []
        for lbl in sorted(self.multiset(), key=order):
            n = self.multiset()[lbl]
            parts.append(f"{n}{lbl}" if n > 1 else lbl)
        return " + ".join(parts) if parts else "empty"


def orientability_check(rc: RegionComplex, k: int, l: int) -> list[bool]:
    """Per Y- component: does its double embed orientably?

    A component fails if its band structure is twisted, or if one of its
    cycles has torus class (a, b) with a k + b l odd.
    """
    out = []
    for comp in region_components(rc, -1):
        odd = any((a * k + b * l) % 2 for a, b in comp.cycle_classes)
        out.append(not comp.twisted and not odd)
    return out


def double_cover_topology(rc: RegionComplex, k: int | None = None, l: int | None = None) -> SurfaceTopology:
    if not rc.blowup_applied:
        raise SurfaceError("blow up the nodes first")
    comps = region_components(rc, -1)
    if k is None or l is None:
        orient = [not c.twisted for c in comps]
    else:
        orient = orientability_check(rc, k, l)
    out = []
    for c, o in zip(comps, orient):
        if c.has_boundary:
            out.append(SurfaceComponent(2 * c.chi, o))
        else:
            out.extend([SurfaceComponent(c.chi, o), SurfaceComponent(c.chi, o)])
    st = SurfaceTopology(tuple(out))
    assert st.b1 == 2 * st.b0 - st.chi
    return st


def euler_parity_guard(st: SurfaceTopology) -> bool:
    return all(c.chi % 2 == 0 for c in st.components)


@dataclass(frozen=True)
class RegionTotals:
    chi_Y: int
    chi_plus: int
    chi_minus: int
    b0_minus: int
    plus_disks: int
    nodes: int


def region_totals(rc: RegionComplex) -> RegionTotals:
    plus = region_components(rc, 1)
    minus = region_components(rc, -1)
    cp = sum(c.chi for c in plus)
    cm = sum(c.chi for c in minus)
    # the two sides meet along the smooth curve, a union of circles
    return RegionTotals(cp + cm, cp, cm, len(minus), sum(1 for c in plus if c.is_disk), len(rc.nodes))
