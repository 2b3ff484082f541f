"""Patchworks on a grid of unit squares.

A grid patchwork is a sign at every lattice point of [0,a] x [0,b] plus, for
every unit square whose four signs contain an even number of minus signs, a
choice among ``A`` (the corners (i,j), (i+1,j+1) are joined through the
square in the one quadrant where the square's signs alternate), ``B`` (the
other diagonal) or ``N`` (the square polynomial factors into two binomials
and the chart has a node there).

Realisation: the coefficient at (i,j) is sign * 2**e(i,j) * t**nu(i,j) with
nu = i^2 + j^2 (affine on each unit square) and e chosen so that the mixed
difference e(i,j) + e(i+1,j+1) - e(i+1,j) - e(i,j+1) is +1, -1 or 0 for
A, B, N.  The square polynomial a + bx + cy + dxy is singular exactly when
ad = bc, and otherwise joins the pair of corners with the larger product.

``torus_topology`` reads the topology straight from the grid (regions are
unions of corner neighbourhoods).  It is independent of the PL engine in
:mod:`viropatch.charts` and is used to cross-check it.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .charts import CellChart, ChartNode, QuadrantChart
from .lattice import LatticePolygon
from .polynomials import QUADRANTS, BITS_QUADRANT, SparsePolynomial

HALF = Fraction(1, 2)


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class GridPatchwork:
    signs: tuple[tuple[int, ...], ...]  # signs[j][i], rows j = 0..b
    choices: tuple[tuple[str, ...], ...]  # choices[j][i] for the square [i,i+1] x [j,j+1]; "-" if odd

    def __post_init__(self):
        signs = tuple(tuple(int(s) for s in row) for row in self.signs)
        if not signs or any(len(r) != len(signs[0]) for r in signs):
            raise GridError("sign table must be rectangular")
        if any(s not in (1, -1) for r in signs for s in r):
            raise GridError("signs must be +1 or -1")
        object.__setattr__(self, "signs", signs)
        a, b = len(signs[0]) - 1, len(signs) - 1
        ch = tuple(tuple(r) for r in self.choices)
        if len(ch) != b or any(len(r) != a for r in ch):
            raise GridError("choice table must have one entry per unit square")
        fixed = []
        for j in range(b):
            row = []
            for i in range(a):
                c = ch[j][i]
                if self.even(i, j):
                    if c not in ("A", "B", "N"):
                        raise GridError(f"square ({i},{j}) needs a choice A, B or N")
                    row.append(c)
                else:
                    if c == "N":
                        raise GridError(f"square ({i},{j}) has an odd sign pattern and cannot be nodal")
                    row.append("-")
            fixed.append(tuple(row))
        object.__setattr__(self, "choices", tuple(fixed))

    # -- basic data -------------------------------------------------------
    @classmethod
    def from_strings(cls, sign_rows: Sequence[str], choice_rows: Sequence[str]) -> "GridPatchwork":
        """Rows listed bottom to top; signs as '+'/'-', choices as 'A'/'B'/'N'/'-'."""
        signs = [[1 if c == "+" else -1 for c in r] for r in sign_rows]
        return cls(signs, [list(r) for r in choice_rows])

    def to_strings(self) -> tuple[list[str], list[str]]:
        return (["".join("+" if s > 0 else "-" for s in r) for r in self.signs],
                ["".join(r) for r in self.choices])

    @property
    def width(self) -> int:
        return len(self.signs[0]) - 1

    @property
    def height(self) -> int:
        return len(self.signs) - 1

    def sign(self, i: int, j: int) -> int:
        return self.signs[j][i]

    def even(self, i: int, j: int) -> bool:
        s = self.signs
        return s[j][i] * s[j][i + 1] * s[j + 1][i] * s[j + 1][i + 1] > 0

    def nodal_squares(self) -> list[tuple[int, int]]:
        return [(i, j) for j in range(self.height) for i in range(self.width) if self.choices[j][i] == "N"]

    @property
    def node_count(self) -> int:
        return len(self.nodal_squares())

    def special_quadrant(self, i: int, j: int) -> str | None:
        """The quadrant where the square's twisted signs alternate (even squares only)."""
        if not self.even(i, j):
            return None
        s = self.signs
        for q in QUADRANTS:
            e1, e2 = _bits(q)
            tw = [s[j + dj][i + di] * (-1) ** (e1 * (i + di) + e2 * (j + dj)) for dj in (0, 1) for di in (0, 1)]
            if tw[0] == tw[3] and tw[1] == tw[2] and tw[0] != tw[1]:
                return q
        raise AssertionError("even square without an alternating quadrant")

    # -- transforms ---------------------------------------------------------
    def flip_rows(self) -> "GridPatchwork":
        """Grid of y^b f(x, 1/y)."""
        return GridPatchwork(tuple(reversed(self.signs)), tuple(reversed(self.choices)))

    def rows(self, j0: int, j1: int) -> "GridPatchwork":
        return GridPatchwork(self.signs[j0:j1 + 1], self.choices[j0:j1])

    def stack(self, other: "GridPatchwork") -> "GridPatchwork":
        if self.signs[-1] != other.signs[0]:
            raise GridError("stacked grids disagree on the shared row")
        return GridPatchwork(self.signs + other.signs[1:], self.choices + other.choices)

    def negated(self) -> "GridPatchwork":
        return GridPatchwork(tuple(tuple(-s for s in r) for r in self.signs), self.choices)

    # -- realisation --------------------------------------------------------
    def mixed_differences(self) -> list[list[int]]:
        return [[{"A": 1, "B": -1, "N": 0, "-": 0}[c] for c in row] for row in self.choices]

    def exponents(self, row0: Sequence[int] | None = None, col0: Sequence[int] | None = None) -> list[list[int]]:
        """Integer e(i,j) with the prescribed mixed differences and given first row / column."""
        a, b = self.width, self.height
        D = self.mixed_differences()
        row0 = list(row0) if row0 is not None else [0] * (a + 1)
        col0 = list(col0) if col0 is not None else [row0[0]] * (b + 1)
        if len(row0) != a + 1 or len(col0) != b + 1 or row0[0] != col0[0]:
            raise GridError("boundary exponent data has the wrong shape")
        e = [[0] * (a + 1) for _ in range(b + 1)]
        e[0] = row0[:]
        for j in range(1, b + 1):
            e[j][0] = col0[j]
            for i in range(1, a + 1):
                e[j][i] = D[j - 1][i - 1] + e[j - 1][i] + e[j][i - 1] - e[j - 1][i - 1]
        return e

    def coefficients(self, exps: Sequence[Sequence[int]]) -> dict[tuple[int, int], Fraction]:
        return {(i, j): self.signs[j][i] * Fraction(2) ** exps[j][i]
                for j in range(self.height + 1) for i in range(self.width + 1)}

    def square_polynomial(self, i: int, j: int, exps) -> SparsePolynomial:
        c = self.coefficients(exps)
        return SparsePolynomial.from_terms(((di, dj), c[(i + di, j + dj)]) for dj in (0, 1) for di in (0, 1))

    # -- charts -------------------------------------------------------------
    def square_chart(self, i: int, j: int) -> CellChart:
        cell = LatticePolygon.rectangle(i, j, i + 1, j + 1)
        mids = {"b": (i + HALF, Fraction(j)), "r": (Fraction(i + 1), j + HALF),
                "t": (i + HALF, Fraction(j + 1)), "l": (Fraction(i), j + HALF)}
        centre = (i + HALF, j + HALF)
        out = {}
        for q in QUADRANTS:
            e1, e2 = _bits(q)
            tw = {(di, dj): self.signs[j + dj][i + di] * (-1) ** (e1 * (i + di) + e2 * (j + dj))
                  for di in (0, 1) for dj in (0, 1)}
            cross = [k for k, (p, r) in {"b": ((0, 0), (1, 0)), "r": ((1, 0), (1, 1)),
                                          "t": ((0, 1), (1, 1)), "l": ((0, 0), (0, 1))}.items()
                     if tw[p] != tw[r]]
            arcs, nodes = [], []
            if len(cross) == 2:
                arcs.append([mids[cross[0]], mids[cross[1]]])
            elif len(cross) == 4:
                c = self.choices[j][i]
                if c == "N":
                    arcs += [[mids["b"], centre, mids["t"]], [mids["l"], centre, mids["r"]]]
                    nodes.append(ChartNode(centre, "node"))
                elif c == "A":  # corners (0,1) and (1,0) are cut off
                    arcs += [[mids["l"], mids["t"]], [mids["b"], mids["r"]]]
                else:
                    arcs += [[mids["b"], mids["l"]], [mids["r"], mids["t"]]]
            out[q] = QuadrantChart(arcs=arcs, nodes=nodes)
        return CellChart(cell, out)

    def square_charts(self) -> list[CellChart]:
        """Charts of the unit squares in the cell order of ``regular_subdivision``."""
        return [self.square_chart(i, j) for j in range(self.height) for i in range(self.width)]

    def block_chart(self) -> CellChart:
        """The glued chart of the whole rectangle as a single cell chart."""
        from .charts import merge_charts

        dom = LatticePolygon.rectangle(0, 0, self.width, self.height)
        return merge_charts(dom, self.square_charts())

    # -- topology straight from the grid -------------------------------------
    def torus_topology(self) -> "GridTopology":
        return GridTopology(self)


def _bits(q):
    return {"++": (0, 0), "-+": (1, 0), "+-": (0, 1), "--": (1, 1)}[q]


class _UF:
    def __init__(self):
        self.p = {}

    def find(self, x):
        p = self.p
        p.setdefault(x, x)
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[rb] = ra


@dataclass(frozen=True)
class GridFace:
    sign: int
    chi: int
    vertices: frozenset
    node_sector: bool

    @property
    def empty_oval(self) -> bool:
        return self.chi == 1 and not self.node_sector


class GridTopology:
    """Faces, curve components and the blown-up sign regions of a grid patchwork on the torus."""

    def __init__(self, g: GridPatchwork):
        a, b = g.width, g.height
        if a % 2 or b % 2:
            raise GridError("torus topology from the grid needs even width and height")
        self.grid = g
        xs = range(-a + 1, a + 1)
        ys = range(-b + 1, b + 1)

        def norm(X, Y):
            if X == -a:
                X = a
            if Y == -b:
                Y = b
            return X, Y

        def tsign(X, Y):
            s = g.signs[abs(Y)][abs(X)]
            if X < 0 and abs(X) % 2:
                s = -s
            if Y < 0 and abs(Y) % 2:
                s = -s
            return s

        verts = [(X, Y) for Y in ys for X in xs]
        sign = {v: tsign(*v) for v in verts}
        uf = _UF()
        edges = []  # complex edges (u, v)
        full = defaultdict(int)
        curve = _UF()
        bands = []  # (u, v, sign) joins at nodes
        node_corners = set()
        for v in verts:
            uf.find(v)

        def edge_key(p, r):
            p, r = norm(*p), norm(*r)
            return (p, r) if p <= r else (r, p)

        for Y in range(-b, b):
            for X in range(-a, a):
                c00, c10, c01, c11 = (norm(X, Y), norm(X + 1, Y), norm(X, Y + 1), norm(X + 1, Y + 1))
                s = {c00: sign[c00], c10: sign[c10], c01: sign[c01], c11: sign[c11]}
                # grid edges: count each once via the square below/left of it
                for p, r in ((c00, c10), (c00, c01)):
                    if s[p] == s[r]:
                        edges.append((p, r))
                        uf.union(p, r)
                sides = {"b": (c00, c10), "r": (c10, c11), "t": (c01, c11), "l": (c00, c01)}
                cross = {k: edge_key(*v) for k, v in sides.items() if s[v[0]] != s[v[1]]}
                for k in cross:
                    curve.find(cross[k])
                if len(cross) == 0:
                    full[(X, Y)] = 1
                elif len(cross) == 2:
                    k1, k2 = cross
                    curve.union(cross[k1], cross[k2])
                elif len(cross) == 4:
                    i = X if X >= 0 else -X - 1
                    j = Y if Y >= 0 else -Y - 1
                    choice = g.choices[j][i]
                    if choice == "N":
                        for k in ("r", "t", "l"):
                            curve.union(cross["b"], cross[k])
                        for pair in ((c00, c11), (c10, c01)):
                            bands.append((pair[0], pair[1], s[pair[0]]))
                        node_corners.update((c00, c10, c01, c11))
                    else:
                        flipped = (X < 0) != (Y < 0)
                        joins_main = (choice == "A") != flipped  # joins global c00-c11
                        if joins_main:
                            edges.append((c00, c11))
                            uf.union(c00, c11)
                            curve.union(cross["l"], cross["t"])
                            curve.union(cross["b"], cross["r"])
                        else:
                            edges.append((c10, c01))
                            uf.union(c10, c01)
                            curve.union(cross["b"], cross["l"])
                            curve.union(cross["r"], cross["t"])
        faces = defaultdict(lambda: [set(), 0, 0])
        for v in verts:
            faces[uf.find(v)][0].add(v)
        for p, r in edges:
            faces[uf.find(p)][1] += 1
        for Y in range(-b, b):
            for X in range(-a, a):
                if full.get((X, Y)):
                    faces[uf.find(norm(X, Y))][2] += 1
        self.faces: list[GridFace] = []
        self.face_of = {}
        for root in sorted(faces, key=lambda r: min(faces[r][0])):
            vs, ne, nf = faces[root]
            idx = len(self.faces)
            for v in vs:
                self.face_of[v] = idx
            self.faces.append(GridFace(sign[root], len(vs) - ne + nf, frozenset(vs),
                                       bool(vs & node_corners)))
        self.curve_components = len({curve.find(k) for k in list(curve.p)})
        self.node_count = sum(1 for _ in bands) // 2
        self.bands = bands
        self.edges = edges
        self.sign = sign

    @property
    def chi_faces(self) -> int:
        return sum(f.chi for f in self.faces)

    def empty_oval_signs(self) -> set[int]:
        return {f.sign for f in self.faces if f.empty_oval}

    def empty_ovals(self) -> int:
        return sum(1 for f in self.faces if f.empty_oval)

    def region(self, sign: int) -> list[tuple[int, bool]]:
        """(chi, orientable) of each blown-up component of the region of ``sign``."""
        uf = _UF()
        ids = [k for k, f in enumerate(self.faces) if f.sign == sign]
        for k in ids:
            uf.find(k)
        my_bands = [(u, v) for u, v, s in self.bands if s == sign]
        for u, v in my_bands:
            uf.union(self.face_of[u], self.face_of[v])
        chi = defaultdict(int)
        for k in ids:
            chi[uf.find(k)] += self.faces[k].chi
        for u, v in my_bands:
            chi[uf.find(self.face_of[u])] -= 1
        # orientation: ordinary edges keep it, bands reverse it
        adj = defaultdict(list)
        for p, r in self.edges:
            if self.sign[p] == sign:
                adj[p].append((r, 0))
                adj[r].append((p, 0))
        for u, v in my_bands:
            adj[u].append((v, 1))
            adj[v].append((u, 1))
        colour = {}
        bad = set()
        for k in ids:
            for v0 in self.faces[k].vertices:
                if v0 in colour:
                    continue
                colour[v0] = 0
                stack = [v0]
                while stack:
                    x = stack.pop()
                    for y, tw in adj[x]:
                        want = colour[x] ^ tw
                        if y not in colour:
                            colour[y] = want
                            stack.append(y)
                        elif colour[y] != want:
                            bad.add(uf.find(self.face_of[x]))
        return [(chi[r], r not in bad) for r in sorted(chi)]
