"""Block transforms and the two stacked constructions.

The family of tridegree (2k, 2l, 2) stacks copies of one block P (with 2k
nodes) on the rectangle [0,4k] x [0,4l]; the (4,4,2) surface stacks two
copies of a nodal (8,3) block under a Harnack (8,2) block.  Every block here
is a grid patchwork (see :mod:`viropatch.gridpatch`) together with integer
exponents, so the coefficients sign * 2**e are exact.  The glued curve is the
patchwork of the unit squares under the lift nu(j) + i^2 + j^2, where nu is
the block-level profile; nu only adds convexity along block boundaries, so
the unit squares are the cells and the blocks are unions of them.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from .charts import CellChart, curve_summary, glue_charts, build_torus_arrangement
from .gridpatch import GridError, GridPatchwork
from .lattice import LatticePolygon, LatticeSegment, interior_count
from .polynomials import SparsePolynomial, is_pns
from .subdivision import LiftingFunction, Subdivision, is_convex_subdivision
from .surfaces import (
    SignSeed,
    SurfaceTopology,
    betti_bounds,
    blow_up_nodes,
    double_cover_topology,
    euler_parity_guard,
    hodge_numbers,
    region_components,
    sign_regions,
    total_betti_complex,
)
from .transversality import (
    FinalCheck,
    TransversalitySetup,
    family_level_checks,
    is_s_transversal_nodal,
    theoremfinal_check,
)


class ConstructionError(ValueError):
    pass


class NormalizationWarning(UserWarning):
    """An exponent transform produced negative exponents and was shifted back."""


# ---------------------------------------------------------------------------
# exponent transforms


def _normalize(f: SparsePolynomial, what: str) -> SparsePolynomial:
    low = min(p.y for p in f.support) if f.support else 0
    if low < 0:
        warnings.warn(f"{what}: exponents shifted up by {-low}", NormalizationWarning, stacklevel=3)
        return f.shift(0, -low)
    return f


def flip_y(f: SparsePolynomial, h: int) -> SparsePolynomial:
    """y^h f(x, 1/y): exponent (i, j) goes to (i, h - j)."""
    return _normalize(f.map_exponents(lambda p: (p[0], h - p[1])), f"y^{h} f(x,1/y)")


def shift_y(f: SparsePolynomial, h: int) -> SparsePolynomial:
    """y^(h-1) f(x, y): exponent (i, j) goes to (i, j + h - 1)."""
    return _normalize(f.map_exponents(lambda p: (p[0], p[1] + h - 1)), f"y^{h - 1} f")


def block_P(P: SparsePolynomial, h: int) -> SparsePolynomial:
    """P_h for 2 <= h: flipped into rows 4h-5..4h-1 for odd h, shifted there for even h."""
    if h < 2:
        raise ValueError("P_h is defined for h >= 2")
    return flip_y(P, 4 * h - 1) if h % 2 else shift_y(P, 4 * h - 4)


def block_L(L: SparsePolynomial, h: int) -> SparsePolynomial:
    """L_h (and M_h) on the slab [0,k] x [h-1,h]."""
    if h < 1:
        raise ValueError("L_h is defined for h >= 1")
    return flip_y(L, h) if h % 2 else shift_y(L, h)


# ---------------------------------------------------------------------------
# lifting profiles and slab subdivisions


def _profile(breaks: Sequence[int], slopes: Sequence[int], anchor: tuple[int, int], top: int):
    """Piecewise-linear function of j with the given slopes between breaks."""
    edges = [0, *breaks, top]
    vals = {0: Fraction(0)}
    for (lo, hi), s in zip(zip(edges, edges[1:]), slopes):
        for j in range(lo + 1, hi + 1):
            vals[j] = vals[j - 1] + s
    shift = Fraction(anchor[1]) - vals[anchor[0]]
    return {j: v + shift for j, v in vals.items()}


def family_rows(k: int, l: int) -> list[tuple[str, int, int]]:
    """(name, first row, last row) of the slabs of [0,4k] x [0,4l]."""
    rows = [("P1", 0, 2), ("P1^1", 2, 3)]
    rows += [(f"P{h}", 4 * h - 5, 4 * h - 1) for h in range(2, l + 1)]
    rows.append((f"P{l + 1}", 4 * l - 1, 4 * l))
    return rows


def lifting_profiles(k: int, l: int) -> tuple[LiftingFunction, LiftingFunction, LiftingFunction]:
    if k < 2 or l < 2:
        raise ValueError("k and l must be at least 2")
    delta = LatticePolygon.rectangle(0, 0, 4 * k, 4 * l)
    lam = LatticePolygon.rectangle(0, 0, k, l)
    # slopes -1 on rows 0..2, 0 on 2..3, then h on the slab above level h
    p_breaks = [2, 3] + [4 * h - 1 for h in range(2, l + 1)]
    p_slopes = [-1, 0] + list(range(1, l + 1))
    nu_p = _profile(p_breaks, p_slopes, (2, 0), 4 * l)
    l_breaks = list(range(1, l))
    l_slopes = [-1] + list(range(1, l))
    nu_l = _profile(l_breaks, l_slopes, (1, 0), l)
    fP = LiftingFunction.from_function(delta, lambda i, j: nu_p[j])
    fL = LiftingFunction.from_function(lam, lambda i, j: nu_l[j])
    return fP, fL, fL


def slab_subdivision(width: int, cuts: Sequence[int], top: int) -> Subdivision:
    edges = [0, *cuts, top]
    cells = [LatticePolygon.rectangle(0, lo, width, hi) for lo, hi in zip(edges, edges[1:])]
    return Subdivision.from_cells(LatticePolygon.rectangle(0, 0, width, top), cells)


def family_slabs(k: int, l: int) -> tuple[Subdivision, Subdivision]:
    cuts = [2, 3] + [4 * h - 1 for h in range(2, l + 1)]
    return slab_subdivision(4 * k, cuts, 4 * l), slab_subdivision(k, list(range(1, l)), l)


def profiles_certify(k: int, l: int) -> bool:
    fP, fL, fM = lifting_profiles(k, l)
    sP, sL = family_slabs(k, l)
    return is_convex_subdivision(sP, fP) and is_convex_subdivision(sL, fL) and is_convex_subdivision(sL, fM)


# ---------------------------------------------------------------------------
# grid blocks


@dataclass(frozen=True)
class GridBlock:
    """A grid patchwork with exponents e; coefficient at (i, j) is sign * 2**e."""

    grid: GridPatchwork
    exps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        e = tuple(tuple(int(v) for v in r) for r in self.exps)
        object.__setattr__(self, "exps", e)
        g = self.grid
        if len(e) != g.height + 1 or any(len(r) != g.width + 1 for r in e):
            raise GridError("exponent table does not match the grid")
        for j in range(g.height):
            for i in range(g.width):
                d = e[j][i] + e[j + 1][i + 1] - e[j][i + 1] - e[j + 1][i]
                c = g.choices[j][i]
                if c == "N" and d != 0 or c == "A" and d <= 0 or c == "B" and d >= 0:
                    raise GridError(f"exponents disagree with choice {c} at square ({i},{j})")

    @classmethod
    def build(cls, grid: GridPatchwork, row0=None, col0=None) -> "GridBlock":
        return cls(grid, tuple(map(tuple, grid.exponents(row0, col0))))

    @property
    def polynomial(self) -> SparsePolynomial:
        return SparsePolynomial(self.grid.coefficients(self.exps))

    def chart(self) -> CellChart:
        return self.grid.block_chart()

    def to_json(self) -> dict:
        s, c = self.grid.to_strings()
        return {"signs": s, "choices": c, "exponents": [list(r) for r in self.exps]}

    @classmethod
    def from_json(cls, d: dict) -> "GridBlock":
        return cls(GridPatchwork.from_strings(d["signs"], d["choices"]), d["exponents"])


def grid_from_coefficients(coeffs: dict, width: int, height: int) -> GridPatchwork:
    """Read signs and square choices back from exact coefficients sign * 2**e."""
    signs, choices = [], []
    for j in range(height + 1):
        signs.append([1 if coeffs[(i, j)] > 0 else -1 for i in range(width + 1)])
    for j in range(height):
        row = []
        for i in range(width):
            a, b = coeffs[(i, j)], coeffs[(i + 1, j)]
            c, d = coeffs[(i, j + 1)], coeffs[(i + 1, j + 1)]
            if a * b * c * d < 0:
                row.append("-")
            elif a * d == b * c:
                row.append("N")
            else:
                row.append("A" if abs(a * d) > abs(b * c) else "B")
        choices.append(row)
    return GridPatchwork(signs, choices)


def _log2(v: Fraction) -> int:
    v = abs(Fraction(v))
    n = v.numerator.bit_length() - 1 if v.numerator else 0
    d = v.denominator.bit_length() - 1
    if Fraction(2) ** (n - d) != v:
        raise ConstructionError(f"coefficient {v} is not a signed power of two")
    return n - d


def merge_blocks(pieces: Sequence[tuple[str, SparsePolynomial]]) -> dict:
    """Union of coefficient tables, checking equality on shared monomials."""
    out: dict = {}
    owner: dict = {}
    for name, f in pieces:
        for p, c in f.coefficients.items():
            key = (int(p[0]), int(p[1]))
            if key in out and out[key] != c:
                raise ConstructionError(f"blocks {owner[key]} and {name} disagree at monomial {key}")
            out[key] = c
            owner.setdefault(key, name)
    return out


# ---------------------------------------------------------------------------
# node positions and the general-position certificate


def block_nodes(block: GridBlock, t) -> list[tuple[Fraction, Fraction]]:
    """Nodes in (R*)^2 of the block patchworked at ``t`` with lift i^2 + j^2.

    A nodal square a + b x + c y + d xy = d (x + c/d)(y + b/d) (local
    monomials, coefficients carrying t**nu) has its node at (-c/d, -b/d).
    """
    t = Fraction(t)
    g = block.grid
    coef = g.coefficients(block.exps)
    out = []
    for i, j in g.nodal_squares():
        b_ = coef[(i + 1, j)] * t ** ((i + 1) ** 2 + j ** 2)
        c_ = coef[(i, j + 1)] * t ** (i ** 2 + (j + 1) ** 2)
        d_ = coef[(i + 1, j + 1)] * t ** ((i + 1) ** 2 + (j + 1) ** 2)
        out.append((-c_ / d_, -b_ / d_))
    return out


@dataclass(frozen=True)
class GeneralPosition:
    k: int
    nodes: tuple
    dimension: int
    L: SparsePolynomial | None
    M: SparsePolynomial | None
    irreducible: bool

    @property
    def ok(self) -> bool:
        return self.dimension == 2 and self.irreducible


def _kbasis(k: int):
    return [(p, q) for q in (0, 1) for p in range(k + 1)]


def _irreducible(f: SparsePolynomial) -> bool:
    x, y = sympy.symbols("x y")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** p.x * y ** p.y
               for p, c in f.coefficients.items())
    _, facs = sympy.factor_list(sympy.expand(expr), x, y)
    nonconst = [(g, m) for g, m in facs if sympy.Poly(g, x, y).total_degree() > 0]
    return len(nonconst) == 1 and nonconst[0][1] == 1


def general_position(nodes: Sequence[tuple[Fraction, Fraction]], k: int, seed: int = 0) -> GeneralPosition:
    """Space of (k,1)-polynomials through the nodes, and two irreducible members of it."""
    basis = _kbasis(k)
    rows = [[sympy.Rational(Fraction(x) ** p * Fraction(y) ** q) for p, q in basis] for x, y in nodes]
    mat = sympy.Matrix(rows) if rows else sympy.zeros(0, len(basis))
    kernel = mat.nullspace()
    dim = len(kernel)
    if dim < 2:
        return GeneralPosition(k, tuple(nodes), dim, None, None, False)
    rng = random.Random(seed)
    found = []
    for _ in range(20):
        coeffs = sum((rng.randint(-9, 9) * v for v in kernel), sympy.zeros(len(basis), 1))
        if all(c == 0 for c in coeffs):
            continue
        lcm = sympy.ilcm(*[sympy.fraction(c)[1] for c in coeffs])
        f = SparsePolynomial.from_terms((basis[n], Fraction(int(coeffs[n] * lcm))) for n in range(len(basis)))
        if f.is_zero() or not _irreducible(f):
            continue
        if found and _proportional(found[0], f):
            continue
        found.append(f)
        if len(found) == 2:
            break
    ok = len(found) == 2
    return GeneralPosition(k, tuple(nodes), dim, found[0] if found else None,
                           found[1] if ok else None, ok)


def _proportional(f: SparsePolynomial, g: SparsePolynomial) -> bool:
    if set(f.coefficients) != set(g.coefficients):
        return False
    ratios = {f.coefficients[p] / g.coefficients[p] for p in f.coefficients}
    return len(ratios) == 1


def vanishes_at(f: SparsePolynomial, pts) -> bool:
    return all(f(Fraction(x), Fraction(y)) == 0 for x, y in pts)


# ---------------------------------------------------------------------------
# block sets


@dataclass(frozen=True)
class BlockSet:
    """Blocks of a stacked construction.

    ``kind`` is "family" (blocks P, P1, P1^1 and the top closure, stacked
    on [0,4k] x [0,4l]) or "442" (blocks P on [0,8] x [0,3] and the Harnack
    block H on [0,8] x [0,2]).  L and M are (k,1)-polynomials through the
    nodes of P at parameter ``t``.
    """

    kind: str
    k: int
    l: int
    blocks: dict
    L: SparsePolynomial | None = None
    M: SparsePolynomial | None = None
    t: Fraction = Fraction(1, 8)

    def to_json(self) -> dict:
        from .bundle import q

        out = {"kind": self.kind, "k": self.k, "l": self.l, "t": q(self.t),
               "blocks": {name: b.to_json() for name, b in sorted(self.blocks.items())}}
        for name, f in (("L", self.L), ("M", self.M)):
            if f is not None:
                out[name] = [[[int(p.x), int(p.y)], q(c)] for p, c in sorted(f.coefficients.items())]
        return out

    @classmethod
    def from_json(cls, d: dict) -> "BlockSet":
        def poly(v):
            return SparsePolynomial.from_terms((tuple(p), Fraction(c)) for p, c in v) if v else None

        try:
            blocks = {name: GridBlock.from_json(b) for name, b in d["blocks"].items()}
            return cls(d["kind"], int(d["k"]), int(d["l"]), blocks, poly(d.get("L")), poly(d.get("M")),
                       Fraction(d.get("t", "1/8")))
        except (KeyError, TypeError, ValueError) as e:
            raise ConstructionError(f"construction metadata is malformed: {e}") from None

    # -- stacking -------------------------------------------------------------
    def pieces(self) -> list[tuple[str, SparsePolynomial]]:
        b = self.blocks
        if self.kind == "442":
            P, H = b["P"].polynomial, b["H"].polynomial
            return [("P1", flip_y(P, 3)), ("P2", shift_y(P, 4)), ("P3", shift_y(H, 7))]
        if self.kind == "family":
            P = b["P"].polynomial
            out = [("P1", b["P1"].polynomial), ("P1^1", shift_y(b["P1^1"].polynomial, 3))]
            out += [(f"P{h}", block_P(P, h)) for h in range(2, self.l + 1)]
            out.append((f"P{self.l + 1}", shift_y(b["top"].polynomial, 4 * self.l)))
            return out
        raise ConstructionError(f"unknown construction kind {self.kind!r}")

    @property
    def width(self) -> int:
        return 8 if self.kind == "442" else 4 * self.k

    @property
    def height(self) -> int:
        return 8 if self.kind == "442" else 4 * self.l

    def block_profile(self) -> dict[int, Fraction]:
        if self.kind == "442":
            return {j: Fraction(max(3 - j, 0, j - 6)) for j in range(9)}
        fP, _, _ = lifting_profiles(self.k, self.l)
        return {j: fP((0, j)) for j in range(self.height + 1)}

    def assemble(self) -> tuple[GridPatchwork, dict]:
        coeffs = merge_blocks(self.pieces())
        want = {(i, j) for i in range(self.width + 1) for j in range(self.height + 1)}
        if set(coeffs) != want:
            raise ConstructionError("blocks do not tile the rectangle")
        return grid_from_coefficients(coeffs, self.width, self.height), coeffs

    def lift(self) -> LiftingFunction:
        prof = self.block_profile()
        dom = LatticePolygon.rectangle(0, 0, self.width, self.height)
        return LiftingFunction.from_function(dom, lambda i, j: prof[j] + i * i + j * j)

    def node_blocks(self) -> list[GridBlock]:
        return [self.blocks["P"]] if self.kind == "442" else [self.blocks["P"], self.blocks["P1"]]

    def expected_nodes(self) -> int:
        return 8 if self.kind == "442" else 2 * self.k * self.l


def stacked_cells(bs: BlockSet):
    """Unit-square cells, polynomials and charts of the assembled grid."""
    g, coeffs = bs.assemble()
    cells, polys, charts = [], [], []
    for j in range(g.height):
        for i in range(g.width):
            cells.append(LatticePolygon.rectangle(i, j, i + 1, j + 1))
            polys.append(SparsePolynomial.from_terms(((i + di, j + dj), coeffs[(i + di, j + dj)])
                                                     for dj in (0, 1) for di in (0, 1)))
            charts.append(g.square_chart(i, j))
    return g, cells, polys, charts


# ---------------------------------------------------------------------------
# checks


@dataclass(frozen=True)
class Certificate:
    name: str
    ok: bool
    detail: str = ""


def _margin_text(fc: FinalCheck) -> str:
    return (f"2N+m={fc.main.lhs}<{fc.main.rhs}, m'={fc.second.lhs}<{fc.second.rhs}, "
            f"m''={fc.third.lhs}<{fc.third.rhs}")


def level_checks(bs: BlockSet) -> list[tuple[int, FinalCheck]]:
    if bs.kind == "family":
        return family_level_checks(bs.k, bs.l)
    # second slab [0,8] x [3,6] entered through its bottom edge, with the (2,1) slab [0,2] x [1,2]
    big = LatticePolygon.rectangle(0, 3, 8, 6)
    small = LatticePolygon.rectangle(0, 1, 2, 2)
    inc = [LatticeSegment((0, 3), (8, 3))]
    inc_s = [LatticeSegment((0, 1), (2, 1))]
    return [(2, theoremfinal_check(big, small, small, 4, inc, inc_s, inc_s))]


def validate_blocks(bs: BlockSet) -> list[Certificate]:
    out = []
    try:
        g, coeffs = bs.assemble()
        out.append(Certificate("truncation compatibility", True, "shared rows agree"))
    except (ConstructionError, GridError) as e:
        return [Certificate("truncation compatibility", False, str(e))]
    n = g.node_count
    out.append(Certificate("node count", n == bs.expected_nodes(), f"{n} nodes, expected {bs.expected_nodes()}"))
    if bs.kind == "family":
        out.append(Certificate("lifting profiles", profiles_certify(bs.k, bs.l), "slab subdivisions certified"))
        for name, rows in (("P", 4), ("P1", 2)):
            blk = bs.blocks[name]
            ok = blk.grid.height == rows and blk.grid.width == 4 * bs.k and blk.grid.node_count == 2 * bs.k
            out.append(Certificate(f"block {name}", ok, f"{blk.grid.width}x{blk.grid.height} "
                                                        f"with {blk.grid.node_count} nodes"))
    else:
        P, H = bs.blocks["P"], bs.blocks["H"]
        ok = (P.grid.width, P.grid.height, P.grid.node_count) == (8, 3, 4)
        out.append(Certificate("block P", ok, f"{P.grid.width}x{P.grid.height} with {P.grid.node_count} nodes"))
        hb = harnack_block_check(H.chart())
        out.append(Certificate("Harnack block", hb, "H is an M-curve of bidegree (8,2)" if hb
                               else "H is not maximal"))
    for h, fc in level_checks(bs):
        out.append(Certificate(f"level {h} transversality", fc.ok, _margin_text(fc)))
    nodes = block_nodes(bs.blocks["P"], bs.t)
    gp = general_position(nodes, bs.k if bs.kind == "family" else 2)
    out.append(Certificate("general position", gp.ok,
                           f"(k,1)-space through the nodes has dimension {gp.dimension}"))
    for name, f in (("L", bs.L), ("M", bs.M)):
        if f is None:
            continue
        kk = bs.k if bs.kind == "family" else 2
        ok = (all(0 <= p.x <= kk and 0 <= p.y <= 1 for p in f.support) and vanishes_at(f, nodes)
              and _irreducible(f))
        out.append(Certificate(f"{name} through the nodes", ok, f"irreducible (k,1)-curve through {len(nodes)} nodes"))
    return out


# ---------------------------------------------------------------------------
# reports


@dataclass
class FamilyReport:
    k: int
    l: int
    tridegree: tuple[int, int, int]
    summary: object
    node_count: int
    b0_minus: int
    chi_plus: int
    chi_minus: int
    plus_disks: int
    topology: SurfaceTopology
    empty_oval_signs: dict
    checks: list[Certificate] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failed(self) -> list[Certificate]:
        return [c for c in self.checks if not c.ok]

    def lines(self) -> list[str]:
        st = self.topology
        h20, h11 = hodge_numbers(self.tridegree[0], self.tridegree[1])
        out = [f"tridegree: {self.tridegree[0]} {self.tridegree[1]} {self.tridegree[2]}",
               self.summary.line(),
               f"Y-: {self.b0_minus} components, chi {self.chi_minus}; Y+: chi {self.chi_plus}, "
               f"{self.plus_disks} disks",
               f"b0={st.b0}, chi={st.chi}, b1={st.b1}, h20={h20}, h11={h11}",
               f"components: {st.describe()}"]
        out += [f"[{'ok' if c.ok else 'FAIL'}] {c.name}: {c.detail}" for c in self.checks]
        return out


def surface_pipeline(g_curve, seed: SignSeed, d1: int, d2: int):
    arr = build_torus_arrangement(g_curve)
    rc = blow_up_nodes(sign_regions(arr, seed))
    st = double_cover_topology(rc, d1, d2)
    return arr, rc, st


def grid_seed(g: GridPatchwork) -> SignSeed:
    """The sign of the polynomial itself, read at the lattice point (1, 1) of the positive quadrant."""
    return SignSeed("point", g.sign(1, 1), (Fraction(1), Fraction(1)))


def _report(bs: BlockSet, seed: SignSeed | None, extra_checks) -> FamilyReport:
    g, cells, polys, charts = stacked_cells(bs)
    seed = seed or grid_seed(g)
    dom = LatticePolygon.rectangle(0, 0, g.width, g.height)
    sub = Subdivision.from_cells(dom, cells)
    curve = glue_charts(sub, charts)
    d1, d2 = (4, 4) if bs.kind == "442" else (2 * bs.k, 2 * bs.l)
    arr, rc, st = surface_pipeline(curve, seed, d1, d2)
    summ = curve_summary(curve, arr)
    minus = region_components(rc, -1)
    plus = region_components(rc, 1)
    eo = {1: 0, -1: 0}
    for s in rc.empty_oval_signs():
        eo[s] += 1
    rep = FamilyReport(bs.k, bs.l, (d1, d2, 2), summ, curve.node_count, len(minus),
                       sum(c.chi for c in plus), sum(c.chi for c in minus),
                       sum(1 for c in plus if c.is_disk), st, eo)
    bounds = betti_bounds(d1, d2)
    rep.checks += [
        Certificate("nodes", curve.node_count == bs.expected_nodes(),
                    f"{curve.node_count} glued nodes, expected {bs.expected_nodes()}"),
        Certificate("node additivity", curve.node_count == sum(c.node_count for c in charts),
                    "glued count equals the sum over cells"),
        Certificate("orientable", all(c.orientable for c in st.components), "every component orientable"),
        Certificate("chi even", euler_parity_guard(st) and st.chi % 2 == 0, f"chi = {st.chi}"),
        Certificate("b1 = 2 b0 - chi", st.b1 == 2 * st.b0 - st.chi, f"{st.b1} = 2*{st.b0} - ({st.chi})"),
        Certificate("b0 bound", st.b0 <= bounds.b0_bound, f"b0 = {st.b0} <= {bounds.b0_bound}"),
        Certificate("b1 bound", st.b1 <= bounds.b1_bound, f"b1 = {st.b1} <= {bounds.b1_bound}"),
    ]
    rep.checks += extra_checks(rep, summ)
    return rep


def assemble_family(k: int, l: int, fixtures: BlockSet, seed: SignSeed | None = None) -> FamilyReport:
    if fixtures.kind != "family" or (fixtures.k, fixtures.l) != (k, l):
        raise ConstructionError(f"fixtures are for {fixtures.kind} ({fixtures.k},{fixtures.l}), not ({k},{l})")
    bad = [c for c in validate_blocks(fixtures) if not c.ok]
    if bad:
        raise ConstructionError(f"fixture check failed: {bad[0].name}: {bad[0].detail}")
    def extra(rep: FamilyReport, summ):
        disks = (6 * k - 4) * (l - 1) + 3 * (2 * k - 2) * (l - 2)
        comps = (4 * k - 1) * (4 * l - 1) + 1 - 2 * k * l
        b0m = (2 * k - 2) * (l - 2)
        return [
            Certificate("b0(Y-) lower bound", rep.b0_minus >= b0m, f"{rep.b0_minus} >= {b0m}"),
            Certificate("Y+ disk count", rep.plus_disks >= disks, f"{rep.plus_disks} >= {disks}"),
            Certificate("curve components", summ.components <= comps, f"{summ.components} <= {comps}"),
        ]

    return _report(fixtures, seed, extra)


@dataclass(frozen=True)
class ViroComparison:
    b1: int
    h11: int

    @property
    def excess(self) -> int:
        return self.b1 - self.h11

    @property
    def violated(self) -> bool:
        return self.b1 > self.h11

    def line(self) -> str:
        if self.violated:
            return f"b1={self.b1}, h11={self.h11}, VIRO CONJECTURE VIOLATED BY {self.excess}"
        return f"b1={self.b1}, h11={self.h11}, within the conjectured bound"


def viro_comparison(st: SurfaceTopology, d1: int, d2: int) -> ViroComparison:
    return ViroComparison(st.b1, hodge_numbers(d1, d2)[1])


def m_deficiency(st: SurfaceTopology, d1: int, d2: int) -> tuple[int, int, int]:
    """(sum of Betti numbers of the real part, of the complex surface, a) with the real part an (M-a)-surface."""
    real = 2 * st.b0 + st.b1
    cplx = total_betti_complex(d1, d2)
    return real, cplx, (cplx - real) // 2


def construct_442(fixtures: BlockSet, seed: SignSeed | None = None) -> FamilyReport:
    if fixtures.kind != "442":
        raise ConstructionError("construct_442 needs the (4,4,2) block set")
    bad = [c for c in validate_blocks(fixtures) if not c.ok]
    if bad:
        raise ConstructionError(f"fixture check failed: {bad[0].name}: {bad[0].detail}")
    def extra(rep: FamilyReport, summ):
        real, cplx, a = m_deficiency(rep.topology, 4, 4)
        vc = viro_comparison(rep.topology, 4, 4)
        return [Certificate("empty ovals positive", rep.empty_oval_signs[-1] == 0,
                            f"{rep.empty_oval_signs[1]} positive, {rep.empty_oval_signs[-1]} negative"),
                Certificate("(M-a) certificate", True, f"sum b_i(RZ) = {real}, sum b_i(Z) = {cplx}, a = {a}"),
                Certificate("Viro comparison", True, vc.line())]

    return _report(fixtures, seed, extra)


def harnack_block_check(chart: CellChart) -> bool:
    """Is the block chart an M-curve, i.e. has interior_count + 1 components on the torus?"""
    cell = chart.cell
    if not cell.is_rectangle():
        return False
    sub = Subdivision.from_cells(cell, [cell])
    try:
        g = glue_charts(sub, [chart])
        summ = curve_summary(g)
    except Exception:
        return False
    return summ.nodes == 0 and summ.components == interior_count(cell) + 1


__all__ = [
    "BlockSet", "Certificate", "ConstructionError", "FamilyReport", "GeneralPosition", "GridBlock",
    "NormalizationWarning", "ViroComparison", "assemble_family", "block_L", "block_P", "block_nodes", "blocks_442", "family_blocks", "grid_seed", "to_bundle",
    "construct_442", "family_rows", "family_slabs", "flip_y", "general_position", "harnack_block_check",
    "is_pns", "lifting_profiles", "m_deficiency", "merge_blocks", "shift_y", "stacked_cells",
    "validate_blocks", "viro_comparison", "TransversalitySetup", "is_s_transversal_nodal",
]


# ---------------------------------------------------------------------------
# block sets from sign/choice tables


def _joint_row(bottom_exps, top_exps, choices, solve_top: bool) -> list[int]:
    """Exponents of the free row of a one-row joint block so its mixed differences
    are +1 for A, -1 for B and 0 on odd squares."""
    want = [{"A": 1, "B": -1}.get(c, 0) for c in choices]
    if "N" in choices:
        raise ConstructionError("joint rows carry no nodes")
    free = [0]
    for i, d in enumerate(want):
        b0, b1 = bottom_exps[i], bottom_exps[i + 1]
        t0, t1 = top_exps[i], top_exps[i + 1]
        if solve_top:  # d = b0 + t1 - b1 - t0
            free.append(free[-1] + d - b0 + b1)
        else:  # d = free0 + t1 - free1 - t0
            free.append(free[-1] + t1 - t0 - d)
    return free


def family_blocks(data: dict, t=Fraction(1, 8), seed: int = 0) -> BlockSet:
    """Block set of the (2k, 2l, 2) family from sign/choice tables.

    ``data`` holds ``P`` (5 sign rows, 4 choice rows), ``P1`` (3 and 2 rows),
    ``mid`` (choices of the joint row between P1 and P) and ``top`` (sign row
    and choices of the closing row).
    """
    k, l = int(data["k"]), int(data["l"])
    P = GridBlock.build(GridPatchwork.from_strings(*data["P"]))
    p1g = GridPatchwork.from_strings(*data["P1"])
    p1 = GridBlock.build(p1g)
    mid_signs = [data["P1"][0][2], data["P"][0][0]]
    r = _joint_row([0] * (4 * k + 1), P.exps[0], data["mid"], solve_top=False)
    g = [r[i] - p1.exps[2][i] for i in range(4 * k + 1)]
    p1 = GridBlock(p1g, tuple(tuple(e + g[i] for i, e in enumerate(row)) for row in p1.exps))
    mid = GridBlock(GridPatchwork.from_strings(mid_signs, [data["mid"]]), (tuple(r), P.exps[0]))
    last = 4 if l % 2 == 0 else 0
    top_row = _joint_row(P.exps[last], [0] * (4 * k + 1), data["top"][1], solve_top=True)
    top = GridBlock(GridPatchwork.from_strings([data["P"][0][last], data["top"][0]], [data["top"][1]]),
                    (P.exps[last], tuple(top_row)))
    bs = BlockSet("family", k, l, {"P": P, "P1": p1, "P1^1": mid, "top": top}, t=Fraction(t))
    gp = general_position(block_nodes(P, bs.t), k, seed)
    return BlockSet("family", k, l, bs.blocks, gp.L, gp.M, bs.t)


def blocks_442(data: dict, t=Fraction(1, 8), seed: int = 0) -> BlockSet:
    """Block set of the (4,4,2) surface: ``P`` (4 sign rows, 3 choice rows) and
    ``H`` (the two sign rows above P's top row and 2 choice rows)."""
    P = GridBlock.build(GridPatchwork.from_strings(*data["P"]))
    hs = [data["P"][0][3], *data["H"][0]]
    H = GridBlock.build(GridPatchwork.from_strings(hs, data["H"][1]), row0=P.exps[3])
    gp = general_position(block_nodes(P, t), 2, seed)
    return BlockSet("442", 2, 2, {"P": P, "H": H}, gp.L, gp.M, Fraction(t))


def to_bundle(bs: BlockSet, name: str, description: str = ""):
    from .bundle import Bundle, BundleCell

    g, cells, polys, charts = stacked_cells(bs)
    d1, d2 = (4, 4) if bs.kind == "442" else (2 * bs.k, 2 * bs.l)
    return Bundle(
        name=name,
        domain=LatticePolygon.rectangle(0, 0, g.width, g.height),
        lift=bs.lift(),
        cells=[BundleCell(c, ch, f, ch.node_count) for c, f, ch in zip(cells, polys, charts)],
        sweep=(1, 1000),
        seed=grid_seed(g),
        tridegree=(d1, d2, 2),
        construction=bs.to_json(),
        description=description,
    )
