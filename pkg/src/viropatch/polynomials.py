"""Sparse bivariate polynomials with exact rational coefficients.

Also home to the Viro polynomial, the moment map, and the floating-point
contour tracer.  The tracer is the only inexact code in the package and is
used purely as an oracle against the combinatorial charts.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
import sympy as sp

from .lattice import (
    LatticePoint,
    LatticePolygon,
    LatticeSegment,
    as_point,
    convex_hull,
    integer_length,
)
from .subdivision import LiftingFunction, Subdivision, SubdivisionError, cell_plane, is_convex_subdivision

QUADRANTS = ("++", "-+", "+-", "--")
QUADRANT_BITS = {"++": (0, 0), "-+": (1, 0), "+-": (0, 1), "--": (1, 1)}
BITS_QUADRANT = {v: k for k, v in QUADRANT_BITS.items()}

_X, _Y, _U = sp.symbols("x y u")


def quadrant_signs(q: str) -> tuple[int, int]:
    e1, e2 = QUADRANT_BITS[q]
    return (-1) ** e1, (-1) ** e2


def quadrant_of(x, y) -> str:
    if x == 0 or y == 0:
        raise ValueError("point has a zero coordinate")
    return BITS_QUADRANT[(int(x < 0), int(y < 0))]


class NonFaceWarning(UserWarning):
    """Truncation to a lattice subset that is not a face of the Newton polygon."""


@dataclass(frozen=True)
class SparsePolynomial:
    coefficients: Mapping[LatticePoint, Fraction]

    def __post_init__(self):
        clean = {}
        for p, c in dict(self.coefficients).items():
            c = Fraction(c)
            if c != 0:
                clean[as_point(p)] = c
        object.__setattr__(self, "coefficients", dict(sorted(clean.items())))

    # construction -----------------------------------------------------------
    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Sequence[int], object]]) -> "SparsePolynomial":
        acc: dict = {}
        for p, c in terms:
            p = as_point(p)
            acc[p] = acc.get(p, Fraction(0)) + Fraction(c)
        return cls(acc)

    @classmethod
    def from_sympy(cls, expr) -> "SparsePolynomial":
        poly = sp.Poly(sp.expand(expr), _X, _Y)
        return cls({(int(i), int(j)): Fraction(str(c)) for (i, j), c in poly.terms()})

    def to_sympy(self):
        return sum((sp.Rational(c.numerator, c.denominator) * _X ** p.x * _Y ** p.y
                    for p, c in self.coefficients.items()), sp.Integer(0))

    # structure ---------------------------------------------------------------
    @property
    def support(self) -> list[LatticePoint]:
        return list(self.coefficients)

    @cached_property
    def newton(self) -> LatticePolygon:
        if not self.coefficients:
            raise ValueError("zero polynomial has no Newton polygon")
        return convex_hull(self.coefficients)

    def is_zero(self) -> bool:
        return not self.coefficients

    def __getitem__(self, p) -> Fraction:
        return self.coefficients.get(as_point(p), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, SparsePolynomial) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(tuple(self.coefficients.items()))

    def __repr__(self):
        body = " + ".join(f"({c})x^{p.x}y^{p.y}" for p, c in self.coefficients.items())
        return f"SparsePolynomial({body or '0'})"

    # transformations ---------------------------------------------------------
    def map_exponents(self, fn) -> "SparsePolynomial":
        return SparsePolynomial.from_terms((fn(p), c) for p, c in self.coefficients.items())

    def shift(self, dx: int, dy: int) -> "SparsePolynomial":
        return self.map_exponents(lambda p: (p.x + dx, p.y + dy))

    def scale(self, lam) -> "SparsePolynomial":
        lam = Fraction(lam)
        return SparsePolynomial({p: c * lam for p, c in self.coefficients.items()})

    def torus_scale(self, l0, l1, l2) -> "SparsePolynomial":
        """f(z1, z2) -> l0 * f(l1 z1, l2 z2)."""
        l0, l1, l2 = Fraction(l0), Fraction(l1), Fraction(l2)
        return SparsePolynomial({p: c * l0 * l1 ** p.x * l2 ** p.y
                                 for p, c in self.coefficients.items()})

    def __add__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        return SparsePolynomial.from_terms(list(self.coefficients.items())
                                           + list(other.coefficients.items()))

    # evaluation --------------------------------------------------------------
    def __call__(self, x, y):
        return sum(c * x ** p.x * y ** p.y for p, c in self.coefficients.items())

    def exponent_arrays(self):
        exps = np.array([(p.x, p.y) for p in self.coefficients], dtype=float).reshape(-1, 2)
        coefs = np.array([float(c) for c in self.coefficients.values()])
        return exps, coefs


# ---------------------------------------------------------------------------
# truncations and edge data


def truncation(f: SparsePolynomial, face) -> SparsePolynomial:
    if isinstance(face, LatticePolygon):
        keep = face.contains
        is_face = f.is_zero() or f.newton.has_face(face)
    elif isinstance(face, LatticeSegment):
        keep = face.contains
        is_face = f.is_zero() or f.newton.has_face(face)
    else:
        pt = as_point(face)
        keep = lambda p: p == pt  # noqa: E731
        is_face = f.is_zero() or pt in f.newton.vertices
    if not is_face:
        warnings.warn(f"{face!r} is not a face of the Newton polygon", NonFaceWarning, stacklevel=2)
    return SparsePolynomial({p: c for p, c in f.coefficients.items() if keep(p)})


def edge_polynomial(f: SparsePolynomial, edge: LatticeSegment):
    """The one-variable reduction q(u) = sum c_{a+s d} u^s of f along ``edge``.

    ``d`` is the primitive direction from ``edge.a`` to ``edge.b``.  Returns a
    sympy Poly in ``u`` (possibly with a power of ``u`` still factored in if
    ``edge.a`` carries no coefficient).
    """
    d = edge.direction
    n = integer_length(edge)
    coeffs = [f[(edge.a.x + s * d.x, edge.a.y + s * d.y)] for s in range(n + 1)]
    expr = sum((sp.Rational(c.numerator, c.denominator) * _U ** s for s, c in enumerate(coeffs)),
               sp.Integer(0))
    return sp.Poly(expr, _U, domain="QQ")


@dataclass(frozen=True)
class EdgeRootData:
    edge: LatticeSegment
    positive_roots: int
    negative_roots: int
    has_multiple_root: bool

    def __post_init__(self):
        if self.positive_roots + self.negative_roots > integer_length(self.edge):
            raise ValueError("more real roots than the edge length allows")

    def count_for_sign(self, sign: int) -> int:
        return self.positive_roots if sign > 0 else self.negative_roots


def _strip_u(q):
    c = q.all_coeffs()
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return sp.Poly(c, _U, domain="QQ")


def edge_root_data(f: SparsePolynomial, edge: LatticeSegment) -> EdgeRootData:
    q = edge_polynomial(f, edge)
    if q.is_zero:
        raise ValueError(f"truncation of f to {tuple(edge.a)}-{tuple(edge.b)} vanishes")
    q = _strip_u(q)
    pos = neg = 0
    multiple = False
    _, factors = q.sqf_list()
    for fac, mult in factors:
        if fac.degree() == 0:
            continue
        if mult > 1:
            multiple = True
        pos += mult * int(fac.count_roots(0, None))
        neg += mult * int(fac.count_roots(None, 0))
    # count_roots on closed intervals; zero is excluded because q(0) != 0
    return EdgeRootData(edge, pos, neg, multiple)


def is_pns(f: SparsePolynomial) -> bool:
    if f.newton.dim < 2:
        raise ValueError("Newton polygon is degenerate")
    for e in f.newton.edges():
        if integer_length(e) == 1:
            continue  # a binomial with both end coefficients nonzero
        q = _strip_u(edge_polynomial(f, e))
        g = sp.gcd(q, q.diff(_U))
        if g.degree() > 0:
            return False
    return True


# ---------------------------------------------------------------------------
# Viro families


@dataclass(frozen=True)
class ViroFamily:
    subdivision: Subdivision
    polynomials: tuple[SparsePolynomial, ...]
    lift: LiftingFunction

    def __post_init__(self):
        if len(self.polynomials) != len(self.subdivision.cells):
            raise ValueError("one polynomial per cell is required")
        for c, f in zip(self.subdivision.cells, self.polynomials):
            if any(not c.contains(p) for p in f.support):
                raise ValueError(f"support of a cell polynomial leaves its cell {c!r}")
        for i, j, seg in self.subdivision.shared_edges:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", NonFaceWarning)
                if truncation(self.polynomials[i], seg) != truncation(self.polynomials[j], seg):
                    raise ValueError(
                        f"cells {i} and {j} disagree on edge {tuple(seg.a)}-{tuple(seg.b)}")
        if not is_convex_subdivision(self.subdivision, self.lift):
            raise SubdivisionError("lift does not certify the subdivision")
        for c, f in zip(self.subdivision.cells, self.polynomials):
            a, b, k = cell_plane(c, self.lift)
            off = [p for p in f.support if self.lift(p) != a * p.x + b * p.y + k]
            if off:
                raise SubdivisionError(f"monomial {tuple(off[0])} is lifted above its cell {c!r}")

    @property
    def cells(self):
        return list(zip(self.subdivision.cells, self.polynomials))

    def coefficients(self) -> dict[LatticePoint, Fraction]:
        out: dict = {}
        for f in self.polynomials:
            out.update(f.coefficients)
        return out


def viro_polynomial(fam: ViroFamily, t) -> SparsePolynomial:
    t = Fraction(t)
    if t <= 0:
        raise ValueError("t must be positive")
    lift, _ = fam.lift.scaled_to_integers()
    out = {}
    for p, c in fam.coefficients().items():
        v = lift(p)
        if v.denominator != 1:
            raise ValueError("lift is not integral after scaling")
        out[p] = c * t ** int(v)
    return SparsePolynomial(out)


# ---------------------------------------------------------------------------
# moment map


def moment_map(domain: LatticePolygon, point) -> tuple[Fraction, Fraction]:
    x, y = (Fraction(v) for v in point)
    if x == 0 or y == 0:
        raise ValueError("moment map is defined on the torus only")
    ax, ay = abs(x), abs(y)
    tot = Fraction(0)
    sx = Fraction(0)
    sy = Fraction(0)
    for p in domain.lattice_points():
        w = ax ** p.x * ay ** p.y
        tot += w
        sx += w * p.x
        sy += w * p.y
    u, v = sx / tot, sy / tot
    return (u if x > 0 else -u, v if y > 0 else -v)


def moment_map_log(points_lattice: np.ndarray, X: np.ndarray, Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Floating moment map on the positive orthant in log coordinates."""
    L = np.outer(X, points_lattice[:, 0]) + np.outer(Y, points_lattice[:, 1])
    L -= L.max(axis=1, keepdims=True)
    w = np.exp(L)
    w /= w.sum(axis=1, keepdims=True)
    return w @ points_lattice[:, 0], w @ points_lattice[:, 1]


# ---------------------------------------------------------------------------
# singular points


def singular_points(f: SparsePolynomial) -> list[tuple[float, float]]:
    """Real singular points of f in (R*)^2, from an exact solve of f = f_x = f_y = 0."""
    e = f.to_sympy()
    sols = sp.solve([e, sp.diff(e, _X), sp.diff(e, _Y)], [_X, _Y], dict=True)
    out = []
    for s in sols:
        if _X not in s or _Y not in s:
            continue  # positive-dimensional singular locus (non-reduced curve)
        xv, yv = complex(s[_X]), complex(s[_Y])
        if abs(xv.imag) < 1e-12 and abs(yv.imag) < 1e-12 and xv.real != 0 and yv.real != 0:
            out.append((xv.real, yv.real))
    return sorted(set(out))


def hessian_det(f: SparsePolynomial, x: float, y: float) -> float:
    e = f.to_sympy()
    h = sp.hessian(e, (_X, _Y)).subs({_X: x, _Y: y})
    return float(h.det())


@dataclass(frozen=True)
class NodeHint:
    cell: int
    x: float
    y: float
    monomial: LatticePoint


def node_hints(fam: ViroFamily) -> list[NodeHint]:
    """Singular points of every cell polynomial, with the monomial used to restore them."""
    hints = []
    for idx, (cell, f) in enumerate(fam.cells):
        for x, y in singular_points(f):
            # adjust the cell monomial dominating at the node
            mono = max(f.support, key=lambda p: (abs(float(f[p]) * abs(x) ** p.x * abs(y) ** p.y), p))
            hints.append(NodeHint(idx, x, y, mono))
    return hints


def restore_nodes(fam: ViroFamily, t, hints: Sequence[NodeHint] | None = None,
                  tol: float = 1e-13, max_iter: int = 60) -> SparsePolynomial:
    """Viro polynomial at ``t`` with one coefficient per node corrected so that every
    cell node survives as a node of f_t.

    The correction solves f = f_x = f_y = 0 jointly for all nodes by Newton's method,
    working in each node's cell coordinates X = t^a x, Y = t^b y where (a, b) is the
    gradient of the lift on that cell.
    """
    t = Fraction(t)
    base = viro_polynomial(fam, t)
    hints = node_hints(fam) if hints is None else list(hints)
    if not hints:
        return base
    lift, m = fam.lift.scaled_to_integers()
    tf = float(t)
    scales = []
    for h in hints:
        a, b, _ = cell_plane(fam.subdivision.cells[h.cell], lift)
        scales.append((tf ** float(a), tf ** float(b)))
    exps, coefs = base.exponent_arrays()
    mono_idx = [list(base.coefficients).index(h.monomial) for h in hints]
    n = len(hints)
    # unknowns: delta_k (relative), X_k, Y_k
    z = np.zeros(3 * n)
    for k, h in enumerate(hints):
        z[3 * k + 1] = h.x
        z[3 * k + 2] = h.y

    def residual(zv):
        c = coefs.copy()
        for k in range(n):
            c[mono_idx[k]] *= 1.0 + zv[3 * k]
        res = []
        for k in range(n):
            sx, sy = scales[k]
            x, y = zv[3 * k + 1] / sx, zv[3 * k + 2] / sy
            mon = c * np.abs(x) ** exps[:, 0] * np.abs(y) ** exps[:, 1] \
                * np.sign(x) ** exps[:, 0] * np.sign(y) ** exps[:, 1]
            norm = np.abs(mon).sum()
            fx = (mon * exps[:, 0]).sum() / zv[3 * k + 1]
            fy = (mon * exps[:, 1]).sum() / zv[3 * k + 2]
            res += [mon.sum() / norm, fx / norm, fy / norm]
        return np.array(res)

    for _ in range(max_iter):
        r = residual(z)
        if np.max(np.abs(r)) < tol:
            break
        J = np.zeros((3 * n, 3 * n))
        for col in range(3 * n):
            hstep = 1e-7 * max(1.0, abs(z[col]))
            zp = z.copy()
            zp[col] += hstep
            J[:, col] = (residual(zp) - r) / hstep
        z = z - np.linalg.solve(J, r)
    else:
        raise RuntimeError("node restoration did not converge")
    out = dict(base.coefficients)
    for k, h in enumerate(hints):
        out[h.monomial] = out[h.monomial] * Fraction(1.0 + z[3 * k])
    return SparsePolynomial(out)


# ---------------------------------------------------------------------------
# numeric chart (oracle)


@dataclass
class NumericChart:
    polylines: dict[str, list[np.ndarray]]
    components: dict[str, int]
    nodes: dict[str, list[tuple[float, float]]] = field(default_factory=dict)

    @property
    def node_count(self) -> int:
        return sum(len(v) for v in self.nodes.values())


def _log_window(f: SparsePolynomial, margin: float) -> float:
    logs = [math.log(abs(float(c))) for c in f.coefficients.values()]
    return (max(logs) - min(logs)) + margin


def numeric_chart(f: SparsePolynomial, resolution: int = 256, margin: float = 4.0,
                  node_tol: float = 1e-6) -> NumericChart:
    """Trace the zero set of f in each quadrant on a logarithmic grid."""
    from skimage.measure import find_contours

    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    if f.is_zero():
        raise ValueError("cannot trace the zero polynomial")
    exps, coefs = f.exponent_arrays()
    lat = np.array([(p.x, p.y) for p in f.newton.lattice_points()], dtype=float)
    U = _log_window(f, margin)
    h = 2 * U / (resolution - 1)
    # an irrational offset keeps lattice-aligned nodes off the sample points
    grid = np.linspace(-U, U, resolution) + h / math.pi
    logc = np.log(np.abs(coefs))
    signc = np.sign(coefs)

    polylines: dict = {}
    comps: dict = {}
    nodes: dict = {}
    for q in QUADRANTS:
        s1, s2 = quadrant_signs(q)
        sgn = signc * (s1 ** exps[:, 0]) * (s2 ** exps[:, 1])

        def normalized(Xv, Yv):
            L = logc[None, :] + np.outer(Xv, exps[:, 0]) + np.outer(Yv, exps[:, 1])
            L -= L.max(axis=1, keepdims=True)
            w = np.exp(L)
            return (w * sgn).sum(axis=1) / w.sum(axis=1), w, sgn

        XX, YY = np.meshgrid(grid, grid, indexing="ij")
        val, _, _ = normalized(XX.ravel(), YY.ravel())
        val = val.reshape(XX.shape)
        contours = find_contours(val, 0.0)
        # candidate nodes: sample points whose ring of 8 neighbours changes sign
        # at least four times (a single smooth branch gives two)
        sg = np.sign(val)
        ring = [sg[i0:i0 + resolution - 2, j0:j0 + resolution - 2] for i0, j0 in RING]
        changes = sum((ring[r] != ring[(r + 1) % 8]).astype(int) for r in range(8))
        found: list[tuple[float, float]] = []
        for i, j in zip(*np.nonzero(changes >= 4)):
            pt = _refine_node(exps, logc, sgn, grid[i + 1], grid[j + 1])
            if pt is None:
                continue
            if all(abs(pt[0] - a) + abs(pt[1] - b) > 3 * h for a, b in found):
                found.append(pt)
        found = [p for p in found if abs(p[0]) <= U and abs(p[1]) <= U
                 and _node_residual(exps, logc, sgn, *p) < node_tol]
        # merge contour pieces meeting at a node
        n = len(contours)
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for nx_, ny_ in found:
            near = []
            for ci, cnt in enumerate(contours):
                X = grid[0] + cnt[:, 0] * h
                Y = grid[0] + cnt[:, 1] * h
                if np.min(np.hypot(X - nx_, Y - ny_)) < 2.5 * h:
                    near.append(ci)
            for a in near[1:]:
                parent[find(a)] = find(near[0])
        comps[q] = len({find(i) for i in range(n)})
        nodes[q] = found
        lines = []
        for cnt in contours:
            X = grid[0] + cnt[:, 0] * h
            Y = grid[0] + cnt[:, 1] * h
            u, v = moment_map_log(lat, X, Y)
            lines.append(np.column_stack([s1 * u, s2 * v]))
        polylines[q] = lines
    return NumericChart(polylines, comps, nodes)


RING = ((0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (0, 1))


def _terms(exps, logc, sgn, X, Y):
    L = logc + exps[:, 0] * X + exps[:, 1] * Y
    w = np.exp(L - L.max())
    return w * sgn, w.sum()


def _node_residual(exps, logc, sgn, X, Y):
    t, norm = _terms(exps, logc, sgn, X, Y)
    return max(abs(t.sum()), abs((t * exps[:, 0]).sum()), abs((t * exps[:, 1]).sum())) / norm


def _refine_node(exps, logc, sgn, X, Y, iters=40):
    # Newton on the log-gradient of f; a node is a critical point with f = 0
    for _ in range(iters):
        t, norm = _terms(exps, logc, sgn, X, Y)
        gx = (t * exps[:, 0]).sum()
        gy = (t * exps[:, 1]).sum()
        hxx = (t * exps[:, 0] ** 2).sum()
        hxy = (t * exps[:, 0] * exps[:, 1]).sum()
        hyy = (t * exps[:, 1] ** 2).sum()
        det = hxx * hyy - hxy * hxy
        if det == 0:
            return None
        dX = (hyy * gx - hxy * gy) / det
        dY = (-hxy * gx + hxx * gy) / det
        X, Y = X - dX, Y - dY
        if abs(dX) + abs(dY) < 1e-14:
            break
    t, norm = _terms(exps, logc, sgn, X, Y)
    hxx = (t * exps[:, 0] ** 2).sum()
    hxy = (t * exps[:, 0] * exps[:, 1]).sum()
    hyy = (t * exps[:, 1] ** 2).sum()
    # in log coordinates at f = f_X = f_Y = 0 the Hessian is that of f up to positive factors
    if hxx * hyy - hxy * hxy >= 0:
        return None
    return (float(X), float(Y))
