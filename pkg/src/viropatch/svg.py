"""SVG drawing of a glued chart over the four quadrant copies of the domain."""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .charts import GluedCurve
from .polynomials import quadrant_signs
from .subdivision import Subdivision

PX = 32  # pixels per lattice unit
MARGIN = 16


def _num(v) -> str:
    s = f"{float(v):.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(sub: Subdivision, curve: GluedCurve | None = None, title: str = "") -> str:
    """Draw the cells of all four copies, the glued curve and its nodes.

    Coordinates follow the glued curve: the domain is translated so its lower
    left corner sits at the origin and the copies fill [-a, a] x [-b, b].
    """
    x0, y0, x1, y1 = sub.domain.bbox()
    a, b = x1 - x0, y1 - y0
    w, h = 2 * a * PX + 2 * MARGIN, 2 * b * PX + 2 * MARGIN

    def X(u):
        return _num((Fraction(u) + a) * PX + MARGIN)

    def Y(v):
        return _num((b - Fraction(v)) * PX + MARGIN)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">']
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append(f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>')
    out.append('<g id="cells" fill="none" stroke="#bbbbbb" stroke-width="1">')
    for s1 in (1, -1):
        for s2 in (1, -1):
            for c in sub.cells:
                pts = " ".join(f"{X(s1 * (v.x - x0))},{Y(s2 * (v.y - y0))}" for v in c.vertices)
                out.append(f'<polygon points="{pts}"/>')
    out.append("</g>")
    out.append(f'<g id="axes" stroke="#666666" stroke-width="1">'
               f'<line x1="{X(-a)}" y1="{Y(0)}" x2="{X(a)}" y2="{Y(0)}"/>'
               f'<line x1="{X(0)}" y1="{Y(-b)}" x2="{X(0)}" y2="{Y(b)}"/></g>')
    if curve is not None:
        out.append('<g id="curve" fill="none" stroke="#c0392b" stroke-width="2">')
        for pl in curve.polylines:
            s1, s2 = quadrant_signs(pl.quadrant)
            pts = " ".join(f"{X(s1 * p[0])},{Y(s2 * p[1])}" for p in pl.points)
            tag = "polygon" if pl.closed else "polyline"
            out.append(f'<{tag} points="{pts}"/>')
        out.append("</g>")
        out.append('<g id="nodes" fill="#1f3a93">')
        for n in sorted(curve.nodes, key=lambda n: (n.at[0], n.at[1])):
            out.append(f'<circle cx="{X(n.at[0])}" cy="{Y(n.at[1])}" r="4"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
