"""Command line: ``viropatch verify|glue|surface|bounds|ledger``.

Exit codes: 0 success, 1 a check or pipeline step failed, 2 the input could
not be read as a bundle (or the arguments were malformed).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .bundle import Bundle, BundleFormatError, load
from .charts import ChartError, GluingError, build_torus_arrangement, curve_summary
from .checks import construction_of, first_failure, glue_bundle, oracle_compare, summary_line, verify_bundle
from .constructions import ConstructionError, m_deficiency, viro_comparison
from .subdivision import SubdivisionError, sweep_orientation
from .surfaces import (
    SignSeed,
    SurfaceError,
    betti_bounds,
    blow_up_nodes,
    double_cover_topology,
    euler_parity_guard,
    hodge_numbers,
    region_totals,
    sign_regions,
)
from .svg import render_svg
from .transversality import (
    TransversalitySetup,
    family_level_checks,
    generalposition_ledger,
    is_s_transversal_nodal,
)

OK, FAIL, FORMAT = 0, 1, 2


class Failure(Exception):
    def __init__(self, message: str, code: int = FAIL):
        super().__init__(message)
        self.code = code


def _load(path) -> Bundle:
    try:
        return load(path)
    except BundleFormatError as e:
        raise Failure(f"format error: {e}", FORMAT) from None


def _require_verified(b: Bundle) -> None:
    bad = first_failure(verify_bundle(b, stop_at_first=True))
    if bad is not None:
        raise Failure(f"verification failed: {bad.name}: {bad.detail}")


def _fraction(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("t must lie strictly between 0 and 1")
    return v


# -- verify -------------------------------------------------------------------

def cmd_verify(args, out) -> int:
    b = _load(args.path)
    certs = verify_bundle(b)
    for c in certs:
        print(f"[{'ok' if c.ok else 'FAIL'}] {c.name}: {c.detail}", file=out)
    bad = first_failure(certs)
    if bad is not None:
        print(f"FAILED: {bad.name}: {bad.detail}", file=out)
        return FAIL
    for t in args.t or []:
        r = oracle_compare(b, t, args.resolution)
        print(f"[{'ok' if r.ok else 'FAIL'}] oracle {r.line()}", file=out)
        if not r.ok:
            print(f"FAILED: oracle at t={t}", file=out)
            return FAIL
    print(f"{b.name}: all checks passed", file=out)
    return OK


# -- glue -----------------------------------------------------------------------

def cmd_glue(args, out) -> int:
    b = _load(args.path)
    _require_verified(b)
    try:
        g = glue_bundle(b)
        line = summary_line(g)
    except GluingError as e:
        raise Failure(f"gluing failed: {e}") from None
    print(line, file=out)
    if g.domain.is_rectangle():
        s = curve_summary(g, build_torus_arrangement(g))
        classes = ", ".join(f"({a},{c})" for a, c in s.classes)
        print(f"classes: {classes}", file=out)
        per = " ".join(f"{q}:{n}" for q, n in s.per_quadrant.items())
        print(f"per quadrant: {per}", file=out)
    if args.svg:
        Path(args.svg).write_text(render_svg(b.subdivision(), g, b.name), encoding="utf-8")
        print(f"wrote {args.svg}", file=out)
    return OK


# -- surface --------------------------------------------------------------------

def _seed(b: Bundle, sign_text: str | None) -> SignSeed:
    if sign_text is None:
        if b.seed is None:
            raise Failure("sign seed required: the bundle has no seed; pass --seed-sign + or -")
        return b.seed
    sign = 1 if sign_text == "+" else -1
    if b.seed is None:
        return SignSeed("empty-oval", sign)
    return SignSeed(b.seed.kind, sign, b.seed.value)


def _degrees(b: Bundle) -> tuple[int, int]:
    x0, y0, x1, y1 = b.domain.bbox()
    w, h = x1 - x0, y1 - y0
    if b.tridegree is not None:
        d1, d2, d3 = b.tridegree
        if d3 != 2:
            raise Failure("only tridegrees (d1, d2, 2) are handled")
        if (w, h) != (2 * d1, 2 * d2):
            raise Failure(f"tridegree {b.tridegree} does not match a domain of size {w} x {h}")
        return d1, d2
    if w % 2 or h % 2:
        raise Failure("the curve must have even bidegree to be a branch curve")
    return w // 2, h // 2


def cmd_surface(args, out) -> int:
    b = _load(args.path)
    seed = _seed(b, args.seed_sign)
    _require_verified(b)
    if not b.domain.is_rectangle():
        raise Failure("the surface pipeline needs a rectangular domain")
    d1, d2 = _degrees(b)
    try:
        g = glue_bundle(b)
        arr = build_torus_arrangement(g)
        rc = blow_up_nodes(sign_regions(arr, seed))
        st = double_cover_topology(rc, d1, d2)
    except (ChartError, SurfaceError) as e:
        raise Failure(f"surface pipeline failed: {e}") from None
    tot = region_totals(rc)
    h20, h11 = hodge_numbers(d1, d2)
    bb = betti_bounds(d1, d2)
    print(f"tridegree: {d1} {d2} 2", file=out)
    print(curve_summary(g, arr).line(), file=out)
    print(f"Y-: {tot.b0_minus} components, chi {tot.chi_minus}; Y+: chi {tot.chi_plus}, "
          f"{tot.plus_disks} disks", file=out)
    print(f"b0={st.b0}, chi={st.chi}, b1={st.b1}", file=out)
    print(f"components: {st.describe()}", file=out)
    print(f"h20={h20}, h11={h11}", file=out)
    print(f"b0 bound: {st.b0} <= {bb.b0_bound} (margin {bb.b0_bound - st.b0})", file=out)
    print(f"b1 bound: {st.b1} <= {bb.b1_bound} (margin {bb.b1_bound - st.b1}); "
          f"maximum b1 {bb.b1_max_even} (raw {bb.b1_max})", file=out)
    real, cplx, a = m_deficiency(st, d1, d2)
    print(f"sum of Betti numbers: real {real}, complex {cplx}, an (M-{a})-surface", file=out)
    print(viro_comparison(st, d1, d2).line(), file=out)
    ok = euler_parity_guard(st) and st.b0 <= bb.b0_bound and st.b1 <= bb.b1_bound
    try:
        bs = construction_of(b)
    except ConstructionError as e:
        raise Failure(str(e)) from None
    if bs is not None and bs.kind == "family":
        k, l = bs.k, bs.l
        checks = [("b0(Y-)", tot.b0_minus, (2 * k - 2) * (l - 2), ">="),
                  ("Y+ disks", tot.plus_disks, (6 * k - 4) * (l - 1) + 3 * (2 * k - 2) * (l - 2), ">="),
                  ("curve components", curve_summary(g, arr).components,
                   (4 * k - 1) * (4 * l - 1) + 1 - 2 * k * l, "<=")]
        for name, got, bound, rel in checks:
            good = got >= bound if rel == ">=" else got <= bound
            ok = ok and good
            print(f"[{'ok' if good else 'FAIL'}] {name}: {got} {rel} {bound}", file=out)
    if not ok:
        print("FAILED: bounds or parity violated", file=out)
        return FAIL
    return OK


# -- bounds ---------------------------------------------------------------------

def cmd_bounds(args, out) -> int:
    d1, d2, d3 = args.tridegree
    if min(d1, d2, d3) < 1:
        raise Failure("degrees must be positive")
    if d3 != 2:
        msg = f"tridegree ({d1},{d2},{d3}) is not supported: the Hodge formulas here need d3 = 2"
        if d3 == 1:
            msg += ("; with d3 = 1 the surface has h20 = 0 and is birationaly equivalent to (ℂP¹)², "
                    "which is out of scope")
        raise Failure(msg)
    bb = betti_bounds(d1, d2)
    print(f"h20={bb.h20} h11={bb.h11}", file=out)
    print(f"b0<={bb.b0_bound} b1<={bb.b1_max_even} (raw {bb.b1_max}, h20+h11 = {bb.b1_bound})", file=out)
    return OK


# -- ledger ---------------------------------------------------------------------

def cmd_ledger(args, out) -> int:
    if args.path:
        b = _load(args.path)
        try:
            oa = sweep_orientation(b.subdivision(), b.sweep or (1, 1000))
        except SubdivisionError as e:
            raise Failure(str(e)) from None
        print(f"{b.name}: S-transversality margins (free edge length - singularity weight)", file=out)
        for idx, c in enumerate(b.cells):
            sing = tuple(n.kind for q in c.chart.quadrants.values() for n in q.nodes)
            m = is_s_transversal_nodal(TransversalitySetup(c.cell, oa.incoming_facets[idx], sing))
            verts = " ".join(f"({v.x},{v.y})" for v in c.cell.vertices)
            print(f"cell {idx} [{verts}]: {m.lhs} < {m.rhs}, slack {m.slack}", file=out)
        try:
            bs = construction_of(b)
        except ConstructionError as e:
            raise Failure(str(e)) from None
        if bs is None or bs.kind != "family":
            return OK
        k, l = bs.k, bs.l
    else:
        k, l = args.k, args.l
    if k < 1 or l < 1:
        raise Failure("k and l must be positive")
    led = generalposition_ledger(k, l)
    print(f"general position, k={k}, l={l}", file=out)
    for name, v in led.rows():
        print(f"  {name} = {v}", file=out)
    if k >= 2 and l >= 2:
        for h, fc in family_level_checks(k, l):
            print(f"level {h}: 2N+m = {fc.main.lhs} < {fc.main.rhs}, m' = {fc.second.lhs} < {fc.second.rhs}, "
                  f"m'' = {fc.third.lhs} < {fc.third.rhs}: {'ok' if fc.ok else 'FAIL'}", file=out)
    return OK


# -- entry ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="viropatch", description="Patchworking of nodal curves and "
                                 "the real double planes they branch.")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("verify", help="run every check on a bundle")
    p.add_argument("path")
    p.add_argument("--t", type=_fraction, action="append", help="also trace the Viro polynomial at t")
    p.add_argument("--resolution", type=int, default=256)
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("glue", help="glue the charts and summarise the curve")
    p.add_argument("path")
    p.add_argument("--svg", metavar="PATH")
    p.set_defaults(func=cmd_glue)
    p = sub.add_parser("surface", help="topology of the double cover branched along the curve")
    p.add_argument("path")
    p.add_argument("--seed-sign", choices=["+", "-", "\u2212"], help="sign of the branch polynomial on the seed")
    p.set_defaults(func=cmd_surface)
    p = sub.add_parser("bounds", help="Hodge numbers and Betti bounds for a tridegree")
    p.add_argument("--tridegree", type=int, nargs=3, required=True, metavar=("D1", "D2", "D3"))
    p.set_defaults(func=cmd_bounds)
    p = sub.add_parser("ledger", help="general-position dimensions and transversality margins")
    p.add_argument("path", nargs="?")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--l", type=int, default=2)
    p.set_defaults(func=cmd_ledger)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except Failure as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
