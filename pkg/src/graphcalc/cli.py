"""Command-line entry point: graphcalc <subcommand>.

Exit codes: 0 success, 1 verification failure, 2 usage error.
All rational output is exact ("num/den"); floats appear only in the
numeric-verification TSV.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import genus
from .graphs import EnumerationError, GraphBounds, enumerate_graphs
from .pde import (PdeProblem, default_vertex_ok, residual, solve,
                  u_counting, u_symbolic)
from .properties import run_all as run_property_checks
from .quadrature import asymptotic_order_report, orders_pass
from .series import (Series, SeriesError, TruncationSpec, hbar_layer,
                     series_to_obj)
from .stablepoly import (StablePolyError, comb_poly_str, solve_P,
                         solve_P_comb, specialize_comb)
from .symbols import (HBAR, mi_factorial, mono_str, monomial, parse_symbol,
                      x_var)


def _parse_trunc(text: str) -> TruncationSpec:
    parts = dict(kv.split("=", 1) for kv in text.split(","))
    try:
        return TruncationSpec(int(parts.pop("Dx")), int(parts.pop("Ds")),
                              int(parts.pop("G")))
    except (KeyError, ValueError) as exc:
        raise argparse.ArgumentTypeError(
            "--trunc must look like Dx=4,Ds=3,G=2 (%s)" % exc)
    finally:
        if parts:
            raise argparse.ArgumentTypeError(
                "unknown truncation keys: %s" % ",".join(parts))


def _make_u(spec: str, r: int):
    """Initial-condition builder from an --init specification."""
    if spec == "symbolic":
        return u_symbolic(r)
    if spec.startswith("builtin:"):
        if r != 1:
            raise argparse.ArgumentTypeError(
                "builtin counting potentials are single-color (--r 1)")
        return u_counting(spec[len("builtin:"):])
    try:
        coeffs = {parse_symbol(k): Fraction(v)
                  for k, v in json.loads(spec).items()}
    except (ValueError, AttributeError) as exc:
        raise argparse.ArgumentTypeError("bad --init value: %s" % exc)
    for sym in coeffs:
        if sym[0] != "a" or len(sym[2]) != r:
            raise argparse.ArgumentTypeError(
                "--init JSON keys must be vertex symbols a[g;n1,...,nr]")

    def build(trunc: TruncationSpec) -> Series:
        terms = {}
        for (_, g, n), c in coeffs.items():
            pairs = [(HBAR, g - 1)]
            pairs += [(x_var(i + 1), e) for i, e in enumerate(n)]
            terms[monomial(pairs)] = c * Fraction(1, mi_factorial(n))
        return Series(terms, trunc)

    return build


def _emit_series(s: Series, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(series_to_obj(s), out, indent=None, sort_keys=True)
        out.write("\n")
    else:
        out.write(str(s) + "\n")


def _cmd_psi(args, out) -> int:
    u = _make_u(args.init, args.r)
    kind = "burgers" if args.connected else "heat"
    _emit_series(solve(PdeProblem(kind, args.r, u, args.trunc)),
                 args.format, out)
    return 0


def _cmd_genus(args, out) -> int:
    u = _make_u(args.init, args.r)
    if args.g == 0:
        layer = genus.psi0_series(u, args.r, args.trunc)
    elif args.g == 1:
        layer = genus.psi1_series(u, args.r, args.trunc)
    else:
        layer = genus.psi_g_series(args.g, u, args.r, args.trunc)
    _emit_series(layer, args.format, out)
    return 0


def _cmd_stable_poly(args, out) -> int:
    if args.comb:
        p = solve_P_comb(args.g)
        if args.format == "json":
            json.dump({str(k): "%d/%d" % (v.numerator, v.denominator)
                       for k, v in sorted(p.items())}, out, sort_keys=True)
            out.write("\n")
        else:
            out.write(comb_poly_str(p) + "\n")
        return 0
    p = solve_P(args.g, args.r)
    if args.format == "json":
        obj = [{"monomial": mono_str(m),
                "coeff": "%d/%d" % (c.numerator, c.denominator)}
               for m, c in p.sorted_terms()]
        json.dump(obj, out)
        out.write("\n")
    else:
        out.write(str(p) + "\n")
    return 0


def _cmd_counting(args, out) -> int:
    if args.kind == "comb":
        s = genus.counting_comb(args.g, args.trunc)
    else:
        s = genus.counting_stable(args.g, args.trunc)
    _emit_series(s, args.format, out)
    return 0


def _cmd_enumerate(args, out) -> int:
    trunc = args.trunc
    bounds = GraphBounds(max_genus=trunc.g, max_tails=(trunc.dx,) * args.r,
                         max_s_vertices=trunc.ds)
    classes = enumerate_graphs(
        args.r, bounds, connected_only=not args.all,
        vertex_ok=default_vertex_ok, stable_only=args.stable,
        min_genus=args.min_genus)
    for cls in sorted(classes, key=lambda c: c.canonical_form):
        out.write("%s\tgenus=%d\ttails=%s\taut=%d\tmu=%s\n" % (
            cls.canonical_form.hex(), cls.genus,
            ",".join(map(str, cls.tails)), cls.aut_order, mono_str(cls.mu)))
    return 0


def _verify_genus_identities(args, out) -> int:
    u = _make_u(args.init, args.r)
    trunc = args.trunc
    failures = []

    def report(name, ok):
        out.write("%s %s\n" % ("PASS" if ok else "FAIL", name))
        if not ok:
            failures.append(name)

    report("fixed point of the tree-level map",
           not any(genus.fixed_point_defect(u, args.r, trunc)))
    fwd, bwd = genus.inverse_map_defects(u, args.r, trunc)
    report("inverse maps compose to the identity",
           not any(fwd) and not any(bwd))
    curv = genus.curvature_defect(u, args.r, trunc)
    report("curvature matrix inverts the deformed metric",
           not any(curv[i, j] for i in range(args.r)
                   for j in range(args.r)))
    flow = solve(PdeProblem("burgers", args.r, u, trunc))
    res = residual(PdeProblem("burgers", args.r, u, trunc), flow)
    report("connected flow residual", not any(res.values()))
    report("genus-0 layer matches direct integration",
           hbar_layer(flow, 0) == genus.psi0_series(u, args.r, trunc))
    if trunc.g >= 2:
        report("genus-1 layer matches the log-determinant formula",
               hbar_layer(flow, 1) == genus.psi1_series(u, args.r, trunc))
    for g in range(2, trunc.g + 1):
        report("genus-%d layer matches the stable-polynomial substitution"
               % g,
               hbar_layer(flow, g) == genus.psi_g_series(g, u, args.r,
                                                         trunc))
    return 1 if failures else 0


def _verify_asymptotic(args, out) -> int:
    rows = asymptotic_order_report(max_terms=args.G)
    out.write("G\thbar\tnumeric\tpartial_sum\terror\tobserved_order\n")
    for row in rows:
        out.write("%d\t%s\t%s\t%s\t%s\t%s\n" % (
            row.order_terms, row.hbar,
            mpf_str(row.numeric), mpf_str(row.partial), mpf_str(row.error),
            "" if row.observed is None else mpf_str(row.observed)))
    ok = orders_pass(rows)
    out.write("PASS\n" if ok else "FAIL\n")
    return 0 if ok else 1


def mpf_str(x) -> str:
    import mpmath
    return mpmath.nstr(x, 17)


def _verify_properties(args, out) -> int:
    ok = run_property_checks(seed=args.seed, count=args.count,
                             report=lambda line: out.write(line + "\n"))
    return 0 if ok else 1


def _verify_tables(out) -> int:
    """Dual-path stable polynomials and the tree-count cross-check."""
    failures = 0
    for g in range(2, 7):
        ok = specialize_comb(solve_P(g, 1)) == solve_P_comb(g)
        out.write("%s genus-%d polynomial agrees on both derivations\n"
                  % ("PASS" if ok else "FAIL", g))
        failures += not ok
    from math import factorial
    phi = genus.phi_vector(u_counting("comb"), 1,
                           TruncationSpec(0, 8, 1))[0]
    ok = all(phi.coefficient(monomial([(("s", 1, 1), k)]))
             == Fraction((k + 1) ** k, factorial(k + 1))
             for k in range(9))
    out.write("%s rooted-tree counts\n" % ("PASS" if ok else "FAIL"))
    failures += not ok
    return 1 if failures else 0


def _cmd_verify(args, out) -> int:
    if args.what == "genus-identities":
        return _verify_genus_identities(args, out)
    if args.what == "asymptotic":
        return _verify_asymptotic(args, out)
    if args.what == "properties":
        return _verify_properties(args, out)
    code = 0
    code |= _verify_tables(out)
    code |= _verify_genus_identities(args, out)
    code |= _verify_properties(args, out)
    code |= _verify_asymptotic(args, out)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphcalc",
        description="Exact generating functions for colored modular graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, trunc_default=None, init=True):
        p.add_argument("--r", type=int, default=1,
                       help="number of colors (default 1)")
        p.add_argument("--trunc", type=_parse_trunc,
                       default=trunc_default and _parse_trunc(trunc_default),
                       required=trunc_default is None,
                       help="truncation box, e.g. Dx=4,Ds=3,G=2")
        if init:
            p.add_argument("--init", default="symbolic",
                           help="initial data: symbolic, builtin:comb, "
                                "builtin:stable, or JSON "
                                "{\"a[g;n1,...,nr]\": \"num/den\"}")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("psi", help="solve the vertex-expansion flow")
    add_common(p)
    p.add_argument("--connected", action="store_true",
                   help="connected series (log of the full one)")
    p.set_defaults(func=_cmd_psi)

    p = sub.add_parser("genus", help="a single genus layer")
    add_common(p)
    p.add_argument("--g", type=int, required=True)
    p.set_defaults(func=_cmd_genus)

    p = sub.add_parser("stable-poly", help="stable graph polynomial P_g")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--comb", action="store_true",
                   help="pure combinatorial specialization")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_stable_poly)

    p = sub.add_parser("counting", help="genus layer of the counting series")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--kind", choices=("comb", "stable"), required=True)
    p.add_argument("--trunc", type=_parse_trunc, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_counting)

    p = sub.add_parser("enumerate", help="list graph isomorphism classes")
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--trunc", type=_parse_trunc, required=True,
                   help="Dx bounds tails per color, Ds the edge vertices, "
                        "G the genus")
    p.add_argument("--all", action="store_true",
                   help="include disconnected graphs")
    p.add_argument("--stable", action="store_true")
    p.add_argument("--min-genus", type=int, default=None)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("verify", help="consistency and oracle checks")
    p.add_argument("what", choices=("genus-identities", "asymptotic",
                                    "properties", "all"))
    add_common(p, trunc_default="Dx=2,Ds=2,G=2")
    p.add_argument("--quartic", action="store_true",
                   help="accepted for compatibility; the numeric check "
                        "always uses the quartic potential")
    p.add_argument("--G", type=int, default=3,
                   help="terms kept in the numeric asymptotic check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100,
                   help="instances per randomized property")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except (SeriesError, StablePolyError, EnumerationError,
            argparse.ArgumentTypeError) as exc:
        parser.exit(2, "graphcalc: error: %s\n" % exc)


if __name__ == "__main__":
    sys.exit(main())
