"""Command line entry point: ``tforms analyze|zeta|graph|reduce|toroidal``."""

from __future__ import annotations

import argparse
import json
import sys

from . import curves, graphs, hecke, local, report


def _graph_for(name):
    if name.startswith("p1"):
        return graphs.graph_p1(report._q_of(name))
    return graphs.graph_elliptic(curves.curve(name).q)


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_analyze(args):
    rep = report.run_full_analysis(args.field, args.depth, args.iterations, args.precision)
    sys.stdout.write(rep.to_json() if args.format == "json" else rep.to_markdown())
    return 0 if rep.ok else 1


def cmd_zeta(args):
    c = curves.curve(args.field)
    out = {"field": c.name, "q": c.q, "P": curves.lpolynomial(c).to_list()}
    if c.is_elliptic:
        out["counts"] = {"k1": curves.enumerate_points(c, 1).count,
                         "k2": curves.enumerate_points(c, 2).count}
        if args.cover == "constant":
            quot = curves.constant_ext_quotient(c)
        else:
            cover = curves.genus2_cover(c)
            out["cover"] = {"name": cover.name, "P": curves.lpolynomial(cover).to_list()}
            quot = curves.genus2_cover_quotient(c)
        out["quotient"] = quot.to_list()
        out["rendered"] = quot.render()
    sys.stdout.write(_dump(out))
    return 0


def cmd_graph(args):
    g = _graph_for(args.field)
    if args.dot:
        sys.stdout.write(g.to_dot())
    else:
        sys.stdout.write(_dump({"graph": g.to_json(), "validation": graphs.validate_graph(g).summary()}))
    return 0 if graphs.validate_graph(g).ok else 1


def cmd_reduce(args):
    c = curves.curve(args.field)
    places = curves.degree_two_places(c)
    match = [pl for pl in places if pl.index == args.place]
    if not match:
        sys.stderr.write(f"place index must be in 1..{len(places)}\n")
        return 2
    precision = report._precision(args.precision)
    col = local.phi_p_column(c, match[0], precision, places)
    if args.format == "json":
        sys.stdout.write(_dump({
            "field": c.name, "place": args.place, "ell": match[0].ell.render(),
            "tally": col.tally_json(),
            "reductions": [{"coset": r.source.note, "vertex": str(r.vertex),
                            "chain": [m.to_json() for m in r.chain]} for r in col.reductions],
        }))
    else:
        for r in col.reductions:
            print(f"{r.source.note} -> {r.vertex}")
            for m in r.chain:
                print(f"    {m.side:5s} {m.label}")
        print("tally: " + ", ".join(f"{n} {v}" for v, n in col.tally_json().items()))
    return 0


def cmd_toroidal(args):
    name = args.field
    g = _graph_for(name)
    dN, dK = report.default_parameters(name)
    N = args.depth or dN
    K = args.iterations or dK
    kind = "p1-constant" if name.startswith("p1") else "elliptic-constant"
    system = hecke.toroidal_system(g, graphs.torus_orbit(g.q, kind), K, N)
    S = hecke.solve_space(system)
    out = {"field": name, "q": g.q, "depth": N, "iterations": K, "dimension": S.dim,
           "basis": [b.render(ray=6) for b in S.basis], "spectrum": [], "cusp_dimension": 0}
    if S.dim:
        dec = hecke.eigen_decompose(g, S)
        out["spectrum"] = [{"lambda": lam, "mult": m} for lam, m in dec.spectrum()]
        out["cusp_dimension"] = hecke.cusp_subspace(dec).dim
    sys.stdout.write(_dump(out))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="tforms", description="Toroidal automorphic forms on quotient graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run the full pipeline for one field")
    a.add_argument("--field", required=True, choices=report.FIELDS)
    a.add_argument("--depth", type=int, help="truncation depth N")
    a.add_argument("--iterations", type=int, help="number of Hecke iterations K")
    a.add_argument("--precision", type=int, help="Laurent series precision")
    a.add_argument("--format", choices=("json", "md"), default="json")
    a.set_defaults(func=cmd_analyze)

    z = sub.add_parser("zeta", help="L-polynomials and zeta quotients")
    z.add_argument("--field", required=True, choices=("e2", "e3", "e4", "p1_2", "p1_3", "p1_4"))
    z.add_argument("--cover", choices=("constant", "genus2"), default="constant")
    z.set_defaults(func=cmd_zeta)

    g = sub.add_parser("graph", help="the quotient graph with Hecke weights")
    g.add_argument("--field", required=True, choices=report.FIELDS)
    g.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    g.set_defaults(func=cmd_graph)

    r = sub.add_parser("reduce", help="reduce the Phi_P cosets at a degree-two place")
    r.add_argument("--field", required=True, choices=("e2", "e3", "e4"))
    r.add_argument("--place", type=int, required=True)
    r.add_argument("--precision", type=int)
    r.add_argument("--format", choices=("text", "json"), default="text")
    r.set_defaults(func=cmd_reduce)

    t = sub.add_parser("toroidal", help="the space cut out by the toroidal rows")
    t.add_argument("--field", required=True, choices=report.FIELDS)
    t.add_argument("--depth", type=int)
    t.add_argument("--iterations", type=int)
    t.set_defaults(func=cmd_toroidal)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except report.AnalysisError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
