"""Command-line interface: ``pluckertree <subcommand> ...``."""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import __version__
from .certificate import CertificateError, loads, render_polynomial, verify
from .complex import ComplexError, format_facets, load_complex, orient, pseudomanifold_check
from .generators import DATA_ENV, dataset, forbidden_facets, names, write_dataset
from .poly import PointConfiguration, evaluate
from .search import SearchLimits, Status, find_certificate

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NOT_FOUND = 3
EXIT_INTERRUPTED = 130


def _read_source(arg: str) -> tuple[str, str]:
    """(name, text) for a facet file path or an embedded dataset name."""
    p = Path(arg)
    if p.is_file():
        return p.stem, p.read_text()
    try:
        ds = dataset(arg)
    except KeyError:
        raise SystemExit(f"error: {arg}: no such file or dataset (see `pluckertree generate --list`)")
    return ds.name, ds.text


def _load(arg: str):
    name, text = _read_source(arg)
    return name, load_complex(text)


def _forbidden(arg: str | None, cx):
    if not arg:
        return []
    _, text = _read_source(arg)
    return forbidden_facets(text, cx)


def cmd_check(args) -> int:
    name, text = _read_source(args.complex)
    try:
        cx = load_complex(text)
        cls = pseudomanifold_check(cx)
    except ComplexError as exc:
        print(f"{name}: {exc}")
        return EXIT_FAIL
    f = ",".join(str(x) for x in cx.f_vector())
    kind = "closed" if cls.closed else f"bounded ({len(cls.components)} boundary components)"
    print(f"{name}: {kind} orientable, f=({f})")
    return EXIT_OK


def cmd_orient(args) -> int:
    name, text = _read_source(args.complex)
    try:
        cx = load_complex(text)
    except ComplexError as exc:
        print(f"{name}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.recompute:
        omega = orient(cx).omega
    else:
        omega = cx.omega
    out = format_facets(cx.vertices, cx.facets, [omega[f] for f in cx.facets])
    if args.output:
        Path(args.output).write_text(out)
        print(f"wrote {len(cx.facets)} signed facets to {args.output}")
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_relations(args) -> int:
    from . import gpgraph
    name, cx = _load(args.complex)
    graph = gpgraph.build(cx, _forbidden(args.forbidden, cx))
    ncons = int(graph.consistent.sum())
    print(f"{name}: {graph.num_relations} admissible relations, {ncons} sign-consistent nodes")
    if args.sample:
        rng = random.Random(args.seed)
        picks = sorted(rng.sample(range(graph.num_relations), min(args.sample, graph.num_relations)))
        table = graph.table
        for r in picks:
            rel = graph.relation(2 * r)
            terms = []
            for t in rel.terms:
                mono = f"{table.label(t.a)} {table.label(t.b)}"
                terms.append(("+ " if t.coeff > 0 else "- ") + mono)
            print(f"{graph.render(2 * r)} = " + " ".join(terms).lstrip("+ "))
    if args.dump_edges:
        with open(args.dump_edges, "w") as fh:
            n = graph.dump_edges(fh, consistent_only=True)
        print(f"wrote {n} edges to {args.dump_edges}")
    return EXIT_OK


def cmd_search(args) -> int:
    name, cx = _load(args.complex)
    forb = _forbidden(args.forbidden, cx)
    limits = SearchLimits(max_nodes=args.max_size, time_limit=args.time_limit,
                          prove_optimal=not args.no_prove, seed=args.seed)
    try:
        run = find_certificate(cx, forb, limits, name, method=args.method, configs=args.configs)
    except KeyboardInterrupt:
        print("interrupted: no incumbent")
        return EXIT_INTERRUPTED
    res = run.result
    rels, nodes = run.graph_size
    print(f"{name}: {rels} admissible relations, {nodes} sign-consistent nodes")
    if not res.found:
        what = {Status.INFEASIBLE: f"no positive tree with at most {args.max_size} nodes",
                Status.TIMEDOUT: f"time limit reached, lower bound {res.lower_bound}"}.get(res.status, "")
        print(f"status: {res.status.value}; {what}")
        return EXIT_NOT_FOUND
    cert, rep = run.certificate, run.report
    print(f"status: {res.status.value}; tree size {res.selection.size}")
    for i, rel in enumerate(cert.tree.nodes):
        print(f"  Γ_{i} = {rel.render(cx.vertices.labels)}")
    for c, i, j in cert.tree.edges:
        print(f"  Γ_{i} -- Γ_{j}  {cert.table.label(c)}")
    print("final polynomial:")
    print(_indent(render_polynomial(cert.final, cert.table)))
    if not rep.passed:
        print("verification failed; certificate not written")
        print(_indent("\n".join(rep.lines())))
        return EXIT_FAIL
    print("verification: all checks passed")
    if args.output:
        from .certificate import dumps
        Path(args.output).write_text(dumps(cert))
        print(f"wrote {args.output}")
    return EXIT_OK


def cmd_verify(args) -> int:
    name, cx = _load(args.complex)
    forb = _forbidden(args.forbidden, cx) or None
    try:
        # solids are read with the certificate's own forbidden list; --forbidden feeds check (f)
        cert = loads(Path(args.certificate).read_text(), cx)
    except (CertificateError, ValueError) as exc:
        print(f"{args.certificate}: (a) tree validity: FAIL - {exc}")
        return EXIT_FAIL
    rep = verify(cert, cx, forb, configs=args.configs, seed=args.seed)
    print(f"{name}: {cert.tree.size} relations, {len(cert.final)} monomials")
    print(_indent("\n".join(rep.lines())))
    print("final polynomial:")
    print(_indent(render_polynomial(cert.final, cert.table)))
    if rep.passed:
        print("PASS")
        return EXIT_OK
    print("FAIL: " + ", ".join(f"({k}) {rep.checks[k].name}" for k in rep.failed()))
    return EXIT_FAIL


def cmd_eval(args) -> int:
    name, cx = _load(args.complex)
    try:
        cert = loads(Path(args.certificate).read_text(), cx)
    except (CertificateError, ValueError) as exc:
        print(f"{args.certificate}: {exc}")
        return EXIT_FAIL
    rng = random.Random(args.seed)
    table = cert.table
    bad = 0
    for i in range(args.configs):
        X = PointConfiguration.random(table.n, table.d, rng)
        v = evaluate(cert.final, X, table)
        bad += v != 0
        print(f"config {i}: {v}")
    return EXIT_OK if bad == 0 else EXIT_FAIL


def cmd_generate(args) -> int:
    if args.list:
        for n in names():
            print(n)
        return EXIT_OK
    if not args.names:
        print("error: give dataset names or --list", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.output or ".")
    for n in args.names:
        try:
            path = write_dataset(n, out)
        except KeyError as exc:
            print(f"error: {exc.args[0]}", file=sys.stderr)
            return EXIT_USAGE
        print(f"wrote {path}")
    return EXIT_OK


def _indent(s: str) -> str:
    return "\n".join("  " + line for line in s.splitlines())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pluckertree",
        description="Non-realizability certificates for simplicial spheres via Plücker trees.",
        epilog=f"COMPLEX is a facet file or an embedded dataset name; ${DATA_ENV} overrides the data directory.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="purity, pseudomanifold class, orientability, f-vector")
    p.add_argument("complex")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("orient", help="print the signed facet list")
    p.add_argument("complex")
    p.add_argument("--recompute", action="store_true", help="ignore printed signs")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_orient)

    p = sub.add_parser("relations", help="count and sample admissible three-term relations")
    p.add_argument("complex")
    p.add_argument("--forbidden")
    p.add_argument("--sample", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump-edges", metavar="PATH")
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("search", help="find a minimum positive Plücker tree")
    p.add_argument("complex")
    p.add_argument("--forbidden", help="facets no surviving solid may be determined by")
    p.add_argument("--max-size", type=int, default=8)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-prove", action="store_true", help="stop at the first tree found")
    p.add_argument("--method", choices=["tree", "bnb"], default=None)
    p.add_argument("--configs", type=int, default=10, help="random configurations for check (e)")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="run checks (a)-(f) on a certificate")
    p.add_argument("complex")
    p.add_argument("certificate")
    p.add_argument("--forbidden")
    p.add_argument("--configs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", help="evaluate a certificate on random rational configurations")
    p.add_argument("complex")
    p.add_argument("certificate")
    p.add_argument("--configs", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("generate", help="write embedded or generated datasets as facet files")
    p.add_argument("names", nargs="*")
    p.add_argument("--list", action="store_true")
    p.add_argument("--output", "-o", help="directory (default: current)")
    p.set_defaults(func=cmd_generate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
