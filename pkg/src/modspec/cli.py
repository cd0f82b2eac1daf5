"""Command-line front end: ``analyze``, ``domains``, ``verify`` and ``generate``.

Exit codes: 0 success, 1 usage error, 2 unparseable input, 3 unmet
precondition (disconnected or non-regular graph), 4 violated bound.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .bounds import verify_all
from .errors import GraphFormatError, OracleCapError, PreconditionError
from .generators import FAMILIES, FamilySpec
from .graph import format_edge_list, parse_graph
from .nodal import check_laplacian_bound, check_positive_bound
from .oracle import CUT_CAP, PARTITION_CAP
from .report import analysis_report, bounds_document, domains_document, dumps

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_PRECONDITION, EXIT_VIOLATION = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load(path: str):
    try:
        text = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_graph(text)


def _print_text(doc: dict, indent: int = 0) -> None:
    pad = "  " * indent
    for key in sorted(doc):
        value = doc[key]
        if isinstance(value, dict):
            print(f"{pad}{key}:")
            _print_text(value, indent + 1)
        else:
            print(f"{pad}{key}: {value}")


def cmd_analyze(args) -> int:
    g = _load(args.path)
    if not g.is_connected() or g.n < 2:
        raise PreconditionError("spectral analysis needs a connected graph with n >= 2; "
                                f"this one has n = {g.n} and is "
                                f"{'connected' if g.is_connected() else 'disconnected'}")
    doc = analysis_report(g, args.null_model, args.gamma, __version__)
    if args.json:
        sys.stdout.write(dumps(doc))
        return EXIT_OK
    s = doc["spectral"]
    print(f"n = {g.n}  vol G = {g.volume:g}  degrees in [{g.d_min:g}, {g.d_max:g}]")
    print(f"null model = {s['null_model']}  gamma = {s['gamma']:g}")
    print(f"m(G) = {s['m']:.12g} (multiplicity {s['m_multiplicity']})")
    print(f"a(G) = {s['a']:.12g}  a(G0) = {s['a0']:.12g}")
    c = s["sign_counts"]
    print(f"eigenvalues of M: {c['positive']} positive, {c['negative']} negative, "
          f"{c['zero']} zero")
    print(f"interlacing holds: {doc['interlacing']['holds']}")
    print(f"Fiedler chain holds: {doc['fiedler_chain']['holds']}")
    return EXIT_OK


def cmd_domains(args) -> int:
    g = _load(args.path)
    if not 1 <= args.index <= g.n:
        raise UsageError(f"--index must lie in 1..{g.n}")
    if not g.is_connected():
        raise PreconditionError("nodal domain theorems need a connected graph")
    if args.matrix == "L":
        rep = check_laplacian_bound(g, args.index)
    else:
        rep = check_positive_bound(g, args.index, args.matrix)
    doc = domains_document(g, rep, __version__)
    if args.json:
        sys.stdout.write(dumps(doc))
    else:
        print(f"{doc['matrix']} eigenvector {doc['index']} ({doc['index_convention']}), "
              f"eigenvalue {doc['eigenvalue']:.12g}")
        for kind in ("strong", "weak"):
            print(f"{kind} domains: {len(doc[kind])}")
            for d in doc[kind]:
                print(f"  {'+' if d['sign'] > 0 else '-'} {' '.join(d['vertices'])}")
        b = doc["bound"]
        print(f"bound ({b['counts']}): strong {b['strong_count']} <= {b['strong_bound']}, "
              f"weak {b['weak_count']} <= {b['weak_bound']}: "
              f"{b['skipped'] or ('holds' if b['holds'] else 'VIOLATED')}")
    return EXIT_VIOLATION if rep.holds is False else EXIT_OK


def cmd_verify(args) -> int:
    g = _load(args.path)
    report = verify_all(g, args.cut_cap, args.partition_cap)
    if args.json:
        sys.stdout.write(dumps(bounds_document(g, report, __version__)))
    else:
        for r in report.records:
            if r.holds is None:
                print(f"{r.name:24s} {r.detail}")
            else:
                state = "holds" if r.holds else "VIOLATED"
                print(f"{r.name:24s} {r.lhs:.10g} <= {r.rhs:.10g}  slack {r.slack:.3g}  {state}")
    return EXIT_OK if report.holds else EXIT_VIOLATION


_PARAMS = {
    "star-loops": ("alpha", "beta", "m"),
    "clique-of-cliques": ("p", "q", "m"),
    "chung-lu": ("degrees", "seed"),
    "random-regular": ("k", "n", "seed"),
    "clique": ("n",), "star": ("n",), "cycle": ("n",), "path": ("n",), "petersen": (),
}


def cmd_generate(args) -> int:
    given = {k: getattr(args, k) for k in ("alpha", "beta", "m", "p", "q", "n", "k",
                                           "degrees", "seed")
             if getattr(args, k) is not None}
    needed = _PARAMS[args.family]
    missing = [k for k in needed if k not in given]
    extra = [k for k in given if k not in needed]
    if missing or extra:
        parts = [f"missing --{', --'.join(missing)}" if missing else "",
                 f"unused --{', --'.join(extra)}" if extra else ""]
        raise UsageError(f"{args.family}: " + "; ".join(p for p in parts if p))
    if args.loops:
        if args.family != "chung-lu":
            raise UsageError("--loops only applies to chung-lu")
        given["loops"] = True
    try:
        g, meta = FamilySpec(args.family, given).build()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    meta.update(schema_version="1", tool_version=__version__, n=g.n, volume=g.volume)
    text = format_edge_list(g, header=f"{args.family} {' '.join(f'{k}={v}' for k, v in sorted(given.items()))}")
    if args.out:
        out = Path(args.out)
        out.write_text(text)
        out.with_name(out.name + ".json").write_text(dumps(meta))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _degrees(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("degrees must be comma-separated numbers") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="modspec", description="Spectral modularity analysis of small graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="spectra, m(G), a(G) and consistency checks")
    a.add_argument("path")
    a.add_argument("--null-model", choices=["chung-lu", "er"], default="chung-lu")
    a.add_argument("--gamma", type=float, default=1.0)
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("domains", help="nodal domains of one eigenvector")
    d.add_argument("path")
    d.add_argument("--matrix", choices=["M", "A", "L"], default="M")
    d.add_argument("--index", type=int, default=1,
                   help="1-based; descending for M and A, ascending for L")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_domains)

    v = sub.add_parser("verify", help="check every modularity bound against exact optima")
    v.add_argument("path")
    v.add_argument("--cut-cap", type=int, default=CUT_CAP)
    v.add_argument("--partition-cap", type=int, default=PARTITION_CAP)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    gen = sub.add_parser("generate", help="write a graph from a named family")
    gen.add_argument("family", choices=FAMILIES)
    for name in ("alpha", "beta"):
        gen.add_argument(f"--{name}", type=float)
    for name in ("m", "p", "q", "n", "k", "seed"):
        gen.add_argument(f"--{name}", type=int)
    gen.add_argument("--degrees", type=_degrees)
    gen.add_argument("--loops", action="store_true")
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_generate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "null_model", None) == "er":
        args.null_model = "erdos-renyi"
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"modspec: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphFormatError as exc:
        print(f"modspec: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"modspec: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OracleCapError as exc:
        print(f"modspec: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"modspec: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
