"""Command-line front end: ``graphroots <subcommand> ...``.

Exit codes: 0 success (roots found / verified / all checks passed),
1 negative outcome (no root, verification or check failed), 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import harness
from .canon import are_isomorphic, canonical_form
from .gadgets import ATTACH_POINTS, chain_family, chain_patterns, family_root_count, gadget, gadget_square
from .graph import girth, kth_power, square
from .io import FORMATS, FormatError, convert, dumps, read_graph, write_graph
from .labeled import LabeledGraph
from .reduction import (
    LinkingPolicy,
    ReductionError,
    RootDecodeError,
    assignment_to_root,
    build_reduction_graph,
    root_to_assignment,
)
from .roots import FOREST, find_square_roots, verify_root
from .sat import InstanceError, minimize_intersections, parse_instance, satisfies

EXIT_OK, EXIT_NONE, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


def _girth_arg(text: str):
    if text.lower() in ("inf", "forest", "infinity"):
        return FOREST
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"girth bound must be an integer >= 3 or 'inf', got {text!r}")
    if value < 3:
        raise argparse.ArgumentTypeError("girth bound must be at least 3")
    return value


def _fmt_girth(value) -> str:
    return "inf" if value == math.inf else str(value)


def _untimed(stats: dict) -> dict:
    return {k: v for k, v in stats.items() if k != "seconds"}


def _write(g, out: str | None, fmt: str | None, labels=None) -> None:
    if out:
        write_graph(g, out, fmt, labels)
    else:
        sys.stdout.write(dumps(g, fmt or "json", labels))


def _parse_assignment(text: str) -> dict:
    """``x=1,b=true`` or a JSON object, or a path to a JSON file."""
    path = Path(text)
    if path.is_file():
        text = path.read_text()
    text = text.strip()
    if text.startswith("{"):
        return {str(k): bool(v) for k, v in json.loads(text).items()}
    out = {}
    for item in filter(None, (p.strip() for p in text.split(","))):
        if "=" not in item:
            raise CliError(f"assignment item {item!r} is not var=value")
        var, val = item.split("=", 1)
        val = val.strip().lower()
        if val not in ("0", "1", "true", "false", "t", "f"):
            raise CliError(f"bad truth value {val!r} for {var}")
        out[var.strip()] = val in ("1", "true", "t")
    return out


# -- subcommands --------------------------------------------------------------


def cmd_power(args) -> int:
    g = read_graph(args.input)
    _write(kth_power(g, args.k), args.out, args.format)
    return EXIT_OK


def cmd_girth(args) -> int:
    g = read_graph(args.input)
    print(_fmt_girth(girth(g)))
    return EXIT_OK


def cmd_iso(args) -> int:
    a, b = read_graph(args.a), read_graph(args.b)
    same, mapping = are_isomorphic(a, b, witness=True)
    if args.canonical:
        print(json.dumps({"a": list(canonical_form(a).edges), "b": list(canonical_form(b).edges)}))
    print("isomorphic" if same else "not isomorphic")
    if same and args.witness:
        print(json.dumps(mapping, sort_keys=True))
    return EXIT_OK if same else EXIT_NONE


def cmd_gadget(args) -> int:
    if args.which in ("g1", "g2"):
        g = gadget(args.which.upper()).graph
        _write(g, args.out, args.format)
    elif args.which == "square":
        _write(gadget_square(), args.out, args.format)
    else:
        pattern = list(args.pattern)
        attach = args.attach.split(",") if args.attach else ["1"] * (len(pattern) - 1)
        fam = chain_family(pattern, attach)
        h = square(fam.graph) if args.square else fam.graph
        _write(h, args.out, args.format, fam.labels)
    return EXIT_OK


def cmd_family(args) -> int:
    attach = args.attach.split(",") if args.attach else ["1"] * (args.k - 1)
    members = [chain_family(p, attach) for p in chain_patterns(args.k)]
    sq = square(members[0].graph)
    count = family_root_count(sq, [m.graph for m in members])
    print(f"k={args.k} attach={','.join(attach)} patterns={len(members)} classes={count} square_edges={sq.m}")
    if args.emit:
        out = Path(args.emit)
        out.mkdir(parents=True, exist_ok=True)
        write_graph(sq, out / "square.json", "json")
        for m in members:
            write_graph(m.graph, out / f"root_{m.summary['pattern']}.json", "json", m.labels)
    return EXIT_OK


def _read_instance(path: str):
    return parse_instance(Path(path).read_text())


def cmd_reduce(args) -> int:
    phi = _read_instance(args.input)
    if args.minimize:
        phi, log = minimize_intersections(phi)
        for entry in log:
            print("preprocess:", " ".join(map(str, entry)), file=sys.stderr)
    gphi = build_reduction_graph(phi, args.policy)
    _write(gphi.graph, args.out, args.format, gphi.labels)
    if args.summary:
        Path(args.summary).write_text(json.dumps(gphi.summary, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_extract(args) -> int:
    g, labels = read_graph(args.gphi, with_labels=True)
    if not labels:
        raise CliError(f"{args.gphi} carries no vertex labels; write G(phi) as JSON")
    h = read_graph(args.root)
    phi = _read_instance(args.instance) if args.instance else None
    try:
        truth = root_to_assignment(LabeledGraph(g, labels), h, phi)
    except RootDecodeError as err:
        print(f"decode failed: {err}")
        return EXIT_NONE
    print(json.dumps(truth, sort_keys=True))
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    phi = _read_instance(args.input)
    given = _parse_assignment(args.assign)
    unknown = sorted(set(given) - set(phi.variables))
    if unknown:
        raise CliError(f"assignment names unknown variables {unknown}")
    # unlisted variables are FALSE
    assignment = {v: given.get(v, False) for v in phi.variables}
    if not satisfies(phi, assignment):
        print("assignment does not satisfy the instance")
        return EXIT_NONE
    gphi = build_reduction_graph(phi, args.policy)
    root = assignment_to_root(phi, assignment, args.policy)
    rep = verify_root(root.graph, gphi.graph, 5)
    print(f"forward: {rep.describe()}")
    if not rep.ok:
        return EXIT_NONE
    back = root_to_assignment(gphi, root.graph, phi)
    same = back == assignment
    print(f"backward: decoded {json.dumps(back, sort_keys=True)} ({'matches' if same else 'differs'})")
    if args.out:
        write_graph(root.graph, args.out, None, root.labels)
    return EXIT_OK if same else EXIT_NONE


def cmd_root_find(args) -> int:
    g = read_graph(args.input)
    roots = find_square_roots(g, args.girth_min, limit=args.limit, up_to_iso=args.up_to_iso)
    flag = "" if roots.complete else " (limit reached, incomplete)"
    print(f"{len(roots)} root(s){flag}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for k, h in enumerate(roots, 1):
            write_graph(h, out / f"root{k:04d}.json", "json")
        (out / "stats.json").write_text(
            json.dumps({**_untimed(roots.stats), "complete": roots.complete, "count": len(roots)}, indent=2) + "\n"
        )
    return EXIT_OK if roots else EXIT_NONE


def cmd_root_verify(args) -> int:
    g, h = read_graph(args.square), read_graph(args.root)
    try:
        rep = verify_root(h, g, args.girth_min)
    except ValueError as err:
        raise CliError(str(err))
    print(rep.describe())
    return EXIT_OK if rep.ok else EXIT_NONE


def cmd_verify(args) -> int:
    names = None if args.suite == "all" else [s.strip() for s in args.suite.split(",")]
    reports = harness.run_suite(names, args.workdir, seed=args.seed)
    for rep in reports:
        print(rep.line())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_NONE


def cmd_convert(args) -> int:
    convert(args.input, args.out, args.from_format, args.to_format)
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphroots", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp):
        sp.add_argument("--format", choices=FORMATS, default=None, help="output format (default from suffix, else json)")

    sp = sub.add_parser("power", help="k-th power of a graph")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--out")
    fmt(sp)
    sp.set_defaults(func=cmd_power)

    sp = sub.add_parser("girth", help="length of a shortest cycle ('inf' for forests)")
    sp.add_argument("--in", dest="input", required=True)
    sp.set_defaults(func=cmd_girth)

    sp = sub.add_parser("iso", help="isomorphism test")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--witness", action="store_true", help="print the vertex mapping")
    sp.add_argument("--canonical", action="store_true", help="print both canonical edge lists")
    sp.set_defaults(func=cmd_iso)

    sp = sub.add_parser("gadget", help="emit G1, G2, their square or a chain of gadgets")
    sp.add_argument("which", choices=("g1", "g2", "square", "chain"))
    sp.add_argument("--pattern", default="12", help="block kinds for chain, e.g. 1212")
    sp.add_argument("--attach", help=f"comma-separated attach points from {','.join(ATTACH_POINTS)}")
    sp.add_argument("--square", action="store_true", help="emit the square of the chain")
    sp.add_argument("--out")
    fmt(sp)
    sp.set_defaults(func=cmd_gadget)

    sp = sub.add_parser("family", help="count isomorphism classes of a chain family")
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--attach")
    sp.add_argument("--emit", help="directory for the square and every member")
    sp.set_defaults(func=cmd_family)

    sp = sub.add_parser("reduce", help="build G(phi) from a clause file")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--policy", type=LinkingPolicy.parse, default=LinkingPolicy.CHAIN)
    sp.add_argument("--minimize", action="store_true", help="remove two-variable overlaps first")
    sp.add_argument("--out")
    sp.add_argument("--summary", help="write edge-class counts as JSON")
    fmt(sp)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("extract", help="read an assignment off a girth-5 root of G(phi)")
    sp.add_argument("--gphi", required=True, help="labeled G(phi) in JSON")
    sp.add_argument("--root", required=True)
    sp.add_argument("--instance", help="clause file; checks the decoded assignment")
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("roundtrip", help="assignment -> root -> square -> assignment")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--assign", required=True, help="x=1,y=0 or JSON object or JSON file")
    sp.add_argument("--policy", type=LinkingPolicy.parse, default=LinkingPolicy.CHAIN)
    sp.add_argument("--out", help="write the root")
    sp.set_defaults(func=cmd_roundtrip)

    sp = sub.add_parser("root", help="square-root search and verification")
    rsub = sp.add_subparsers(dest="root_command", required=True)
    rp = rsub.add_parser("find")
    rp.add_argument("--in", dest="input", required=True)
    rp.add_argument("--girth-min", type=_girth_arg, default=3)
    rp.add_argument("--limit", type=int)
    rp.add_argument("--up-to-iso", action="store_true")
    rp.add_argument("--out", help="directory for the roots")
    rp.set_defaults(func=cmd_root_find)
    rp = rsub.add_parser("verify")
    rp.add_argument("--square", required=True)
    rp.add_argument("--root", required=True)
    rp.add_argument("--girth-min", type=_girth_arg, default=3)
    rp.set_defaults(func=cmd_root_verify)

    sp = sub.add_parser("verify", help="run the acceptance checks")
    sp.add_argument("--suite", default="all", help="'all' or comma-separated ids such as A1,A2")
    sp.add_argument("--workdir", default="verify-out")
    sp.add_argument("--seed", type=int, default=harness.DEFAULT_SEED)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("convert", help="convert between edgelist, json and dot")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--from", dest="from_format", choices=FORMATS)
    sp.add_argument("--to", dest="to_format", choices=FORMATS)
    sp.set_defaults(func=cmd_convert)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, FormatError, InstanceError, ReductionError, harness.UnknownCheckError,
            ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
