"""Command-line interface.

Exit codes: 0 success, 1 negative result (validation violations,
non-isomorphic inputs, unrealizable graph), 2 parse/schema errors,
64 usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .enumeration import EnumBounds, enumerate_pairs
from .graph import classify_separation
from .isomorphism import (
    REVERSIBLE,
    ORIENTED,
    canonical_form,
    pair_isomorphic,
)
from .model_io import (
    ParseError,
    SchemaError,
    SemanticError,
    export_dot,
    parse_model,
    serialize_model,
)
from .multigraph import Multigraph
from .reconstruction import NotRealizableError, realize_multigraph, reconstruct

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_PARSE = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _mode(args):
    return REVERSIBLE if args.reverse_allowed else ORIENTED


def _load(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model(fh.read())


def _load_graph(path: str) -> Multigraph:
    import json

    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno)
    if not isinstance(doc, dict) or set(doc) != {"vertices", "edges"}:
        raise SchemaError([])
    edges = {}
    for entry in doc["edges"]:
        if not isinstance(entry, dict) or set(entry) != {"id", "ends"} \
                or not 1 <= len(entry["ends"]) <= 2:
            raise SchemaError([])
        edges[entry["id"]] = frozenset(entry["ends"])
    return Multigraph.build(doc["vertices"], edges)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flowinv",
                     description="surface-flow invariant toolbox")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_reversal(p):
        p.add_argument("--reverse-allowed", action="store_true",
                       help="treat orientation-reversed models as equal")

    p = sub.add_parser("validate", help="check one model file")
    p.add_argument("file")

    p = sub.add_parser("canon", help="print the canonical digest of a model")
    p.add_argument("file")
    with_reversal(p)

    p = sub.add_parser("iso", help="decide isomorphism of two models")
    p.add_argument("file_a")
    p.add_argument("file_b")
    with_reversal(p)

    p = sub.add_parser("classify", help="separation axioms of the orbit spaces")
    p.add_argument("file")

    p = sub.add_parser("reconstruct", help="surface signature per component")
    p.add_argument("file")

    p = sub.add_parser("realize",
                       help="realize an abstract multi-graph as a model")
    p.add_argument("graph_file")

    p = sub.add_parser("enumerate", help="stream model classes within bounds")
    p.add_argument("--max-saddles", type=int, default=0)
    p.add_argument("--max-k-sum", type=int, default=0)
    p.add_argument("--max-centers", type=int, default=0)
    p.add_argument("--max-n", type=int, default=0)
    p.add_argument("--max-b", type=int, default=0)
    p.add_argument("--max-annuli", type=int, default=0)
    p.add_argument("--max-tori", type=int, default=0)
    p.add_argument("--closed-only", action="store_true")
    p.add_argument("--orientable-only", action="store_true")
    with_reversal(p)

    p = sub.add_parser("export-dot", help="Graphviz view of a model")
    p.add_argument("file")
    p.add_argument("--which", choices=("graph", "diagram"), required=True)

    return parser


def _cmd_validate(args) -> int:
    try:
        _load(args.file)
    except SemanticError as exc:
        for d in exc.diagnostics:
            print(d.render(), file=sys.stderr)
        return EXIT_NEGATIVE
    print("OK")
    return EXIT_OK


def _cmd_canon(args) -> int:
    print(canonical_form(_load(args.file), _mode(args)).digest())
    return EXIT_OK


def _cmd_iso(args) -> int:
    a, b = _load(args.file_a), _load(args.file_b)
    witness = pair_isomorphic(a, b, _mode(args))
    if witness is None:
        print("NO")
        return EXIT_NEGATIVE
    print("YES")
    print(f"orientation={'reversed' if witness.reversed_orientation else 'preserved'}")
    for title, mapping in (("saddle", witness.saddles),
                           ("separatrix", witness.separatrices),
                           ("vertex", witness.vertices),
                           ("annulus", witness.annuli)):
        for src in sorted(mapping):
            print(f"{title} {src} -> {mapping[src]}")
    return EXIT_OK


def _cmd_classify(args) -> int:
    report = classify_separation(_load(args.file))

    def flag(value):
        return "true" if value else "false"

    print(f"sv_t0={flag(report.sv_t0)} sv_t1={flag(report.sv_t1)}"
          f" sv_t2={flag(report.sv_t2)} svex_t1={flag(report.svex_t1)}"
          f" svex_t2={flag(report.svex_t2)}")
    return EXIT_OK


def _cmd_reconstruct(args) -> int:
    _, signature = reconstruct(_load(args.file))
    for line in signature.summary_lines():
        print(line)
    return EXIT_OK


def _cmd_realize(args) -> int:
    try:
        pair = realize_multigraph(_load_graph(args.graph_file))
    except NotRealizableError as exc:
        print(f"not realizable: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    sys.stdout.write(serialize_model(pair))
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    bounds = EnumBounds(
        max_saddles=args.max_saddles,
        max_k_sum=args.max_k_sum,
        max_centers=args.max_centers,
        max_n=args.max_n,
        max_b=args.max_b,
        max_annuli=args.max_annuli,
        max_tori=args.max_tori,
        closed_only=args.closed_only,
        orientable_only=args.orientable_only,
        mode=_mode(args),
    )
    for pair in enumerate_pairs(bounds):
        digest = canonical_form(pair, bounds.mode).digest()
        print(f"{digest} {serialize_model(pair, compact=True)}")
    return EXIT_OK


def _cmd_export_dot(args) -> int:
    sys.stdout.write(export_dot(_load(args.file), args.which))
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "canon": _cmd_canon,
    "iso": _cmd_iso,
    "classify": _cmd_classify,
    "reconstruct": _cmd_reconstruct,
    "realize": _cmd_realize,
    "enumerate": _cmd_enumerate,
    "export-dot": _cmd_export_dot,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SchemaError as exc:
        for d in exc.diagnostics:
            print(f"schema error: {d.render()}", file=sys.stderr)
        if not exc.diagnostics:
            print("schema error: malformed graph document", file=sys.stderr)
        return EXIT_PARSE
    except SemanticError as exc:
        for d in exc.diagnostics:
            print(f"invalid model: {d.render()}", file=sys.stderr)
        return EXIT_NEGATIVE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
