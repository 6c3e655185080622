"""Command-line interface.

Exit codes: 0 success (or isomorphic), 1 non-isomorphic, 2 usage or parse
error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import random
import sys
from typing import IO, Iterator

from . import bench
from .formats import GraphFormat, ParseError, emit, format_for_path, read_records
from .graph import Graph, apply
from .oracle import DEFAULT_CAP, OracleRefused, all_graphs, brute_force
from .refinement import InvariantError
from .search import canonicalize

EXIT_OK, EXIT_NONISO, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _resolve_format(path: str, given: str | None) -> GraphFormat:
    if given:
        return GraphFormat(given)
    fmt = format_for_path(path)
    if fmt is None:
        raise UsageError(f"cannot infer format of {path!r}; pass --format")
    return fmt


@contextlib.contextmanager
def _open(path: str) -> Iterator[IO[str]]:
    if path == "-":
        yield sys.stdin
    else:
        try:
            fh = open(path)
        except OSError as exc:
            raise UsageError(f"cannot open {path}: {exc.strerror}") from exc
        with fh:
            yield fh


def _records(path: str, fmt: GraphFormat) -> Iterator[Graph]:
    with _open(path) as fh:
        for _, g in read_records(fh, fmt):
            yield g


def cmd_canon(args, out: IO[str]) -> int:
    fmt = _resolve_format(args.input, args.format)
    for g in _records(args.input, fmt):
        form = canonicalize(g)
        print(emit(form.graph(), fmt), file=out)
        if args.emit_labeling:
            print(" ".join(map(str, form.labeling)), file=out)
    return EXIT_OK


def cmd_aut(args, out: IO[str]) -> int:
    fmt = _resolve_format(args.input, args.format)
    for g in _records(args.input, fmt):
        print(canonicalize(g).aut_count, file=out)
    return EXIT_OK


def _single(path: str, fmt: GraphFormat) -> Graph:
    graphs = list(_records(path, fmt))
    if len(graphs) != 1:
        raise UsageError(f"{path}: expected exactly one graph, found {len(graphs)}")
    return graphs[0]


def cmd_iso(args, out: IO[str]) -> int:
    a = _single(args.a, _resolve_format(args.a, args.format))
    b = _single(args.b, _resolve_format(args.b, args.format))
    same = a.n == b.n and canonicalize(a).matrix == canonicalize(b).matrix
    print("isomorphic" if same else "non-isomorphic", file=out)
    return EXIT_OK if same else EXIT_NONISO


def check_order(n: int, directed: bool, rng: random.Random) -> tuple[int, int, int, Graph | None]:
    """Compare search and oracle on every labeled graph of order ``n``.

    Returns ``(graphs, classes, mismatches, first_counterexample)``.
    """
    classes: dict[bytes, bytes] = {}
    seen_forms: dict[bytes, bytes] = {}
    mismatches = 0
    first = None
    total = 0
    for g in all_graphs(n, directed):
        total += 1
        form = canonicalize(g)
        truth = brute_force(g)
        p = list(range(n))
        rng.shuffle(p)
        ok = form.aut_count == truth.aut_count
        ok &= canonicalize(apply(p, g)).matrix == form.matrix
        # isomorphic graphs share one form, non-isomorphic graphs never do
        ok &= classes.setdefault(truth.min_matrix, form.matrix) == form.matrix
        ok &= seen_forms.setdefault(form.matrix, truth.min_matrix) == truth.min_matrix
        if not ok:
            mismatches += 1
            first = first or g
    return total, len(classes), mismatches, first


def cmd_check(args, out: IO[str]) -> int:
    if args.max_order > DEFAULT_CAP:
        raise UsageError(f"--max-order {args.max_order} exceeds oracle cap {DEFAULT_CAP}")
    rng = random.Random(args.seed)
    kind = "digraphs" if args.directed else "graphs"
    all_classes = all_graphs_seen = all_bad = 0
    first = None
    for n in range(1, args.max_order + 1):
        total, classes, bad, cx = check_order(n, args.directed, rng)
        print(f"order {n}: checked {classes} isomorphism classes / {total} {kind}, {bad} mismatches", file=out)
        all_classes += classes
        all_graphs_seen += total
        all_bad += bad
        first = first or cx
    print(f"total: checked {all_classes} isomorphism classes / {all_graphs_seen} {kind}, {all_bad} mismatches", file=out)
    if all_bad:
        print(f"first counterexample: {emit(first, GraphFormat.DIGRAPH6)}", file=out)
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_convert(args, out: IO[str]) -> int:
    src = _resolve_format(args.input, getattr(args, "from"))
    dst = GraphFormat(args.to)
    with _open(args.input) as fh:
        for line, g in read_records(fh, src):
            try:
                text = emit(g, dst)
            except ValueError as exc:
                if not args.skip_bad:
                    raise UsageError(f"record at line {line}: {exc}") from exc
                print(f"skipping record at line {line}: {exc}", file=sys.stderr)
                continue
            print(text, file=out)
    return EXIT_OK


def cmd_bench(args, out: IO[str]) -> int:
    limit = bench.parse_limit(args.limit)
    if args.mode == "er":
        records = bench.run_er_sweep(args.count, args.n_min, args.n_max, args.seed, limit,
                                     directed=args.directed, workers=args.jobs)
    else:
        records = bench.run_worst_case(args.orders, limit, workers=args.jobs)
    if args.out == "-":
        bench.write_rows(records, out)
    else:
        bench.write_csv(records, args.out)
    timeouts = sum(r.status == "timeout" for r in records)
    logging.getLogger(__name__).info("%d records, %d timeouts", len(records), timeouts)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="starcanon", description="Canonical labeling and automorphism group order of graphs.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    formats = [f.value for f in GraphFormat]

    p = sub.add_parser("canon", help="print canonical forms")
    p.add_argument("input", help="input file, or - for stdin")
    p.add_argument("--format", choices=formats)
    p.add_argument("--emit-labeling", action="store_true", help="also print each canonical labeling")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("aut", help="print automorphism group orders")
    p.add_argument("input")
    p.add_argument("--format", choices=formats)
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("iso", help="test two graphs for isomorphism")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--format", choices=formats)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("check", help="compare against brute force on all small graphs")
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--directed", action="store_true")
    p.add_argument("--seed", type=int, default=0, help="seed for the relabeling checks")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("convert", help="re-encode a graph file")
    p.add_argument("input")
    p.add_argument("--from", choices=formats)
    p.add_argument("--to", choices=formats, required=True)
    p.add_argument("--skip-bad", action="store_true", help="skip records the target format cannot hold")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("bench", help="timed canonicalization sweeps, CSV output")
    p.add_argument("mode", choices=["er", "worst"])
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--n-min", type=int, default=10)
    p.add_argument("--n-max", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--directed", action="store_true")
    p.add_argument("--orders", type=int, nargs="+", default=[3, 5, 7, 9, 11])
    p.add_argument("--limit", default="600s", help="per-graph time limit, e.g. 10s or 500ms")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out", default="-", help="CSV path, or - for stdout")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None, out: IO[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose or args.command == "bench" else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))
    out = out or sys.stdout
    try:
        return args.func(args, out)
    except (UsageError, ParseError, OracleRefused, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
