"""Command-line interface.

Exit codes: 0 success, 2 contradiction during saturation, 3 parse or
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

from .engine import (
    ContradictionError,
    EngineError,
    UnboundedAttributesError,
    lyon_existence,
    provenance_chain,
    prove_witness,
    saturate,
)
from .export import dumps, export_kb, friendship_to_dot, import_kb, quiver_to_dot
from .knotdata import KnotDataError
from .knots import FiberSurface, KnotError, KnotParseError, parse_knot
from .quiver import (
    CAVEAT,
    build_quiver,
    friendship_distance,
    friendship_graph,
    h_infinity,
    h_set,
    nth_friends,
    s_infinity,
    s_iter,
)
from .runner import (
    SEED_UNIVERSE,
    ConfigError,
    RunConfig,
    build_kb,
    load_table,
    run_report,
    summary_text,
)
from .slopes import atlas_rows

EXIT_OK = 0
EXIT_CONTRADICTION = 2
EXIT_CONFIG = 3


def _common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("universe and rules")
    g.add_argument("--universe", help=f"comma-separated knot expressions (default: {SEED_UNIVERSE!r})")
    g.add_argument("--universe-file", help="JSON config/list or text file of knot expressions")
    g.add_argument("--data", action="append", default=[], metavar="FILE",
                   help="extra knot-data JSON file (repeatable)")
    g.add_argument("--no-seed-data", action="store_true", help="do not load the shipped knot table")
    g.add_argument("--sum-depth", type=int)
    g.add_argument("--slope-bound", type=int)
    g.add_argument("--torus-cap", type=int)
    g.add_argument("--close-sums", action="store_true", default=None,
                   help="add all connected sums up to --sum-depth summands")
    g.add_argument("--add-torus", action="store_true", default=None,
                   help="add all torus knots T(p,q) with q <= --torus-cap")
    g.add_argument("--rules", help="comma-separated rule ids to enable (default: all)")
    g.add_argument("--assume", nargs=3, action="append", default=[],
                   metavar=("HOST", "GUEST", "yes|no"), help="inject an axiom")
    g.add_argument("--kb", help="load a saved knowledge base instead of deducing")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="knothost", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log saturation progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("atlas", help="table of slope knots K(m,n)")
    p.add_argument("--bound", type=int, default=5)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--fiber", choices=[f.value for f in FiberSurface], default="trefoil")
    p.add_argument("--data", action="append", default=[], metavar="FILE")
    p.add_argument("--no-seed-data", action="store_true")

    p = sub.add_parser("deduce", help="saturate and write the knowledge base as JSON")
    _common(p)
    p.add_argument("-o", "--output", help="write KB JSON here instead of stdout")

    p = sub.add_parser("query", help="look up a hosting judgment")
    _common(p)
    p.add_argument("what", choices=("host",))
    p.add_argument("host")
    p.add_argument("guest")

    p = sub.add_parser("friends", help="proved friends at a given distance")
    _common(p)
    p.add_argument("knot")
    p.add_argument("-n", type=int, default=1)

    p = sub.add_parser("distance", help="friendship distance over proved edges")
    _common(p)
    p.add_argument("knot")
    p.add_argument("other")

    p = sub.add_parser("reach", help="iterated hosting sets S^n, S^inf, H, H^inf")
    _common(p)
    p.add_argument("knot")
    p.add_argument("--steps", type=int, help="also print S^n for this n")

    p = sub.add_parser("witness", help="a knot the given knot provably does not host")
    _common(p)
    p.add_argument("knot")

    p = sub.add_parser("export-dot", help="hosting quiver or friendship graph as DOT")
    _common(p)
    p.add_argument("--show-negative", action="store_true")
    p.add_argument("--friendship", action="store_true")
    p.add_argument("-o", "--output")

    p = sub.add_parser("report", help="full JSON/DOT/text report")
    _common(p)
    p.add_argument("--out-dir", default="report")
    return parser


def config_from_args(args) -> RunConfig:
    rules = frozenset(r.strip() for r in args.rules.split(",") if r.strip()) if args.rules else None
    overrides = dict(
        sum_depth=args.sum_depth,
        slope_bound=args.slope_bound,
        torus_cap=args.torus_cap,
        close_sums=args.close_sums,
        add_torus=args.add_torus,
        enabled_rules=rules,
        universe_spec=[args.universe] if args.universe is not None else None,
    )
    if args.universe_file:
        config = RunConfig.from_file(args.universe_file, **overrides)
    else:
        config = RunConfig(**{k: v for k, v in overrides.items() if v is not None})
    config.data_files = list(config.data_files) + list(args.data)
    config.use_seed_data = not args.no_seed_data
    config.axioms = list(config.axioms) + [tuple(a) for a in args.assume]
    config.__post_init__()
    return config


def _fmt_dist(d) -> str:
    return "inf" if d == math.inf else str(d)


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _atlas(args) -> int:
    if args.bound < 1:
        raise ConfigError("--bound must be >= 1")
    config = RunConfig(data_files=args.data, use_seed_data=not args.no_seed_data)
    table = load_table(config)
    rows = atlas_rows(args.bound, table, FiberSurface(args.fiber))
    if args.format == "json":
        sys.stdout.write(dumps(rows))
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(
            buf, fieldnames=["m", "n", "genus", "euler", "identified_as", "degenerate"],
            lineterminator="\n",
        )
        writer.writeheader()
        writer.writerows(rows)
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def _dispatch(args) -> int:
    if args.command == "atlas":
        return _atlas(args)
    config = config_from_args(args)
    table = load_table(config)
    if args.command == "report":
        data = run_report(config, args.out_dir, table)
        sys.stdout.write(summary_text(data))
        return EXIT_OK
    if args.kb:
        kb = import_kb(Path(args.kb).read_text(), table)
    else:
        kb = saturate(build_kb(config, table))

    def knot(text):
        k = parse_knot(text, table)
        if k not in kb:
            raise ConfigError(f"{k} is not in the universe")
        return k

    if args.command == "deduce":
        _write(export_kb(kb), args.output)
        if args.output:
            print(f"{len(kb.judgments)} judgments over {len(kb.universe)} knots -> {args.output}")
        return EXIT_OK

    q = build_quiver(kb)
    if args.command == "query":
        host, guest = knot(args.host), knot(args.guest)
        j = kb.lookup(host, guest)
        if j is None:
            print(f"Hosts({host},{guest})=unknown")
        else:
            print(f"Hosts({host},{guest})={j.polarity}")
            for step in provenance_chain(kb, j.key):
                print(f"  {step}")
    elif args.command == "friends":
        g = friendship_graph(q)
        found = sorted(nth_friends(g, knot(args.knot), args.n))
        print(", ".join(map(str, found)) if found else "(none)")
        print(f"note: {CAVEAT}")
    elif args.command == "distance":
        g = friendship_graph(q)
        d = friendship_distance(g, knot(args.knot), knot(args.other))
        print(f"d_fr({args.knot},{args.other}) <= {_fmt_dist(d)}")
        print(f"note: {CAVEAT}")
    elif args.command == "reach":
        k = knot(args.knot)
        rows = [("S_inf", s_infinity(q, k)), ("H", h_set(q, k)), ("H_inf", h_infinity(q, k))]
        if args.steps is not None:
            rows.insert(0, (f"S^{args.steps}", s_iter(q, k, args.steps)))
        for name, items in rows:
            print(f"{name}({k}) >= {{{', '.join(map(str, sorted(items)))}}}")
        print(f"note: {CAVEAT}")
    elif args.command == "witness":
        k = parse_knot(args.knot, table)
        if k not in kb:
            kb = saturate(kb.extended([k]))
        witness, ext, j = prove_witness(k, kb)
        print(f"witness: {witness}")
        print(f"Hosts({k},{witness})={j.polarity}")
        for step in provenance_chain(ext, j.key):
            print(f"  {step}")
        print(lyon_existence(k, kb))
    elif args.command == "export-dot":
        text = friendship_to_dot(friendship_graph(q)) if args.friendship else quiver_to_dot(
            q, show_negative=args.show_negative
        )
        _write(text, args.output)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return _dispatch(args)
    except ContradictionError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONTRADICTION
    except (KnotParseError, KnotDataError, ConfigError, UnboundedAttributesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (KnotError, EngineError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
