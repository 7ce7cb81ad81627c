"""Command-line entry point: ``python -m app <subcommand> ...``.

Exit codes: 0 positive decision or success, 1 negative decision, 2 usage or
format error, 3 precondition error (degree bounds, oracle caps).
"""

import argparse
import json
import logging
import os
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from app.config import APP_VERSION, CliSettings, Settings, settings
from app.errors import ColoringError, FormatError, HColorError, UsageError
from app.models.schemas import ArcConsistencyResponse, CountResponse, SolveResponse
from app.services.bounded_service import solve_bounded
from app.services.cnf_service import Formula, parse_dimacs, random_formula
from app.services.consistency_service import (
    check_lists,
    format_lists,
    has_empty,
    make_arc_consistent,
    parse_lists,
)
from app.services.digraph_service import (
    IN_BRANCHING,
    OUT_BRANCHING,
    Digraph,
    classify_component,
    degree_stats,
    format_edge_list,
    parse_dot,
    read_edge_list,
    to_dot,
    underlying_undirected_max_degree,
    weak_components,
)
from app.services.gadget_service import (
    builtin_gadgets,
    format_reports,
    search_gadget,
    variable_behavior,
    verify_gadget,
    write_fixtures,
)
from app.services.oracle_service import (
    count_homomorphisms,
    enumerate_homomorphisms,
    find_homomorphism,
)
from app.services.reduction_service import (
    dump_meta,
    reduce,
    roundtrip_batch,
    validate_instance,
)
from app.services.target_service import (
    TargetGraph,
    is_homomorphism,
    load_target,
    respects_lists,
)

logger = logging.getLogger("app.cli")

_ANSI = {"green": "\033[32m", "red": "\033[31m", "reset": "\033[0m"}


def _use_color() -> bool:
    return sys.stdout.isatty() and "NO_COLOR" not in os.environ


def _status(word: str, ok: bool) -> str:
    if not _use_color():
        return word
    return f"{_ANSI['green' if ok else 'red']}{word}{_ANSI['reset']}"


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from None


def _read_graph(path: str) -> Digraph:
    if Path(path).suffix == ".dot":
        return parse_dot(_read_text(path))
    return read_edge_list(Path(path))


def _load_problem(args) -> tuple[Digraph, TargetGraph, tuple]:
    g = _read_graph(args.graph)
    h = load_target(args.target)
    lists = parse_lists(_read_text(args.lists), g, h) if args.lists else check_lists(g, h, None)
    return g, h, lists


def _emit(args, model, text: str) -> None:
    if args.json:
        print(model.model_dump_json())
    elif text:
        print(text, end="" if text.endswith("\n") else "\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_solve(args) -> int:
    g, h, lists = _load_problem(args)
    if args.algo == "bounded":
        coloring = solve_bounded(g, lists, h)
    else:
        coloring = find_homomorphism(g, h, lists)
    if coloring is not None and not (is_homomorphism(g, h, coloring) and respects_lists(coloring, lists)):
        raise ColoringError("solver returned a coloring that fails verification")

    response = SolveResponse(
        target=h.name, algo=args.algo, colorable=coloring is not None,
        coloring=list(coloring) if coloring is not None else None,
    )
    if coloring is None:
        _emit(args, response, _status("NOT COLORABLE", False))
        return 1
    _emit(args, response, "".join(f"{v} {x}\n" for v, x in enumerate(coloring)))
    return 0


def cmd_count(args) -> int:
    g, h, lists = _load_problem(args)
    prune = not args.no_prune
    if args.enumerate:
        colorings = enumerate_homomorphisms(g, h, lists, limit=args.limit, prune=prune)
        for f in colorings:
            if not is_homomorphism(g, h, f):
                raise ColoringError("enumeration produced an invalid coloring")
        count = len(colorings)
        text = "".join(" ".join(map(str, f)) + "\n" for f in colorings) + f"{count}\n"
        response = CountResponse(target=h.name, count=count, colorings=[list(f) for f in colorings])
    else:
        count = count_homomorphisms(g, h, lists, prune=prune)
        text = f"{count}\n"
        response = CountResponse(target=h.name, count=count)
    _emit(args, response, text)
    return 0 if count else 1


def cmd_ac(args) -> int:
    g, h, lists = _load_problem(args)
    narrowed = make_arc_consistent(g, lists, h)
    empty = has_empty(narrowed)
    response = ArcConsistencyResponse(
        target=h.name, lists=[sorted(allowed) for allowed in narrowed], has_empty=empty
    )
    _emit(args, response, format_lists(narrowed))
    return 1 if empty else 0


def cmd_classify(args) -> int:
    g = _read_graph(args.graph)
    stats = degree_stats(g)
    if stats.within(OUT_BRANCHING):
        bounds, solvable = OUT_BRANCHING, "out-branching (2, 1)"
    elif stats.within(IN_BRANCHING):
        bounds, solvable = IN_BRANCHING, "in-branching (1, 2)"
    else:
        bounds, solvable = OUT_BRANCHING, "none"
    components = []
    for component in weak_components(g):
        shape = classify_component(g, component, bounds)
        components.append({
            "vertices": list(component),
            "shape": shape.kind.value,
            "cycle": list(shape.cycle),
        })
    result = {
        "vertices": g.n,
        "arcs": len(g.arc_list),
        "max_out": stats.max_out,
        "max_in": stats.max_in,
        "undirected_max_degree": underlying_undirected_max_degree(g),
        "bounded_class": solvable,
        "components": components,
    }
    if args.json:
        print(json.dumps(result))
    else:
        print(f"{g.n} vertices, {len(g.arc_list)} arcs, max out/in {stats.max_out}/{stats.max_in}, "
              f"undirected max degree {result['undirected_max_degree']}")
        print(f"bounded solver class: {solvable}")
        for c in components:
            cycle = " -> ".join(map(str, c["cycle"]))
            print(f"  {c['shape']}: {len(c['vertices'])} vertices" + (f", cycle {cycle}" if cycle else ""))
    return 0


def cmd_convert(args) -> int:
    g = _read_graph(args.input)
    to = args.to or ("dot" if args.output and Path(args.output).suffix == ".dot" else "el")
    text = to_dot(g) if to == "dot" else format_edge_list(g)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_reduce(args) -> int:
    formula = parse_dimacs(_read_text(args.formula))
    instance = reduce(formula, args.target, args.bounded)
    report = validate_instance(instance)
    edge_list = format_edge_list(instance.graph)

    if args.output:
        Path(args.output).write_text(edge_list)
    elif not args.json:
        sys.stdout.write(edge_list)
    if args.meta:
        Path(args.meta).write_text(dump_meta(instance))
    if args.dot:
        Path(args.dot).write_text(to_dot(instance.graph, name=f"{instance.target}_{instance.variant}"))
    if args.json:
        print(json.dumps({
            "meta": instance.meta().model_dump(),
            "validation": report.model_dump(),
        }))
    for problem in report.problems:
        logger.warning(problem)
    return 0 if report.passed else 1


def _roundtrip_inputs(args) -> list[tuple[str, Formula]]:
    items = [(path, parse_dimacs(_read_text(path))) for path in args.formula or []]
    rng = random.Random(args.seed)
    for i in range(args.random):
        items.append((f"random-{i + 1}", random_formula(rng, args.vars, args.clauses)))
    return items


def cmd_roundtrip(args) -> int:
    items = _roundtrip_inputs(args)
    if not items:
        raise UsageError("roundtrip needs -f FILE or --random N")
    workers = settings.BATCH_WORKERS if args.batch else 1
    results = roundtrip_batch(items, args.target, args.bounded, workers=workers)
    if args.json:
        print(json.dumps([r.model_dump() for r in results]))
    else:
        for r in results:
            line = f"{_status('PASS' if r.passed else 'FAIL', r.passed)} {r.name}"
            line += f" (satisfiable={r.satisfiable}, colorable={r.colorable})"
            if r.detail:
                line += f": {r.detail}"
            print(line)
    return 0 if all(r.passed for r in results) else 1


def cmd_verify_gadgets(args) -> int:
    if args.write_fixtures:
        for path in write_fixtures(Path(args.write_fixtures)):
            logger.info("wrote %s", path)
    reports = [verify_gadget(g) for g in builtin_gadgets(args.target, args.sizes)]

    found = None
    if args.search:
        spec = variable_behavior(args.target or "A")
        found = search_gadget(spec, seed=args.seed)

    if args.json or args.report == "json":
        payload = {"reports": [r.model_dump() for r in reports]}
        if args.search:
            payload["search"] = None if found is None else {
                "vertices": found.digraph.n, "edge_list": format_edge_list(found.digraph),
            }
        print(json.dumps(payload))
    else:
        text = format_reports(reports)
        if _use_color():
            text = text.replace("PASS ", _status("PASS", True) + " ").replace("FAIL ", _status("FAIL", False) + " ")
        sys.stdout.write(text)
        if args.search and found is None:
            print("search: no gadget found")
        elif args.search:
            print(f"search: found {found.digraph.n} vertices")
            sys.stdout.write(format_edge_list(found.digraph))
    ok = all(r.ok for r in reports) and (not args.search or found is not None)
    return 0 if ok else 1


def cmd_serve(args) -> int:
    import uvicorn

    from app.main import create_app

    uvicorn.run(create_app(), host=settings.HOST, port=settings.PORT, log_level=settings.LOG_LEVEL.lower())
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(k) for k in text.split(",") if k.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not sizes or min(sizes) < 1:
        raise argparse.ArgumentTypeError("sizes must be positive")
    return sizes


def _add_problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("-g", "--graph", required=True, help="input digraph (edge-list or .dot)")
    p.add_argument("--target", default="A", help="A, B, C or an edge-list path")
    p.add_argument("--lists", help="lists file, lines 'v: c1 c2 ...'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hcolor", description="Digraph H-coloring toolkit")
    parser.add_argument("--version", action="version", version=APP_VERSION)
    parser.add_argument("--seed", type=int, help=f"default {Settings.model_fields['DEFAULT_SEED'].default}")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--max-vertices", type=int, help="exact oracle vertex cap")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide list H-coloring, print a coloring")
    _add_problem_args(p)
    p.add_argument("--algo", choices=("exact", "bounded"), default="exact")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("count", help="count or enumerate list homomorphisms")
    _add_problem_args(p)
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--limit", type=int)
    p.add_argument("--no-prune", action="store_true", help="plain backtracking without arc consistency")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("ac", help="arc-consistent lists")
    _add_problem_args(p)
    p.set_defaults(func=cmd_ac)

    p = sub.add_parser("classify", help="degree statistics and component shapes")
    p.add_argument("-g", "--graph", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("convert", help="edge-list <-> DOT")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--to", choices=("el", "dot"))
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("reduce", help="build G_phi from a DIMACS formula")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("--target", choices=("A", "B", "C"), type=str.upper, default="A")
    p.add_argument("--bounded", action="store_true")
    p.add_argument("-o", "--output")
    p.add_argument("--meta")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("roundtrip", help="check sat(phi) <=> colorable(G_phi)")
    p.add_argument("-f", "--formula", action="append")
    p.add_argument("--target", choices=("A", "B", "C"), type=str.upper, default="A")
    p.add_argument("--bounded", action="store_true")
    p.add_argument("--batch", action="store_true", help="verify formulas in parallel")
    p.add_argument("--random", type=int, default=0, metavar="N")
    p.add_argument("--vars", type=int, default=4)
    p.add_argument("--clauses", type=int, default=5)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("verify-gadgets", help="check every gadget against its target")
    p.add_argument("--target", choices=("A", "B", "C"), type=str.upper)
    p.add_argument("--report", choices=("text", "json"), default="text")
    p.add_argument("--sizes", type=_sizes, default=(1, 2, 3), help="copy counts for the sized gadgets")
    p.add_argument("--write-fixtures", metavar="DIR")
    p.add_argument("--search", action="store_true", help="also search for a variable gadget")
    p.set_defaults(func=cmd_verify_gadgets)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", help="default HCOLOR_HOST or 0.0.0.0")
    p.add_argument("--port", type=int, help="default HCOLOR_PORT or 8585")
    p.set_defaults(func=cmd_serve)
    return parser


def _configure(args) -> None:
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")

    flags = {"DEFAULT_SEED": args.seed, "ORACLE_MAX_VERTICES": args.max_vertices}
    if args.command == "serve":
        flags.update(HOST=args.host, PORT=args.port)
    passed = {k: v for k, v in flags.items() if v is not None}
    # The server reads HCOLOR_* like the app does; passed flags win.
    cfg = Settings(**passed) if args.command == "serve" else CliSettings(**passed)
    # Services read the shared settings object; the CLI replaces its values.
    for name in Settings.model_fields:
        setattr(settings, name, getattr(cfg, name))
    args.seed = settings.DEFAULT_SEED


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    _configure(args)
    try:
        return args.func(args)
    except HColorError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


def main() -> None:
    sys.exit(run())
