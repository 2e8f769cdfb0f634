"""Command line front end.

Subcommands: solve (layout one instance), verify (semantics property
report), bench (directory benchmark), serve (HTTP service).  Exit codes:
0 success, 2 parse or usage error, 3 extension not conflict-free,
4 exact mode infeasible.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .af import ParseError, grounded_extension, parse_af, parse_extension
from .api import ExactInfeasibleError, SolveRequest, execute, verify_report
from .bench import BenchConfig, discover_instances, run_benchmark, summarize, to_csv
from .heuristic import NonConflictFreeError
from .render import RenderConfig, load_render_config, to_svg

INSTANCE_DIR_ENV = "AFLAYOUT_INSTANCES"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NOT_CONFLICT_FREE = 3
EXIT_EXACT_INFEASIBLE = 4

_SUFFIX_FORMAT = {".apx": "apx", ".tgf": "tgf", ".af": "iccma23"}


def _format_for(path: str, explicit: str | None) -> str:
    if explicit:
        return explicit
    return _SUFFIX_FORMAT.get(Path(path).suffix, "apx")


def _add_instance_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("af_file", help="instance file")
    parser.add_argument("--format", choices=("apx", "iccma23", "tgf"),
                        help="instance format (default: inferred from suffix)")
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--extension", metavar="FILE",
                       help="extension file (whitespace-separated ids)")
    group.add_argument("--semantics", choices=("grounded",),
                       help="compute the extension instead of reading one")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aflayout",
        description="Layered drawings of argumentation frameworks.")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="compute an optimized drawing")
    _add_instance_args(solve)
    solve.add_argument("--mode", choices=("heuristic", "exact", "both"),
                       default="heuristic")
    solve.add_argument("--rec", action=argparse.BooleanOptionalAction, default=True,
                       help="enforce the red-edge constraint in exact mode")
    solve.add_argument("--timeout-ms", type=int, default=None)
    solve.add_argument("--strategy", choices=("A", "B"), default="A",
                       help="red edge selection strategy")
    solve.add_argument("--seed", type=int, default=None)
    solve.add_argument("--name", default=None, help="instance name in the document")
    solve.add_argument("--out-json", metavar="PATH", help="also write the payload here")
    solve.add_argument("--out-svg", metavar="PATH", help="render the drawing to SVG")
    solve.add_argument("--render-config", metavar="PATH",
                       help="JSON file overriding geometry/palette defaults")

    verify = sub.add_parser("verify", help="report semantics properties")
    _add_instance_args(verify)

    bench = sub.add_parser("bench", help="benchmark a directory of instances")
    bench.add_argument("--instances", metavar="DIR",
                       default=os.environ.get(INSTANCE_DIR_ENV),
                       help=f"instance directory (default: ${INSTANCE_DIR_ENV})")
    bench.add_argument("--timeout-ms", type=int, default=60_000,
                       help="per-instance exact solver timeout")
    bench.add_argument("--exact-cap", type=int, default=150,
                       help="skip the exact solver above this |A|+|R|")
    bench.add_argument("--rec", action=argparse.BooleanOptionalAction, default=True)
    bench.add_argument("--strategy", choices=("A", "B"), default="A")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--out-csv", metavar="PATH")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--instances", metavar="DIR",
                       default=os.environ.get(INSTANCE_DIR_ENV),
                       help=f"instance directory (default: ${INSTANCE_DIR_ENV})")
    serve.add_argument("--exact-cap", type=int, default=150,
                       help="refuse exact mode above this |A|+|R|")
    return parser


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def cmd_solve(args: argparse.Namespace) -> int:
    af_text = _read(args.af_file)
    fmt = _format_for(args.af_file, args.format)
    extension: tuple[str, ...] | None = None
    if args.extension is not None:
        af = parse_af(af_text, fmt)
        extension = tuple(sorted(parse_extension(_read(args.extension), af)))
    request = SolveRequest(
        af_text=af_text,
        format=fmt,
        extension=extension,
        semantics=args.semantics,
        mode=args.mode,
        rec=args.rec,
        timeout_ms=args.timeout_ms,
        strategy=args.strategy,
        seed=args.seed,
        name=args.name or Path(args.af_file).stem,
    )
    outcome = execute(request)
    text = json.dumps(outcome.payload, indent=2) + "\n"
    sys.stdout.write(text)
    if args.out_json:
        Path(args.out_json).write_text(text)
    if args.out_svg:
        config = (load_render_config(args.render_config)
                  if args.render_config else RenderConfig())
        Path(args.out_svg).write_text(to_svg(outcome.document, config))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    af_text = _read(args.af_file)
    fmt = _format_for(args.af_file, args.format)
    af = parse_af(af_text, fmt)
    if args.extension is not None:
        extension = parse_extension(_read(args.extension), af)
    else:
        extension = grounded_extension(af)
    report = verify_report(af, extension)
    for key, value in report.items():
        text = str(value).lower() if isinstance(value, bool) else str(value)
        sys.stdout.write(f"{key}: {text}\n")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    if not args.instances:
        raise ParseError(
            f"no instance directory: pass --instances or set ${INSTANCE_DIR_ENV}")
    instances = discover_instances(args.instances)
    config = BenchConfig(
        exact_timeout_ms=args.timeout_ms,
        exact_size_cap=args.exact_cap,
        rec=args.rec,
        strategy=args.strategy,
        seed=args.seed,
    )
    records = run_benchmark(instances, config)
    if args.out_csv:
        Path(args.out_csv).write_text(to_csv(records))
    sys.stdout.write(summarize(records, config))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve_forever

    serve_forever(port=args.port, instance_dir=args.instances,
                  exact_size_cap=args.exact_cap)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "solve": cmd_solve,
        "verify": cmd_verify,
        "bench": cmd_bench,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except NonConflictFreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONFLICT_FREE
    except ExactInfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXACT_INFEASIBLE
    except (ValueError, FileNotFoundError) as exc:
        # ParseError and option validation both land here
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
