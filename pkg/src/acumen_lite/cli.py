"""``acumen-lite`` command line: check, run and print model files.

Exit codes: 0 ok, 1 usage, 2 static diagnostics, 3 runtime error.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
import time
from pathlib import Path
from typing import Sequence

from .check import check_source
from .corpus import run_directive
from .engine import CsvTraceWriter, JsonlTraceWriter, SimConfig, simulate
from .engine.compiler import eval_constants
from .errors import AcumenError, SimulationError
from .scene import SceneWriter
from .syntax import pretty_print

EXIT_OK, EXIT_USAGE, EXIT_STATIC, EXIT_RUNTIME = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 by default; 2 is reserved for diagnostics
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="acumen-lite", description="Interpreter and batch simulator for hybrid models.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="parse and statically check a model file")
    p.add_argument("file", type=Path)

    p = sub.add_parser("print", help="pretty-print a model file")
    p.add_argument("file", type=Path)

    p = sub.add_parser("run", help="simulate a model and write trace/scene files")
    p.add_argument("file", type=Path)
    p.add_argument("--root", help='root class (default: the "// run:" header line, else the last class)')
    p.add_argument("--args", help='root arguments as expressions, e.g. "5,[0,0,0]" (default: the file\'s "// run:" header line)')
    p.add_argument("--start-time", type=float, default=SimConfig.start_time)
    p.add_argument("--end-time", type=float, default=SimConfig.end_time)
    p.add_argument("--time-step", type=float, default=SimConfig.time_step)
    p.add_argument("--max-discrete-iters", type=int, default=SimConfig.max_discrete_iterations)
    p.add_argument("--trace", help="trace output path, or - for standard output")
    p.add_argument("--trace-format", choices=("csv", "jsonl"),
                   help="trace format (default: jsonl for *.jsonl paths, csv otherwise)")
    p.add_argument("--scene", help="scene JSONL output path")
    p.add_argument("--vars", nargs="+", metavar="GLOB", help="only trace paths matching these globs")
    return parser


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _static(path: Path):
    source = _read(path)
    model, diags = check_source(source)
    for d in diags:
        print(d.format(str(path)), file=sys.stderr)
    return source, model, diags


def cmd_check(ns: argparse.Namespace) -> int:
    _, _, diags = _static(ns.file)
    return EXIT_STATIC if diags else EXIT_OK


def cmd_print(ns: argparse.Namespace) -> int:
    _, model, _ = _static(ns.file)
    if model is None:
        return EXIT_STATIC
    sys.stdout.write(pretty_print(model) + "\n")
    return EXIT_OK


def cmd_run(ns: argparse.Namespace) -> int:
    if ns.trace is None and ns.scene is None:
        raise UsageError("run needs at least one sink (--trace or --scene)")
    try:
        config = SimConfig(ns.start_time, ns.end_time, ns.time_step, ns.max_discrete_iters)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    source, model, diags = _static(ns.file)
    if diags:
        return EXIT_STATIC
    assert model is not None
    if not model:
        print(f"{ns.file}: no classes defined", file=sys.stderr)
        return EXIT_STATIC
    try:
        source_default = run_directive(source)
    except ValueError as exc:
        raise UsageError(f"{ns.file}: {exc}") from None
    root = ns.root or (source_default[0] if source_default else model[-1].name)
    if root not in {c.name for c in model}:
        print(f"{ns.file}: no class named {root!r}", file=sys.stderr)
        return EXIT_STATIC
    if ns.args is None:
        # A header default only applies to the root it names.
        ns.args = source_default[1] if source_default and source_default[0] == root else ""
    try:
        args = eval_constants(ns.args)
    except AcumenError as exc:
        raise UsageError(f"bad --args {ns.args!r}: {exc}") from None
    fmt = ns.trace_format or ("jsonl" if ns.trace and ns.trace.endswith(".jsonl") else "csv")

    with contextlib.ExitStack() as stack:
        def open_sink(target: str):
            if target == "-":
                return sys.stdout
            try:
                return stack.enter_context(open(target, "w", encoding="utf-8", newline=""))
            except OSError as exc:
                raise UsageError(f"cannot write {target}: {exc.strerror or exc}") from None

        trace = scene = None
        if ns.trace is not None:
            writer_cls = JsonlTraceWriter if fmt == "jsonl" else CsvTraceWriter
            trace = writer_cls(open_sink(ns.trace), ns.vars)
            stack.callback(trace.close)
        if ns.scene is not None:
            scene = SceneWriter(open_sink(ns.scene))
        started = time.perf_counter()
        try:
            store = simulate(model, root, args, config, trace=trace, scene=scene)
        except SimulationError as exc:
            print(f"{ns.file}: runtime error at {exc}", file=sys.stderr)
            return EXIT_RUNTIME
        elapsed = time.perf_counter() - started
    print(f"frames: {store.frames_emitted}  discrete events: {store.events_fired}  wall time: {elapsed:.3f}s",
          file=sys.stderr)
    return EXIT_OK


COMMANDS = {"check": cmd_check, "print": cmd_print, "run": cmd_run}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return int(exc.code or 0)
    try:
        return COMMANDS[ns.command](ns)
    except UsageError as exc:
        print(f"acumen-lite: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
