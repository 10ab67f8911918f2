"""Command-line driver: load .evo files, run a template, trace, format.

Subcommands::

    evocat run   [--state FILE] PROGRAM... --entry PATH [--arg L=V]...
                 [--fuel N] [--dump FILE|-] [--scripted-clock START[:STEP]]
    evocat trace ...same flags...       # print one line per transition
    evocat fmt   FILE                   # parse + canonical print
    evocat check [--plain] FILE...      # parse only

Program files merge as additional children of the machine root; a
duplicate top-level label is a load error.  The optional state file is
parsed in plain mode, where ``$`` forms are rejected.  Exit status: 0 ok,
1 parse or load error, 2 resolution or argument error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import textio
from .devices import DeviceTable, scripted_clock
from .errors import (
    EvoError,
    MissingArgument,
    NotASet,
    ParseError,
    PathUnresolvable,
)
from .evaluator import DEFAULT_FUEL, EvalContext, TraceSink
from .templates import merge_program, run_entry
from .tree import Node, Path, StateTree

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_RESOLVE = 2
EXIT_RUNTIME = 3


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("fuel must be at least 1")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="evocat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("programs", nargs="+", metavar="PROGRAM", help=".evo program files")
        p.add_argument("--state", metavar="FILE", help="plain state file (no $ forms)")
        p.add_argument("--entry", required=True, metavar="PATH", help="path of the template to call")
        p.add_argument(
            "--arg",
            action="append",
            default=[],
            metavar="LABEL=VALUE",
            help="fill an argument slot (repeatable)",
        )
        p.add_argument("--fuel", type=_positive, default=DEFAULT_FUEL, metavar="N")
        p.add_argument("--dump", metavar="FILE", help="write the final state ('-' = stdout)")
        p.add_argument(
            "--scripted-clock",
            metavar="START[:STEP]",
            help="deterministic clock instead of wall time",
        )

    add_run_flags(sub.add_parser("run", help="run a template and print its result"))
    add_run_flags(sub.add_parser("trace", help="like run, printing every transition"))

    fmt = sub.add_parser("fmt", help="parse a file and print its canonical form")
    fmt.add_argument("file", metavar="FILE")

    check = sub.add_parser("check", help="parse files, reporting the first error")
    check.add_argument("files", nargs="+", metavar="FILE")
    check.add_argument("--plain", action="store_true", help="reject $ forms (state files)")
    return parser


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _parse_arg_value(text: str) -> Node:
    tree = textio.parse(f"value = {text}", allow_vars=False)
    if len(tree.root.children) != 1:
        raise ParseError(f"--arg value {text!r} is not a single literal")
    return tree.root.children[0][1]


def _load_machine(args) -> StateTree:
    if args.state is not None:
        machine = textio.parse(_read(args.state), allow_vars=False)
        if machine.root.kind != "set":
            raise ParseError("a state file must be a set of entries")
    else:
        machine = StateTree()
    for path in args.programs:
        merge_program(machine, textio.parse(_read(path)))
    return machine


def _make_devices(args) -> DeviceTable:
    clock = None
    if args.scripted_clock is not None:
        start, _, step = args.scripted_clock.partition(":")
        clock = scripted_clock(int(start), int(step) if step else 1)
    return DeviceTable.standard(clock=clock, stdin=sys.stdin, stdout=sys.stdout)


def _cmd_run(args, traced: bool) -> int:
    try:
        machine = _load_machine(args)
    except (OSError, ParseError, EvoError) as err:
        print(f"evocat: load error: {err}", file=sys.stderr)
        return EXIT_PARSE

    try:
        entry = Path.parse(args.entry)
        arguments = {}
        for item in args.arg:
            label, eq, value = item.partition("=")
            if not eq:
                raise MissingArgument(f"--arg needs LABEL=VALUE, got {item!r}")
            arguments[label] = _parse_arg_value(value)
    except (ParseError, EvoError) as err:
        print(f"evocat: argument error: {err}", file=sys.stderr)
        return EXIT_RESOLVE

    ctx = EvalContext(
        machine,
        fuel=args.fuel,
        devices=_make_devices(args),
        trace=TraceSink(sys.stdout) if traced else None,
    )
    try:
        result = run_entry(machine, entry, arguments, ctx)
    except (PathUnresolvable, NotASet, MissingArgument) as err:
        print(f"evocat: resolution error: {err}", file=sys.stderr)
        return EXIT_RESOLVE
    except EvoError as err:
        where = getattr(err, "instruction", None)
        at = f" (instruction {where})" if where is not None else ""
        print(f"evocat: runtime error{at}: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_RUNTIME

    sys.stdout.write(textio.render(result))
    if args.dump is not None:
        text = textio.render(machine)
        if args.dump == "-":
            sys.stdout.write(text)
        else:
            try:
                with open(args.dump, "w", encoding="utf-8") as handle:
                    handle.write(text)
            except OSError as err:
                print(f"evocat: dump error: {err}", file=sys.stderr)
                return EXIT_RUNTIME
    return EXIT_OK


def _cmd_fmt(args) -> int:
    try:
        tree = textio.parse(_read(args.file))
    except (OSError, ParseError) as err:
        print(f"evocat: {args.file}: {err}", file=sys.stderr)
        return EXIT_PARSE
    sys.stdout.write(textio.render(tree))
    return EXIT_OK


def _cmd_check(args) -> int:
    for path in args.files:
        try:
            textio.parse(_read(path), allow_vars=not args.plain)
        except (OSError, ParseError) as err:
            print(f"evocat: {path}: {err}", file=sys.stderr)
            return EXIT_PARSE
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args, traced=False)
    if args.command == "trace":
        return _cmd_run(args, traced=True)
    if args.command == "fmt":
        return _cmd_fmt(args)
    return _cmd_check(args)


if __name__ == "__main__":
    sys.exit(main())
