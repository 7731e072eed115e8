"""Command-line front end.

Exit status: 0 for a positive answer, 1 for a negative one, 2 for usage or
input errors, 3 when an enumeration guard trips, 4 for constructions that do
not exist for the requested mode and direction.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .constructions import concat_pattern, intersect_h, transfer
from .errors import ArrayPatError, CapacityError, UnsupportedOperationError
from .grid import UNDEFINED, GeomOp, format_grid, parse_grid, project, transform
from .membership import Mode, decide
from .oracle import (
    REFUTATION_CASES,
    METHODS,
    Bounds,
    distinguish,
    enumerate_language,
    format_fragment,
    refute_closure,
)
from .pattern import equivalent, format_pattern, parse_pattern, parse_raw_pattern, transform_pattern
from .substitution import apply_morphism, assemble_cr, assemble_rc, format_substitution, parse_substitution

log = logging.getLogger("arraypat")

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_CAPACITY, EXIT_UNSUPPORTED = 0, 1, 2, 3, 4

MODES = [m.value for m in Mode]


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _alphabet(text: str) -> tuple[str, ...]:
    symbols = tuple(s.strip() for s in text.split(",") if s.strip())
    if not symbols:
        raise argparse.ArgumentTypeError("alphabet must list at least one symbol, e.g. a,b")
    return symbols


def _symbol_map(text: str) -> dict:
    mapping = {}
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise argparse.ArgumentTypeError(f"bad map entry {item!r}; expected src=dst")
        src, dst = (part.strip() for part in item.split("=", 1))
        if not src or not dst:
            raise argparse.ArgumentTypeError(f"bad map entry {item!r}; expected src=dst")
        mapping[src] = dst
    return mapping


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


class _StderrHandler(logging.StreamHandler):
    """Writes to whatever ``sys.stderr`` is at emit time."""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def _setup_logging(verbose: bool) -> None:
    if not any(isinstance(h, _StderrHandler) for h in log.handlers):
        handler = _StderrHandler()
        handler.setFormatter(logging.Formatter("arraypat: %(message)s"))
        log.addHandler(handler)
    log.setLevel(logging.INFO if verbose else logging.WARNING)


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- subcommands --------------------------------------------------------------

def cmd_member(args) -> int:
    p = parse_pattern(_read(args.pattern))
    w = parse_grid(_read(args.array))
    if args.alphabet is not None:
        stray = w.symbols() - set(args.alphabet)
        if stray:
            log.error("array uses symbols outside the alphabet: %s", ", ".join(sorted(map(str, stray))))
            return EXIT_USAGE
    answer = decide(w, p, args.mode)
    _out("yes" if answer.member else "no")
    if answer.member and args.witness:
        lines = [f"mode: {args.mode}"]
        if answer.via is not None and answer.via.value != args.mode:
            lines.append(f"# via {answer.via}")
        lines.append(format_substitution(answer.witness))
        _out("\n".join(lines))
    return EXIT_YES if answer.member else EXIT_NO


def cmd_apply(args) -> int:
    rows = parse_raw_pattern(_read(args.pattern))
    h = parse_substitution(_read(args.subst))
    if args.assembly == "cr":
        result = assemble_cr(h, rows)
    elif args.assembly == "rc":
        result = assemble_rc(h, rows)
    else:
        result = apply_morphism(h, rows)
    if result is UNDEFINED:
        _out("undefined")
        return EXIT_NO
    _out(format_grid(result))
    return EXIT_YES


def cmd_enumerate(args) -> int:
    p = parse_pattern(_read(args.pattern))
    bounds = Bounds(args.max_rows, args.max_cols, args.alphabet)
    frag = enumerate_language(p, args.mode, bounds, method=args.method)
    _out(format_fragment(frag, args.pattern))
    return EXIT_YES


def cmd_equiv(args) -> int:
    same = equivalent(parse_pattern(_read(args.pattern)), parse_pattern(_read(args.pattern2)))
    _out("yes" if same else "no")
    return EXIT_YES if same else EXIT_NO


def cmd_transform(args) -> int:
    text = _read(args.input)
    if args.kind == "pattern":
        _out(format_pattern(transform_pattern(parse_pattern(text), args.op)))
    else:
        _out(format_grid(transform(parse_grid(text, allow_empty=args.allow_empty), args.op)))
    return EXIT_YES


def cmd_intersect_h(args) -> int:
    p = parse_pattern(_read(args.pattern))
    q = parse_pattern(_read(args.pattern2))
    _out(format_pattern(intersect_h(p, q)))
    return EXIT_YES


def cmd_concat(args) -> int:
    p = parse_pattern(_read(args.pattern))
    q = parse_pattern(_read(args.pattern2))
    _out(format_pattern(concat_pattern(p, q, args.dir, args.mode)))
    return EXIT_YES


def cmd_project(args) -> int:
    text = _read(args.input)
    if args.kind == "pattern":
        _out(format_pattern(transfer(parse_pattern(text), args.map)))
    else:
        _out(format_grid(project(parse_grid(text, allow_empty=args.allow_empty), args.map)))
    return EXIT_YES


def cmd_refute(args) -> int:
    bounds = None
    if args.max_rows or args.max_cols or args.alphabet:
        default = REFUTATION_CASES[args.case][2]
        bounds = Bounds(
            args.max_rows or default.max_rows,
            args.max_cols or default.max_cols,
            args.alphabet or default.alphabet,
        )
    report = refute_closure(args.case, bounds, args.mode)
    _out(str(report))
    return EXIT_YES if report.success else EXIT_NO


def cmd_distinguish(args) -> int:
    p = parse_pattern(_read(args.pattern))
    q = parse_pattern(_read(args.pattern2))
    bounds = Bounds(args.max_rows, args.max_cols, args.alphabet)
    grid = distinguish(p, args.mode, q, args.mode2, bounds)
    if grid is None:
        _out("none")
        return EXIT_NO
    _out(format_grid(grid))
    return EXIT_YES


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arraypat",
        description="Two-dimensional pattern languages: membership, constructions, bounded enumeration.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = add("member", cmd_member, "decide membership of an array in a pattern language")
    sp.add_argument("--mode", required=True, choices=MODES)
    sp.add_argument("--pattern", required=True, metavar="FILE")
    sp.add_argument("--array", required=True, metavar="FILE")
    sp.add_argument("--witness", action="store_true", help="print a witnessing substitution")
    sp.add_argument("--alphabet", type=_alphabet, help="comma-separated symbols (default: the array's)")

    sp = add("apply", cmd_apply, "apply a substitution to a pattern")
    sp.add_argument("--pattern", required=True, metavar="FILE")
    sp.add_argument("--subst", required=True, metavar="FILE")
    sp.add_argument("--assembly", required=True, choices=["cr", "rc", "uniform"])

    sp = add("enumerate", cmd_enumerate, "list a pattern language within bounds")
    sp.add_argument("--mode", required=True, choices=MODES)
    sp.add_argument("--pattern", required=True, metavar="FILE")
    sp.add_argument("--alphabet", required=True, type=_alphabet)
    sp.add_argument("--max-rows", required=True, type=_positive)
    sp.add_argument("--max-cols", required=True, type=_positive)
    sp.add_argument("--method", choices=METHODS, default="substitution")

    sp = add("equiv", cmd_equiv, "test two patterns for equivalence up to renaming")
    sp.add_argument("--pattern", required=True, metavar="FILE")
    sp.add_argument("--pattern2", required=True, metavar="FILE")

    sp = add("transform", cmd_transform, "apply a geometric operation")
    sp.add_argument("--op", required=True, type=GeomOp.parse,
                    help="transpose, hflip, vflip, right, left or half")
    sp.add_argument("--kind", choices=["grid", "pattern"], default="grid")
    sp.add_argument("--input", required=True, metavar="FILE")
    sp.add_argument("--allow-empty", action="store_true", help=argparse.SUPPRESS)

    sp = add("intersect-h", cmd_intersect_h, "pattern for the intersection of two h-languages")
    sp.add_argument("--pattern", required=True, metavar="FILE")
    sp.add_argument("--pattern2", required=True, metavar="FILE")

    sp = add("concat", cmd_concat, "pattern for a row or column concatenation of two languages")
    sp.add_argument("--mode", required=True, choices=MODES)
    sp.add_argument("--dir", required=True, choices=["row", "col"])
    sp.add_argument("--pattern", required=True, metavar="FILE")
    sp.add_argument("--pattern2", required=True, metavar="FILE")

    sp = add("project", cmd_project, "apply a letter-to-letter map")
    sp.add_argument("--map", required=True, type=_symbol_map, help='e.g. "a=1,b=1,c=2"')
    sp.add_argument("--kind", choices=["grid", "pattern"], default="grid")
    sp.add_argument("--input", required=True, metavar="FILE")
    sp.add_argument("--allow-empty", action="store_true", help=argparse.SUPPRESS)

    sp = add("refute", cmd_refute, "run a bounded non-closure refutation")
    sp.add_argument("--case", required=True, choices=list(REFUTATION_CASES))
    sp.add_argument("--mode", choices=MODES)
    sp.add_argument("--alphabet", type=_alphabet)
    sp.add_argument("--max-rows", type=_positive)
    sp.add_argument("--max-cols", type=_positive)

    sp = add("distinguish", cmd_distinguish, "smallest array separating two bounded languages")
    sp.add_argument("--pattern", required=True, metavar="FILE")
    sp.add_argument("--mode", required=True, choices=MODES)
    sp.add_argument("--pattern2", required=True, metavar="FILE")
    sp.add_argument("--mode2", required=True, choices=MODES)
    sp.add_argument("--max-rows", required=True, type=_positive)
    sp.add_argument("--max-cols", required=True, type=_positive)
    sp.add_argument("--alphabet", type=_alphabet, default=("a", "b"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.verbose)
    try:
        return args.func(args)
    except CapacityError as exc:
        log.error("%s", exc)
        return EXIT_CAPACITY
    except UnsupportedOperationError as exc:
        log.error("%s", exc)
        return EXIT_UNSUPPORTED
    except (ArrayPatError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
