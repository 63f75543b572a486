"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 cross-check mismatch, 4 subset
capacity exceeded, 5 I/O error, 6 nucleus closure did not stabilize.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import oracle
from .errors import CapacityExceeded, NotContractedWithinBound, PresentationError
from .presentation import DEFAULT_DEPTH, NucleusAutomaton, nucleus_closure, read_presentation, serialize
from .structure import DEFAULT_CAPACITY, build_delta, build_strongfix
from .verdict import ALL, decide_simplicity, verdict_to_json

EXIT_OK, EXIT_INVALID, EXIT_MISMATCH, EXIT_CAPACITY, EXIT_IO, EXIT_NOT_CONTRACTED = 0, 2, 3, 4, 5, 6
MIN_CAPACITY = 1 << 10


@dataclass(frozen=True)
class RunConfig:
    input: str
    command: str
    capacity: int = DEFAULT_CAPACITY
    depth: int = DEFAULT_DEPTH
    cross_check: bool = False
    format: str = "json"
    primes: tuple = oracle.SMOKE_PRIMES
    output: str | None = None


class _Failure(Exception):
    def __init__(self, code, message):
        self.code = code
        super().__init__(message)


def bundled_examples() -> list[str]:
    root = resources.files("ssg") / "data"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".ssg"))


def read_input(source: str) -> str:
    """Read a file path, ``-`` for stdin, or ``@name`` for a bundled example."""
    try:
        if source == "-":
            return sys.stdin.read()
        if source.startswith("@"):
            return (resources.files("ssg") / "data" / f"{source[1:]}.ssg").read_text(encoding="utf-8")
        return Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Failure(EXIT_IO, f"cannot read {source}: {exc}") from exc


def load_nucleus(cfg: RunConfig) -> NucleusAutomaton:
    pres = read_presentation(read_input(cfg.input))
    if pres.generators is not None:
        return nucleus_closure(pres, cfg.depth)
    return pres.to_automaton()


def _color(code: str, text: str) -> str:
    setting = os.environ.get("SSG_COLOR")
    if setting == "0" or (setting is None and not sys.stdout.isatty()):
        return text
    return f"\033[{code}m{text}\033[0m"


def cmd_validate(cfg: RunConfig) -> int:
    a = load_nucleus(cfg)
    noun = "state" if a.size == 1 else "states"
    print(f"{a.size} {noun}, alphabet {{{','.join(a.letters)}}}, identity {a.names[a.identity]}")
    return EXIT_OK


def _text_report(a: NucleusAutomaton, v) -> str:
    def yes(flag):
        return _color("32", "yes") if flag else _color("31", "no")

    lines = [
        f"nucleus: {a.size} states over {{{','.join(a.letters)}}}",
        f"Hausdorff groupoid: {yes(v.hausdorff)}",
        f"complex algebra simple: {yes(v.complex_simple)}",
        f"C*-algebra simple: {yes(v.cstar_simple)}",
    ]
    if v.bad_characteristics == ALL:
        lines.append("not simple in any characteristic")
    elif v.bad_characteristics:
        lines.append("not simple in characteristic " + ", ".join(map(str, v.bad_characteristics)))
    else:
        lines.append("simple in every characteristic")
    for i, sub in enumerate(v.subgroups):
        lines.append(f"H_{a.format_word(sub.word)} = {{{', '.join(sub.elements.names(a))}}} (subgroup {i})")
    for w in v.witnesses:
        terms = " + ".join(f"{c}*{a.names[g]}" for g, c in zip(w.elements, w.coefficients) if c)
        lines.append(f"witness in subgroup {w.subgroup_index}, characteristic {w.characteristic}: {terms}")
    return "\n".join(lines) + "\n"


def cmd_simplicity(cfg: RunConfig) -> int:
    a = load_nucleus(cfg)
    v = decide_simplicity(a, cfg.capacity)
    if cfg.format == "text":
        sys.stdout.write(_text_report(a, v))
    else:
        sys.stdout.write(verdict_to_json(a, v))
    if cfg.cross_check:
        problems = oracle.cross_check(a, v, cfg.primes)
        if problems:
            for p in problems:
                print(f"cross-check: {p}", file=sys.stderr)
            return EXIT_MISMATCH
    return EXIT_OK


def _dot_label(a, members) -> str:
    return "{" + ",".join(a.names[g] for g in members) + "}"


def _dot(name: str, nodes, edges, double, faint=()) -> str:
    out = [f"digraph {name} {{", "  rankdir=LR;"]
    for node in nodes:
        shape = "doublecircle" if node in double else "circle"
        out.append(f'  "{node}" [shape={shape}];')
    merged: dict = {}
    for s, label, t in edges:
        merged.setdefault((s, t), []).append(label)
    for (s, t), labels in merged.items():
        style = ", style=dashed, color=gray" if (s, t) in faint else ""
        out.append(f'  "{s}" -> "{t}" [label="{",".join(labels)}"{style}];')
    out.append("}")
    return "\n".join(out) + "\n"


def graphs_dot(a: NucleusAutomaton) -> tuple[str, str]:
    """DOT text for the fixing subgraph and Delta.

    Cyclic states and minimal vertices are double circles; fixing edges into
    non-cyclic states are dashed.
    """
    h = build_strongfix(a)
    fix = _dot(
        "H",
        list(a.names),
        [(a.names[g], a.letters[x], a.names[t]) for g, x, t in h.edges],
        {a.names[g] for g in h.cyclic},
        {(a.names[g], a.names[t]) for g, _, t in h.edges if t not in h.cyclic},
    )
    d = build_delta(a)
    labels = [_dot_label(a, v.members) for v in d.vertices]
    delta = _dot(
        "Delta",
        labels,
        [(labels[s], a.letters[x], labels[t]) for s, x, t in d.edges],
        {_dot_label(a, v.members) for v in d.minimal},
    )
    return fix, delta


def cmd_graphs(cfg: RunConfig) -> int:
    a = load_nucleus(cfg)
    fix, delta = graphs_dot(a)
    if cfg.output is None:
        sys.stdout.write(fix + delta)
        return EXIT_OK
    try:
        Path(f"{cfg.output}_H.dot").write_text(fix, encoding="utf-8")
        Path(f"{cfg.output}_Delta.dot").write_text(delta, encoding="utf-8")
    except OSError as exc:
        raise _Failure(EXIT_IO, f"cannot write graphs: {exc}") from exc
    return EXIT_OK


def cmd_nucleus(cfg: RunConfig) -> int:
    pres = read_presentation(read_input(cfg.input))
    if pres.generators is None:
        raise _Failure(EXIT_INVALID, "input has no 'generators' line")
    sys.stdout.write(serialize(nucleus_closure(pres, cfg.depth)))
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "simplicity": cmd_simplicity,
    "graphs": cmd_graphs,
    "nucleus": cmd_nucleus,
}


def _positive(minimum):
    def convert(text):
        value = int(text)
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}")
        return value
    return convert


def _primes(text):
    from sympy import isprime

    values = tuple(int(t) for t in text.replace(",", " ").split())
    if not all(isprime(p) for p in values):
        raise argparse.ArgumentTypeError("every entry must be prime")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="presentation file, '-' for stdin, or @name for a bundled example")
    common.add_argument("--capacity", type=_positive(MIN_CAPACITY), default=DEFAULT_CAPACITY,
                        help="largest subset digraph to build (default 2^24)")
    common.add_argument("--depth", type=_positive(1), default=DEFAULT_DEPTH,
                        help="rounds allowed for the nucleus closure")
    common.add_argument("--cross-check", action="store_true",
                        help="compare against the partition-based oracle")
    common.add_argument("--format", choices=["json", "text", "dot"], default="json")
    common.add_argument("--primes", type=_primes, default=oracle.SMOKE_PRIMES,
                        help="extra primes for the cross-check, e.g. 2,3,5")
    common.add_argument("-o", "--output", help="file prefix for 'graphs' (writes PREFIX_H.dot, PREFIX_Delta.dot)")
    parser = argparse.ArgumentParser(
        prog="ssg",
        description="Simplicity of algebras of contracting self-similar groups, from the nucleus.",
        epilog="bundled examples: " + ", ".join("@" + n for n in bundled_examples()),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check a nucleus presentation")
    sub.add_parser("simplicity", parents=[common], help="decide simplicity, print the verdict")
    sub.add_parser("graphs", parents=[common], help="emit the fixing subgraph and Delta as DOT")
    sub.add_parser("nucleus", parents=[common], help="compute the nucleus from a 'generators' line")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.input, args.command, args.capacity, args.depth, args.cross_check,
                    args.format, args.primes, args.output)
    try:
        return COMMANDS[cfg.command](cfg)
    except _Failure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except PresentationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CapacityExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except NotContractedWithinBound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONTRACTED


def run():
    sys.exit(main())
