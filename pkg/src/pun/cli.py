"""``pun [flags] <file.pun>``: typecheck a program and check its properties."""

from __future__ import annotations

import argparse
import secrets
import sys
from typing import Optional, Sequence

from pun.evaluator import DEFAULT_FUEL, EvalError, evaluate, run_deep
from pun.gengen import GenConfig
from pun.parser import ParseError, parse_program
from pun.propcheck import (
    DEFAULT_MAX_SIZE, DEFAULT_TESTS, Passed, RunConfig, check_all, render_outcome,
)
from pun.syntax import pretty
from pun.typecheck import TypeCheckError, check_program

EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a probability in [0, 1], got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pun", description="Check the properties of a pun program.")
    parser.add_argument("file", help="a .pun source file")
    parser.add_argument("--tests", type=_positive, default=DEFAULT_TESTS,
                        help="tests per property (default: %(default)s)")
    parser.add_argument("--seed", type=int, default=None,
                        help="random seed (default: fresh, echoed in the report)")
    parser.add_argument("--max-size", type=_positive, default=DEFAULT_MAX_SIZE,
                        help="largest generator size (default: %(default)s)")
    parser.add_argument("--fuel", type=_positive, default=DEFAULT_FUEL,
                        help="evaluation steps per test (default: %(default)s)")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--check", action="store_true", help="only parse and typecheck")
    mode.add_argument("--eval", metavar="NAME", help="evaluate an argument-free definition")

    gen = parser.add_argument_group("generator")
    defaults = GenConfig()
    gen.add_argument("--var-bias", type=_probability, default=defaults.var_bias)
    gen.add_argument("--bound-type-bias", type=_probability, default=defaults.bound_type_bias)
    gen.add_argument("--leaf-bias", type=_probability, default=defaults.node_leaf_bias,
                     help="chance of a leaf when generating a non-empty-size tree")
    gen.add_argument("--int-min", type=int, default=defaults.int_range[0])
    gen.add_argument("--int-max", type=int, default=defaults.int_range[1])
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.file, encoding="utf-8") as f:
            source = f.read()
    except OSError as err:
        print(f"pun: cannot read {args.file}: {err.strerror}", file=sys.stderr)
        return EXIT_ERROR
    try:
        typed = check_program(parse_program(source))
    except (ParseError, TypeCheckError) as err:
        print(f"{args.file}: {err}", file=sys.stderr)
        return EXIT_ERROR

    if args.check:
        return EXIT_OK
    if args.eval is not None:
        return _eval_mode(typed, args.eval, args.fuel)

    try:
        gen = GenConfig(var_bias=args.var_bias, bound_type_bias=args.bound_type_bias,
                        node_leaf_bias=args.leaf_bias, int_range=(args.int_min, args.int_max))
    except ValueError as err:
        print(f"pun: {err}", file=sys.stderr)
        return EXIT_ERROR
    seed = args.seed if args.seed is not None else secrets.randbits(63)
    cfg = RunConfig(tests_per_property=args.tests, seed=seed, max_size=args.max_size,
                    fuel=args.fuel, gen=gen)
    outcomes = run_deep(check_all, typed, cfg)
    lines = [f"-- seed: {seed}"] + [render_outcome(name, o) for name, o in outcomes]
    sys.stdout.write("\n".join(lines) + "\n")
    sys.stdout.flush()
    return EXIT_OK if all(isinstance(o, Passed) for _, o in outcomes) else EXIT_FAILED


def _eval_mode(typed, name: str, fuel: int) -> int:
    definition = typed.program.definitions.get(name)
    if definition is None:
        print(f"pun: no definition named {name}", file=sys.stderr)
        return EXIT_ERROR
    if definition.params:
        print(f"pun: {name} takes arguments; --eval needs an argument-free definition",
              file=sys.stderr)
        return EXIT_ERROR
    try:
        value = run_deep(evaluate, typed.globals[name], fuel, typed.globals)
    except EvalError as err:
        print(f"pun: evaluating {name}: {err}", file=sys.stderr)
        return EXIT_FAILED
    print(pretty(value))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
