"""Checking properties by substituting generated closed terms."""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from typing import Optional, Union

from pun.evaluator import DEFAULT_FUEL, EvalError, Evaluator
from pun.gengen import GenConfig, new_context, generate_term
from pun.syntax import BoolLit, Term, pretty, substitute
from pun.typecheck import TypeCheckError, TypedProgram, TypedProperty

DEFAULT_TESTS = 50
DEFAULT_MAX_SIZE = 10


@dataclass(frozen=True)
class RunConfig:
    tests_per_property: int = DEFAULT_TESTS
    seed: int = 0
    max_size: int = DEFAULT_MAX_SIZE
    fuel: int = DEFAULT_FUEL
    gen: GenConfig = field(default_factory=GenConfig)

    def __post_init__(self) -> None:
        for name in ("tests_per_property", "max_size", "fuel"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def size_for(self, test: int) -> int:
        """Sizes grow from small to ``max_size`` over the run (1-based ``test``)."""
        return math.ceil(test * self.max_size / self.tests_per_property)


@dataclass(frozen=True)
class Passed:
    tests: int


@dataclass(frozen=True)
class Failed:
    counterexample: Term
    after_tests: int


@dataclass(frozen=True)
class Aborted:
    reason: Union[EvalError, TypeCheckError]
    after_tests: int


TestOutcome = Union[Passed, Failed, Aborted]


def test_rng(seed: int, prop_name: str, test: int) -> random.Random:
    """Independent stream per (seed, property, test index)."""
    digest = hashlib.blake2b(f"{seed}\x00{prop_name}\x00{test}".encode(), digest_size=8)
    return random.Random(int.from_bytes(digest.digest(), "big"))


def instantiate(prog: TypedProgram, prop: TypedProperty, cfg: RunConfig, test: int) -> Term:
    """The closed property body for the ``test``-th run."""
    rng = test_rng(cfg.seed, prop.name, test)
    size = cfg.size_for(test)
    body = prop.body
    args = {}
    for name, ty in prop.args:
        ctx = new_context(rng, size, prog.env)
        args[name] = generate_term(ctx, cfg.gen, ty)
    for name, term in args.items():
        body = substitute(body, name, term)
    return body


def check_property(prog: TypedProgram, prop: TypedProperty | str,
                   cfg: Optional[RunConfig] = None) -> TestOutcome:
    cfg = cfg or RunConfig()
    if isinstance(prop, str):
        prop = prog.property(prop)
    for test in range(1, cfg.tests_per_property + 1):
        body = instantiate(prog, prop, cfg, test)
        try:
            result = Evaluator(prog.globals, cfg.fuel).eval(body)
        except EvalError as err:
            return Aborted(err, test)
        if not isinstance(result, BoolLit):
            raise AssertionError(f"property {prop.name} evaluated to a non-boolean")
        if not result.value:
            return Failed(body, test)
    return Passed(cfg.tests_per_property)


def check_all(prog: TypedProgram, cfg: Optional[RunConfig] = None) -> list[tuple[str, TestOutcome]]:
    cfg = cfg or RunConfig()
    return [(prop.name, check_property(prog, prop, cfg)) for prop in prog.properties]


def render_outcome(name: str, outcome: TestOutcome) -> str:
    head = f"testing {name}: "
    if isinstance(outcome, Passed):
        return head + "." * outcome.tests + " ok"
    dots = "." * (outcome.after_tests - 1)
    if isinstance(outcome, Failed):
        return (f'{head}{dots}"failed with counter example :"\n'
                f"  {pretty(outcome.counterexample)}\n"
                f'"after {outcome.after_tests} tests"')
    sep = " " if dots else ""
    return f"{head}{dots}{sep}aborted: {outcome.reason}"
