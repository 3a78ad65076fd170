"""Big-step call-by-value evaluation by substitution, with a fuel bound."""

from __future__ import annotations

import enum
import sys
import threading
from typing import Callable, Mapping, Optional, TypeVar

from pun.syntax import (
    FALSE, INT64_MAX, INT64_MIN, TRUE, App, BinOp, BoolLit, Case, Fst,
    If, Lambda, Leaf, Let, Node, NumLit, PairTerm, Pattern, PConst, PLeaf,
    PNode, PPair, PVar, Rec, Snd, Term, UnitLit, Var, substitute,
)

DEFAULT_FUEL = 100_000


class EvalErrorKind(enum.Enum):
    OUT_OF_FUEL = "out of fuel"
    MATCH_FAILURE = "match failure"
    ARITHMETIC_OVERFLOW = "arithmetic overflow"
    STUCK = "stuck"


class EvalError(Exception):
    def __init__(self, kind: EvalErrorKind, detail: str = "") -> None:
        self.kind = kind
        self.detail = detail
        super().__init__(f"{kind.value}: {detail}" if detail else kind.value)


class Fuel:
    """Remaining evaluation steps; every call to the evaluator spends one."""

    __slots__ = ("remaining",)

    def __init__(self, remaining: int = DEFAULT_FUEL) -> None:
        if remaining < 0:
            raise ValueError("fuel must be nonnegative")
        self.remaining = remaining

    def spend(self) -> None:
        if self.remaining == 0:
            raise EvalError(EvalErrorKind.OUT_OF_FUEL)
        self.remaining -= 1


def match_pattern(p: Pattern, c: Term) -> Optional[dict[str, Term]]:
    """Bindings that make ``p`` equal to the value ``c``, or None."""
    bindings: dict[str, Term] = {}

    def go(p: Pattern, c: Term) -> bool:
        match p:
            case PVar(name):
                bindings[name] = c
                return True
            case PLeaf():
                return isinstance(c, Leaf)
            case PConst(value):
                return values_equal(value, c)
            case PNode(l, k, v, r):
                return isinstance(c, Node) and go(l, c.left) and go(k, c.key) \
                    and go(v, c.val) and go(r, c.right)
            case PPair(a, b):
                return isinstance(c, PairTerm) and go(a, c.fst) and go(b, c.snd)
        raise TypeError(f"not a pattern: {p!r}")

    return bindings if go(p, c) else None


def values_equal(a: Term, b: Term) -> bool:
    """Structural equality of first-order values."""
    if isinstance(a, Lambda) or isinstance(b, Lambda):
        raise EvalError(EvalErrorKind.STUCK, "== applied to a function")
    if type(a) is not type(b):
        return False
    match a:
        case NumLit(v) | BoolLit(v):
            return v == b.value
        case UnitLit() | Leaf():
            return True
        case PairTerm(x, y):
            return values_equal(x, b.fst) and values_equal(y, b.snd)
        case Node(l, k, v, r):
            return (values_equal(l, b.left) and values_equal(k, b.key)
                    and values_equal(v, b.val) and values_equal(r, b.right))
    raise EvalError(EvalErrorKind.STUCK, f"== applied to a non-value {type(a).__name__}")


def _int(t: Term, op: str) -> int:
    if not isinstance(t, NumLit):
        raise EvalError(EvalErrorKind.STUCK, f"{op} applied to {type(t).__name__}")
    return t.value


def _checked(value: int) -> NumLit:
    if not INT64_MIN <= value <= INT64_MAX:
        raise EvalError(EvalErrorKind.ARITHMETIC_OVERFLOW, str(value))
    return NumLit(value)


class Evaluator:
    """Evaluates closed terms; free names resolve to top-level definitions."""

    def __init__(self, globals_: Optional[Mapping[str, Term]] = None,
                 fuel: int = DEFAULT_FUEL) -> None:
        self.globals = dict(globals_ or {})
        self.fuel = Fuel(fuel)

    def eval(self, t: Term) -> Term:
        try:
            return self._eval(t)
        except RecursionError:
            raise EvalError(EvalErrorKind.OUT_OF_FUEL, "evaluation nested too deeply") from None

    def _eval(self, t: Term) -> Term:
        spend = self.fuel.spend
        while True:
            spend()
            match t:
                case NumLit() | BoolLit() | UnitLit() | Leaf() | Lambda():
                    return t
                case Var(name):
                    if name not in self.globals:
                        raise EvalError(EvalErrorKind.STUCK, f"unbound variable {name}")
                    t = self.globals[name]
                case If(c, a, b):
                    cond = self._eval(c)
                    if not isinstance(cond, BoolLit):
                        raise EvalError(EvalErrorKind.STUCK, "if on a non-boolean")
                    t = a if cond.value else b
                case BinOp(op, l, r):
                    lhs, rhs = self._eval(l), self._eval(r)
                    if op == "==":
                        return TRUE if values_equal(lhs, rhs) else FALSE
                    x, y = _int(lhs, op), _int(rhs, op)
                    if op == "+":
                        return _checked(x + y)
                    if op == "-":
                        return _checked(x - y)
                    if op == "<=":
                        return TRUE if x <= y else FALSE
                    if op == "<":
                        return TRUE if x < y else FALSE
                    return TRUE if x > y else FALSE
                case PairTerm(a, b):
                    return PairTerm(self._eval(a), self._eval(b))
                case Fst(a) | Snd(a):
                    pair = self._eval(a)
                    if not isinstance(pair, PairTerm):
                        raise EvalError(EvalErrorKind.STUCK, "projection from a non-pair")
                    return pair.fst if isinstance(t, Fst) else pair.snd
                case App(f, a):
                    fun = self._eval(f)
                    arg = self._eval(a)
                    if not isinstance(fun, Lambda):
                        raise EvalError(EvalErrorKind.STUCK, "application of a non-function")
                    t = substitute(fun.body, fun.param, arg)
                case Let(name, bound, body):
                    t = substitute(body, name, self._eval(bound))
                case Rec(name, body):
                    t = substitute(body, name, t)
                case Node(l, k, v, r):
                    return Node(self._eval(l), self._eval(k), self._eval(v), self._eval(r))
                case Case(s, a, p, b):
                    tree = self._eval(s)
                    if isinstance(tree, Leaf):
                        t = a
                        continue
                    if not isinstance(tree, Node):
                        raise EvalError(EvalErrorKind.STUCK, "case on a non-tree")
                    bindings = match_pattern(p, tree)
                    if bindings is None:
                        raise EvalError(EvalErrorKind.MATCH_FAILURE)
                    for name, value in bindings.items():
                        b = substitute(b, name, value)
                    t = b
                case _:
                    raise TypeError(f"not a term: {t!r}")


def evaluate(t: Term, fuel: int = DEFAULT_FUEL,
             globals_: Optional[Mapping[str, Term]] = None) -> Term:
    return Evaluator(globals_, fuel).eval(t)


T = TypeVar("T")

DEEP_STACK_BYTES = 512 * 1024 * 1024
DEEP_RECURSION_LIMIT = 400_000


def run_deep(fn: Callable[..., T], *args, **kwargs) -> T:
    """Run ``fn`` on a thread with a large stack so deep non-tail recursion in
    evaluated programs exhausts fuel before it exhausts the C stack."""
    result: list = []
    error: list = []

    def target() -> None:
        try:
            result.append(fn(*args, **kwargs))
        except BaseException as exc:  # re-raised on the calling thread
            error.append(exc)

    old_limit = sys.getrecursionlimit()
    old_size = threading.stack_size()
    sys.setrecursionlimit(max(old_limit, DEEP_RECURSION_LIMIT))
    try:
        threading.stack_size(DEEP_STACK_BYTES)
        thread = threading.Thread(target=target, name="pun-eval")
        thread.start()
        thread.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if error:
        raise error[0]
    return result[0]

