"""Terms, types, patterns and programs of the pun language.

Every node is an immutable dataclass, so terms can be shared freely
between the parser, typechecker, evaluator and generator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


# -- types -------------------------------------------------------------------


@dataclass(frozen=True)
class IntType:
    def __str__(self) -> str:
        return "integer"


@dataclass(frozen=True)
class BoolType:
    def __str__(self) -> str:
        return "boolean"


@dataclass(frozen=True)
class UnitType:
    def __str__(self) -> str:
        return "unit"


@dataclass(frozen=True)
class PairType:
    fst: Type
    snd: Type

    def __str__(self) -> str:
        return f"({self.fst}, {self.snd})"


@dataclass(frozen=True)
class ArrowType:
    dom: Type
    cod: Type

    def __str__(self) -> str:
        dom = f"({self.dom})" if isinstance(self.dom, ArrowType) else str(self.dom)
        return f"{dom} -> {self.cod}"


@dataclass(frozen=True)
class BSTType:
    key: Type
    val: Type

    def __str__(self) -> str:
        def arg(ty: Type) -> str:
            return f"({ty})" if isinstance(ty, (ArrowType, BSTType)) else str(ty)

        return f"bst {arg(self.key)} {arg(self.val)}"


@dataclass(frozen=True)
class TVar:
    """Unification variable; only appears while inferring."""

    id: int

    def __str__(self) -> str:
        return f"'t{self.id}"


Type = Union[IntType, BoolType, UnitType, PairType, ArrowType, BSTType, TVar]

INT = IntType()
BOOL = BoolType()
UNIT = UnitType()


def arrows(*tys: Type) -> Type:
    """Right-nested function type: ``arrows(a, b, c) == a -> (b -> c)``."""
    result = tys[-1]
    for ty in reversed(tys[:-1]):
        result = ArrowType(ty, result)
    return result


def has_tvars(ty: Type) -> bool:
    if isinstance(ty, TVar):
        return True
    if isinstance(ty, (PairType,)):
        return has_tvars(ty.fst) or has_tvars(ty.snd)
    if isinstance(ty, ArrowType):
        return has_tvars(ty.dom) or has_tvars(ty.cod)
    if isinstance(ty, BSTType):
        return has_tvars(ty.key) or has_tvars(ty.val)
    return False


def is_first_order(ty: Type) -> bool:
    """True when values of ``ty`` contain no functions."""
    if isinstance(ty, ArrowType):
        return False
    if isinstance(ty, PairType):
        return is_first_order(ty.fst) and is_first_order(ty.snd)
    if isinstance(ty, BSTType):
        return is_first_order(ty.key) and is_first_order(ty.val)
    return True


def type_depth(ty: Type) -> int:
    if isinstance(ty, PairType):
        return 1 + max(type_depth(ty.fst), type_depth(ty.snd))
    if isinstance(ty, ArrowType):
        return 1 + max(type_depth(ty.dom), type_depth(ty.cod))
    if isinstance(ty, BSTType):
        return 1 + max(type_depth(ty.key), type_depth(ty.val))
    return 0


# -- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class NumLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class UnitLit:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class If:
    cond: Term
    then: Term
    else_: Term


BINOPS = ("+", "-", "<=", "<", ">", "==")
ARITH_OPS = ("+", "-")
CMP_OPS = ("<=", "<", ">", "==")


@dataclass(frozen=True)
class BinOp:
    op: str
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class PairTerm:
    fst: Term
    snd: Term


@dataclass(frozen=True)
class Fst:
    arg: Term


@dataclass(frozen=True)
class Snd:
    arg: Term


@dataclass(frozen=True)
class Lambda:
    param: str
    body: Term


@dataclass(frozen=True)
class App:
    fun: Term
    arg: Term


@dataclass(frozen=True)
class Let:
    name: str
    bound: Term
    body: Term


@dataclass(frozen=True)
class Rec:
    name: str
    body: Term


@dataclass(frozen=True)
class Leaf:
    pass


@dataclass(frozen=True)
class Node:
    left: Term
    key: Term
    val: Term
    right: Term


@dataclass(frozen=True)
class Case:
    scrutinee: Term
    leaf_branch: Term
    pattern: Pattern
    node_branch: Term


Term = Union[
    NumLit, BoolLit, UnitLit, Var, If, BinOp, PairTerm, Fst, Snd,
    Lambda, App, Let, Rec, Leaf, Node, Case,
]

TRUE = BoolLit(True)
FALSE = BoolLit(False)
LEAF = Leaf()
UNIT_LIT = UnitLit()


# -- patterns ----------------------------------------------------------------


@dataclass(frozen=True)
class PConst:
    value: Term


@dataclass(frozen=True)
class PVar:
    name: str


@dataclass(frozen=True)
class PNode:
    left: Pattern
    key: Pattern
    val: Pattern
    right: Pattern


@dataclass(frozen=True)
class PPair:
    fst: Pattern
    snd: Pattern


@dataclass(frozen=True)
class PLeaf:
    pass


Pattern = Union[PConst, PVar, PNode, PPair, PLeaf]


def pattern_vars(p: Pattern) -> list[str]:
    """Variables bound by ``p``, left to right."""
    if isinstance(p, PVar):
        return [p.name]
    if isinstance(p, PNode):
        return [
            *pattern_vars(p.left), *pattern_vars(p.key),
            *pattern_vars(p.val), *pattern_vars(p.right),
        ]
    if isinstance(p, PPair):
        return [*pattern_vars(p.fst), *pattern_vars(p.snd)]
    return []


# -- programs ----------------------------------------------------------------


@dataclass(frozen=True)
class Signature:
    name: str
    ty: Type


@dataclass(frozen=True)
class Definition:
    name: str
    params: tuple[str, ...]
    body: Term

    def as_term(self) -> Term:
        """The definition as a closed lambda; self-reference becomes ``rec``."""
        term = self.body
        for param in reversed(self.params):
            term = Lambda(param, term)
        if self.name in free_vars(term):
            term = Rec(self.name, term)
        return term


@dataclass(frozen=True)
class Property:
    name: str
    args: tuple[str, ...]
    body: Term


Declaration = Union[Signature, Definition, Property]


@dataclass(frozen=True)
class Program:
    declarations: tuple[Declaration, ...]

    @property
    def signatures(self) -> dict[str, Type]:
        return {d.name: d.ty for d in self.declarations if isinstance(d, Signature)}

    @property
    def definitions(self) -> dict[str, Definition]:
        return {d.name: d for d in self.declarations if isinstance(d, Definition)}

    @property
    def properties(self) -> list[Property]:
        return [d for d in self.declarations if isinstance(d, Property)]


# -- binding structure -------------------------------------------------------


def free_vars(t: Term) -> set[str]:
    out: set[str] = set()
    _free(t, frozenset(), out)
    return out


def _free(t: Term, bound: frozenset[str], out: set[str]) -> None:
    match t:
        case Var(name):
            if name not in bound:
                out.add(name)
        case NumLit() | BoolLit() | UnitLit() | Leaf():
            pass
        case Lambda(param, body):
            _free(body, bound | {param}, out)
        case Let(name, bound_term, body):
            _free(bound_term, bound, out)
            _free(body, bound | {name}, out)
        case Rec(name, body):
            _free(body, bound | {name}, out)
        case Case(scrutinee, leaf_branch, pattern, node_branch):
            _free(scrutinee, bound, out)
            _free(leaf_branch, bound, out)
            _free(node_branch, bound | set(pattern_vars(pattern)), out)
        case _:
            for child in children(t):
                _free(child, bound, out)


def children(t: Term) -> tuple[Term, ...]:
    """Immediate subterms, in evaluation order."""
    match t:
        case If(c, a, b):
            return (c, a, b)
        case BinOp(_, l, r):
            return (l, r)
        case PairTerm(a, b):
            return (a, b)
        case Fst(a) | Snd(a):
            return (a,)
        case Lambda(_, body) | Rec(_, body):
            return (body,)
        case App(f, a):
            return (f, a)
        case Let(_, a, b):
            return (a, b)
        case Node(l, k, v, r):
            return (l, k, v, r)
        case Case(s, a, _, b):
            return (s, a, b)
    return ()


def subterms(t: Term) -> Iterable[Term]:
    """Pre-order walk over ``t`` and all of its subterms."""
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def depth(t: Term) -> int:
    return 1 + max((depth(c) for c in children(t)), default=0)


def size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


def substitute(body: Term, name: str, replacement: Term) -> Term:
    """Replace the free occurrences of ``name`` in ``body``.

    Raises ``ValueError`` if an occurrence sits under a binder that would
    capture a free variable of ``replacement``; closed replacements never do.
    """
    return _Subst(name, replacement).go(body, False)


class _Subst:
    __slots__ = ("name", "rep", "_fv")

    def __init__(self, name: str, rep: Term) -> None:
        self.name = name
        self.rep = rep
        self._fv: Optional[set[str]] = None

    def captures(self, binder: str) -> bool:
        if self._fv is None:
            self._fv = free_vars(self.rep)
        return binder in self._fv

    def go(self, t: Term, captured: bool) -> Term:
        name, go = self.name, self.go
        match t:
            case Var(n):
                if n != name:
                    return t
                if captured:
                    raise ValueError(f"substituting {name!r} would capture a free variable")
                return self.rep
            case NumLit() | BoolLit() | UnitLit() | Leaf():
                return t
            case Lambda(param, body):
                if param == name:
                    return t
                return Lambda(param, go(body, captured or self.captures(param)))
            case Let(n, bound, body):
                bound = go(bound, captured)
                if n == name:
                    return Let(n, bound, body)
                return Let(n, bound, go(body, captured or self.captures(n)))
            case Rec(n, body):
                if n == name:
                    return t
                return Rec(n, go(body, captured or self.captures(n)))
            case Case(s, a, p, b):
                s, a = go(s, captured), go(a, captured)
                names = pattern_vars(p)
                if name not in names:
                    b = go(b, captured or any(self.captures(n) for n in names))
                return Case(s, a, p, b)
            case If(c, a, b):
                return If(go(c, captured), go(a, captured), go(b, captured))
            case BinOp(op, l, r):
                return BinOp(op, go(l, captured), go(r, captured))
            case PairTerm(a, b):
                return PairTerm(go(a, captured), go(b, captured))
            case Fst(a):
                return Fst(go(a, captured))
            case Snd(a):
                return Snd(go(a, captured))
            case App(f, a):
                return App(go(f, captured), go(a, captured))
            case Node(l, k, v, r):
                return Node(go(l, captured), go(k, captured), go(v, captured), go(r, captured))
        raise TypeError(f"not a term: {t!r}")


def substitute_all(body: Term, bindings: Mapping[str, Term]) -> Term:
    """Simultaneous substitution of closed terms."""
    for name, rep in bindings.items():
        body = substitute(body, name, rep)
    return body


def is_canonical(t: Term, globals_: Iterable[str] = ()) -> bool:
    """Canonical forms are values: literals, lambdas, leaves, pairs and nodes of
    values.  Lambdas may additionally mention the names in ``globals_``."""
    match t:
        case NumLit() | BoolLit() | UnitLit() | Leaf():
            return True
        case PairTerm(a, b):
            return is_canonical(a, globals_) and is_canonical(b, globals_)
        case Node(l, k, v, r):
            return all(is_canonical(c, globals_) for c in (l, k, v, r))
        case Lambda():
            return free_vars(t) <= set(globals_)
    return False


def rename_shadowing(t: Term, taken: Iterable[str]) -> Term:
    """Rename every binder in ``t`` that shadows a name in ``taken``.

    Keeps substitution of terms that refer to top-level names capture-free.
    """
    taken = set(taken)
    if not taken:
        return t
    avoid = taken | free_vars(t) | {
        n for s in subterms(t) for n in _binders(s)
    }
    counter = itertools.count(1)

    def fresh(base: str) -> str:
        while True:
            candidate = f"{base}_{next(counter)}"
            if candidate not in avoid:
                avoid.add(candidate)
                return candidate

    def go(t: Term) -> Term:
        match t:
            case Lambda(p, body):
                body = go(body)
                if p in taken:
                    q = fresh(p)
                    return Lambda(q, substitute(body, p, Var(q)))
                return Lambda(p, body)
            case Let(n, a, body):
                a, body = go(a), go(body)
                if n in taken:
                    q = fresh(n)
                    return Let(q, a, substitute(body, n, Var(q)))
                return Let(n, a, body)
            case Rec(n, body):
                body = go(body)
                if n in taken:
                    q = fresh(n)
                    return Rec(q, substitute(body, n, Var(q)))
                return Rec(n, body)
            case Case(s, a, p, b):
                s, a, b = go(s), go(a), go(b)
                renames = {n: fresh(n) for n in pattern_vars(p) if n in taken}
                if renames:
                    p = _rename_pattern(p, renames)
                    b = substitute_all(b, {n: Var(q) for n, q in renames.items()})
                return Case(s, a, p, b)
            case If(c, a, b):
                return If(go(c), go(a), go(b))
            case BinOp(op, l, r):
                return BinOp(op, go(l), go(r))
            case PairTerm(a, b):
                return PairTerm(go(a), go(b))
            case Fst(a):
                return Fst(go(a))
            case Snd(a):
                return Snd(go(a))
            case App(f, a):
                return App(go(f), go(a))
            case Node(l, k, v, r):
                return Node(go(l), go(k), go(v), go(r))
        return t

    return go(t)


def _binders(t: Term) -> list[str]:
    match t:
        case Lambda(p, _) | Let(p, _, _) | Rec(p, _):
            return [p]
        case Case(_, _, p, _):
            return pattern_vars(p)
    return []


def _rename_pattern(p: Pattern, renames: Mapping[str, str]) -> Pattern:
    match p:
        case PVar(n):
            return PVar(renames.get(n, n))
        case PNode(l, k, v, r):
            return PNode(*(_rename_pattern(q, renames) for q in (l, k, v, r)))
        case PPair(a, b):
            return PPair(_rename_pattern(a, renames), _rename_pattern(b, renames))
    return p


# -- alpha equivalence -------------------------------------------------------


def alpha_equal(a: Term, b: Term) -> bool:
    return _nameless(a, {}) == _nameless(b, {})


def _nameless(t: Term, env: Mapping[str, int]) -> object:
    """Bound names become binder depths; free names stay as strings."""
    depth = len(env)
    match t:
        case Var(name):
            return ("bvar", depth - env[name]) if name in env else ("fvar", name)
        case Lambda(p, body):
            return ("lam", _nameless(body, {**env, p: depth + 1}))
        case Let(n, a, body):
            return ("let", _nameless(a, env), _nameless(body, {**env, n: depth + 1}))
        case Rec(n, body):
            return ("rec", _nameless(body, {**env, n: depth + 1}))
        case Case(s, a, p, b):
            names = pattern_vars(p)
            inner = dict(env)
            for i, n in enumerate(names):
                inner[n] = depth + 1 + i
            return ("case", _nameless(s, env), _nameless(a, env),
                    _pattern_shape(p, {n: i for i, n in enumerate(names)}),
                    _nameless(b, inner))
        case NumLit() | BoolLit() | UnitLit() | Leaf():
            return t
    return (type(t).__name__, getattr(t, "op", None),
            *(_nameless(c, env) for c in children(t)))


def _pattern_shape(p: Pattern, index: Mapping[str, int]) -> object:
    match p:
        case PVar(n):
            return ("pvar", index[n])
        case PNode(l, k, v, r):
            return ("pnode", *(_pattern_shape(q, index) for q in (l, k, v, r)))
        case PPair(a, b):
            return ("ppair", _pattern_shape(a, index), _pattern_shape(b, index))
    return p


# -- printing ----------------------------------------------------------------

_TERM, _CMP, _ARITH, _ATOM = range(4)


def pretty(t: Term) -> str:
    """Render ``t`` in concrete syntax that parses back to an alpha-equal term."""
    return _show(t, _TERM)


def _wrap(text: str, needed: bool) -> str:
    return f"({text})" if needed else text


def _show(t: Term, level: int) -> str:
    match t:
        case NumLit(v):
            return f"(-{-v})" if v < 0 else str(v)
        case BoolLit(v):
            return "true" if v else "false"
        case UnitLit():
            return "()"
        case Var(name):
            return name
        case Leaf():
            return "leaf"
        case Node(l, k, v, r):
            return "[node " + " ".join(_show(c, _ATOM) for c in (l, k, v, r)) + "]"
        case PairTerm(a, b):
            return f"({_show(a, _TERM)}, {_show(b, _TERM)})"
        case Fst(a):
            return f"fst({_show(a, _TERM)})"
        case Snd(a):
            return f"snd({_show(a, _TERM)})"
        case Lambda(p, body):
            return f"(\\ {p} -> {_show(body, _TERM)})"
        case App(f, a):
            return f"({_show(f, _ATOM)} {_show(a, _ATOM)})"
        case BinOp(op, l, r) if op in ARITH_OPS:
            return _wrap(f"{_show(l, _ARITH)} {op} {_show(r, _ATOM)}", level >= _ATOM)
        case BinOp(op, l, r):
            return _wrap(f"{_show(l, _ARITH)} {op} {_show(r, _ARITH)}", level >= _ARITH)
        case If(c, a, b):
            text = f"if {_show(c, _TERM)} then {_show(a, _TERM)} else {_show(b, _TERM)}"
        case Let(n, a, b):
            text = f"let {n} = {_show(a, _TERM)} in {_show(b, _TERM)}"
        case Rec(n, body):
            text = f"rec {n} . {_show(body, _TERM)}"
        case Case(s, a, p, b):
            text = (f"case {_show(s, _TERM)} of ; leaf -> {_show(a, _TERM)}"
                    f" ; {pretty_pattern(p)} -> {_show(b, _TERM)}")
        case _:
            raise TypeError(f"not a term: {t!r}")
    return _wrap(text, level > _TERM)


def pretty_pattern(p: Pattern) -> str:
    match p:
        case PVar(n):
            return n
        case PLeaf():
            return "leaf"
        case PConst(c):
            return pretty(c)
        case PNode(l, k, v, r):
            return "[node " + " ".join(pretty_pattern(q) for q in (l, k, v, r)) + "]"
        case PPair(a, b):
            return f"({pretty_pattern(a)}, {pretty_pattern(b)})"
    raise TypeError(f"not a pattern: {p!r}")


def pretty_declaration(d: Declaration) -> str:
    match d:
        case Signature(name, ty):
            return f"{name} : {ty} ."
        case Definition(name, params, body):
            head = " ".join((name, *params))
            return f"{head} = {pretty(body)} ."
        case Property(name, args, body):
            head = " ".join(("property", name, *args))
            return f"{head} . {pretty(body)} ."
    raise TypeError(f"not a declaration: {d!r}")


def pretty_program(p: Program) -> str:
    return "\n".join(pretty_declaration(d) for d in p.declarations) + "\n"
