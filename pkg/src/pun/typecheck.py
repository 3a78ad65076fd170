"""Typing rules, monomorphic inference and whole-program checking."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

from pun.syntax import (
    BOOL, INT, UNIT, App, ArrowType, BinOp, BoolLit, BSTType, Case,
    Definition, Fst, If, Lambda, Leaf, Let, Node, NumLit, PairTerm, PairType,
    Pattern, PConst, PLeaf, PNode, PPair, Program, Property, PVar, Rec, Snd,
    Term, TVar, Type, UnitLit, Var, free_vars, is_first_order, rename_shadowing,
)


class TypeEnv(Mapping[str, Type]):
    """Persistent name-to-type map; ``extend`` never mutates ``self``."""

    __slots__ = ("_bindings",)

    def __init__(self, bindings: Optional[Mapping[str, Type]] = None) -> None:
        self._bindings: dict[str, Type] = dict(bindings or {})

    def extend(self, name: str, ty: Type) -> TypeEnv:
        env = TypeEnv.__new__(TypeEnv)
        env._bindings = {**self._bindings, name: ty}
        return env

    def union(self, other: Mapping[str, Type]) -> TypeEnv:
        """Bindings of ``other`` win on conflict."""
        env = TypeEnv.__new__(TypeEnv)
        env._bindings = {**self._bindings, **other}
        return env

    def __getitem__(self, name: str) -> Type:
        return self._bindings[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._bindings)

    def __len__(self) -> int:
        return len(self._bindings)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v}" for k, v in self._bindings.items())
        return f"TypeEnv({{{inner}}})"


class ErrorKind(enum.Enum):
    MISMATCH = "mismatch"
    UNBOUND_VARIABLE = "unbound variable"
    OCCURS_CHECK = "occurs check"
    NOT_A_FUNCTION = "not a function"
    EQ_ON_FUNCTION = "equality on functions"


class TypeCheckError(Exception):
    def __init__(
        self,
        kind: ErrorKind,
        *,
        expected: Optional[Type] = None,
        found: Optional[Type] = None,
        name: Optional[str] = None,
        location: str = "",
    ) -> None:
        self.kind = kind
        self.expected = expected
        self.found = found
        self.name = name
        self.location = location
        self.decl: Optional[str] = None
        super().__init__(self.describe())

    def describe(self) -> str:
        if self.kind is ErrorKind.MISMATCH:
            text = f"expected {self.expected}, found {self.found}"
        elif self.kind is ErrorKind.UNBOUND_VARIABLE:
            text = f"unbound variable {self.name}"
        elif self.kind is ErrorKind.OCCURS_CHECK:
            text = f"infinite type: {self.expected} occurs in {self.found}"
        elif self.kind is ErrorKind.NOT_A_FUNCTION:
            text = f"expected a function, found {self.found}"
        else:
            text = f"cannot compare values of function type {self.found}"
        if self.location:
            text += f" (in {self.location})"
        return text

    def __str__(self) -> str:
        where = f" in {self.decl}" if self.decl else ""
        return f"type error{where}: {self.describe()}"


_tvar_ids = itertools.count()


def fresh_tvar() -> TVar:
    return TVar(next(_tvar_ids))


class Inference:
    """Constraint solving by eager first-order unification."""

    def __init__(self) -> None:
        self.subst: dict[int, Type] = {}
        self._eq_operands: list[tuple[Type, str]] = []

    fresh = staticmethod(fresh_tvar)

    def resolve(self, ty: Type) -> Type:
        while isinstance(ty, TVar) and ty.id in self.subst:
            ty = self.subst[ty.id]
        return ty

    def zonk(self, ty: Type) -> Type:
        ty = self.resolve(ty)
        if isinstance(ty, PairType):
            return PairType(self.zonk(ty.fst), self.zonk(ty.snd))
        if isinstance(ty, ArrowType):
            return ArrowType(self.zonk(ty.dom), self.zonk(ty.cod))
        if isinstance(ty, BSTType):
            return BSTType(self.zonk(ty.key), self.zonk(ty.val))
        return ty

    def _occurs(self, var: TVar, ty: Type) -> bool:
        ty = self.resolve(ty)
        if isinstance(ty, TVar):
            return ty.id == var.id
        if isinstance(ty, PairType):
            return self._occurs(var, ty.fst) or self._occurs(var, ty.snd)
        if isinstance(ty, ArrowType):
            return self._occurs(var, ty.dom) or self._occurs(var, ty.cod)
        if isinstance(ty, BSTType):
            return self._occurs(var, ty.key) or self._occurs(var, ty.val)
        return False

    def unify(self, expected: Type, found: Type, where: str = "") -> None:
        a, b = self.resolve(expected), self.resolve(found)
        if a is b or a == b:
            return
        if isinstance(a, TVar) or isinstance(b, TVar):
            var, other = (a, b) if isinstance(a, TVar) else (b, a)
            if self._occurs(var, other):
                raise TypeCheckError(
                    ErrorKind.OCCURS_CHECK, expected=var, found=self.zonk(other), location=where)
            self.subst[var.id] = other
            return
        if type(a) is type(b):
            if isinstance(a, PairType):
                self._unify_parts(expected, found, (a.fst, b.fst), (a.snd, b.snd), where=where)
                return
            if isinstance(a, ArrowType):
                self._unify_parts(expected, found, (a.dom, b.dom), (a.cod, b.cod), where=where)
                return
            if isinstance(a, BSTType):
                self._unify_parts(expected, found, (a.key, b.key), (a.val, b.val), where=where)
                return
        raise TypeCheckError(
            ErrorKind.MISMATCH, expected=self.zonk(a), found=self.zonk(b), location=where)

    def _unify_parts(self, expected: Type, found: Type, *pairs: tuple[Type, Type],
                     where: str) -> None:
        try:
            for x, y in pairs:
                self.unify(x, y, where)
        except TypeCheckError as err:
            if err.kind is not ErrorKind.MISMATCH:
                raise
            # report the whole types, not the first differing component
            raise TypeCheckError(
                ErrorKind.MISMATCH, expected=self.zonk(expected), found=self.zonk(found),
                location=where) from None

    def infer(self, env: Mapping[str, Type], t: Term) -> Type:
        match t:
            case NumLit():
                return INT
            case BoolLit():
                return BOOL
            case UnitLit():
                return UNIT
            case Var(name):
                try:
                    return env[name]
                except KeyError:
                    raise TypeCheckError(ErrorKind.UNBOUND_VARIABLE, name=name) from None
            case If(c, a, b):
                self.unify(BOOL, self.infer(env, c), "if condition")
                ty = self.infer(env, a)
                self.unify(ty, self.infer(env, b), "else branch")
                return ty
            case BinOp("==", l, r):
                ty = self.infer(env, l)
                self.unify(ty, self.infer(env, r), "==")
                self._eq_operands.append((ty, "=="))
                return BOOL
            case BinOp(op, l, r):
                self.unify(INT, self.infer(env, l), op)
                self.unify(INT, self.infer(env, r), op)
                return INT if op in ("+", "-") else BOOL
            case PairTerm(a, b):
                return PairType(self.infer(env, a), self.infer(env, b))
            case Fst(a) | Snd(a):
                left, right = self.fresh(), self.fresh()
                self.unify(PairType(left, right), self.infer(env, a), type(t).__name__.lower())
                return left if isinstance(t, Fst) else right
            case Lambda(param, body):
                dom = self.fresh()
                extended = _extend(env, param, dom)
                return ArrowType(dom, self.infer(extended, body))
            case App(f, a):
                fun = self.resolve(self.infer(env, f))
                arg = self.infer(env, a)
                if isinstance(fun, ArrowType):
                    self.unify(fun.dom, arg, "application argument")
                    return fun.cod
                if isinstance(fun, TVar):
                    result = self.fresh()
                    self.unify(fun, ArrowType(arg, result), "application")
                    return result
                raise TypeCheckError(ErrorKind.NOT_A_FUNCTION, found=self.zonk(fun))
            case Let(name, bound, body):
                ty = self.infer(env, bound)
                return self.infer(_extend(env, name, ty), body)
            case Rec(name, body):
                ty = self.fresh()
                self.unify(ty, self.infer(_extend(env, name, ty), body), "rec")
                return ty
            case Leaf():
                return BSTType(self.fresh(), self.fresh())
            case Node(l, k, v, r):
                tree = BSTType(self.fresh(), self.fresh())
                self.unify(tree, self.infer(env, l), "node left subtree")
                self.unify(tree.key, self.infer(env, k), "node key")
                self.unify(tree.val, self.infer(env, v), "node value")
                self.unify(tree, self.infer(env, r), "node right subtree")
                return tree
            case Case(s, a, p, b):
                tree = BSTType(self.fresh(), self.fresh())
                self.unify(tree, self.infer(env, s), "case scrutinee")
                result = self.infer(env, a)
                pattern_type, bindings = self.infer_pattern(p)
                self.unify(tree, pattern_type, "case pattern")
                inner = env
                for name, ty in bindings.items():
                    inner = _extend(inner, name, ty)
                self.unify(result, self.infer(inner, b), "case branch")
                return result
        raise TypeError(f"not a term: {t!r}")

    def infer_pattern(self, p: Pattern) -> tuple[Type, dict[str, Type]]:
        bindings: dict[str, Type] = {}

        def go(p: Pattern) -> Type:
            match p:
                case PVar(name):
                    bindings[name] = ty = self.fresh()
                    return ty
                case PLeaf():
                    return BSTType(self.fresh(), self.fresh())
                case PConst(c):
                    return self.infer({}, c)
                case PPair(a, b):
                    return PairType(go(a), go(b))
                case PNode(l, k, v, r):
                    tree = BSTType(self.fresh(), self.fresh())
                    self.unify(tree, go(l), "node pattern")
                    self.unify(tree.key, go(k), "node pattern key")
                    self.unify(tree.val, go(v), "node pattern value")
                    self.unify(tree, go(r), "node pattern")
                    return tree
            raise TypeError(f"not a pattern: {p!r}")

        return go(p), bindings

    def check_equalities(self) -> None:
        """Reject ``==`` whose operands ended up with a function type."""
        for ty, where in self._eq_operands:
            ty = self.zonk(ty)
            if not is_first_order(ty):
                raise TypeCheckError(ErrorKind.EQ_ON_FUNCTION, found=ty, location=where)


def _extend(env: Mapping[str, Type], name: str, ty: Type) -> Mapping[str, Type]:
    if isinstance(env, TypeEnv):
        return env.extend(name, ty)
    return {**env, name: ty}


def default_tvars(ty: Type) -> Type:
    """Ground every residual type variable at ``integer``."""
    if isinstance(ty, TVar):
        return INT
    if isinstance(ty, PairType):
        return PairType(default_tvars(ty.fst), default_tvars(ty.snd))
    if isinstance(ty, ArrowType):
        return ArrowType(default_tvars(ty.dom), default_tvars(ty.cod))
    if isinstance(ty, BSTType):
        return BSTType(default_tvars(ty.key), default_tvars(ty.val))
    return ty


def check_term(env: Mapping[str, Type], t: Term, expected: Type) -> None:
    """Raise ``TypeCheckError`` unless ``env |- t : expected`` is derivable."""
    inference = Inference()
    inference.unify(expected, inference.infer(env, t))
    inference.check_equalities()


def infer_term(env: Mapping[str, Type], t: Term) -> Type:
    """Most general monomorphic type of ``t``; may contain type variables."""
    inference = Inference()
    ty = inference.infer(env, t)
    inference.check_equalities()
    return inference.zonk(ty)


def infer_property_args(env: Mapping[str, Type], prop: Property) -> list[tuple[str, Type]]:
    inference = Inference()
    arg_types = [inference.fresh() for _ in prop.args]
    inner: Mapping[str, Type] = env
    for name, ty in zip(prop.args, arg_types):
        inner = _extend(inner, name, ty)
    inference.unify(BOOL, inference.infer(inner, prop.body), "property body")
    inference.check_equalities()
    return [(name, default_tvars(inference.zonk(ty))) for name, ty in zip(prop.args, arg_types)]


@dataclass(frozen=True)
class TypedProperty:
    name: str
    args: tuple[tuple[str, Type], ...]
    body: Term


@dataclass(frozen=True)
class TypedProgram:
    program: Program
    env: TypeEnv
    # definition name -> closed term (rec-wrapped when self-recursive)
    globals: Mapping[str, Term]
    properties: tuple[TypedProperty, ...]

    def property(self, name: str) -> TypedProperty:
        for prop in self.properties:
            if prop.name == name:
                return prop
        raise KeyError(name)


def check_program(program: Program) -> TypedProgram:
    env = TypeEnv(program.signatures)
    top = set(env)
    globals_: dict[str, Term] = {}
    properties: list[TypedProperty] = []
    for decl in program.declarations:
        try:
            if isinstance(decl, Definition):
                if decl.name not in env:
                    raise TypeCheckError(ErrorKind.UNBOUND_VARIABLE, name=decl.name,
                                         location="definition without a signature")
                term = _definition_lambda(decl)
                check_term(env, term, env[decl.name])
                term = rename_shadowing(term, top)
                globals_[decl.name] = Rec(decl.name, term) if decl.name in free_vars(term) else term
            elif isinstance(decl, Property):
                args = infer_property_args(env, decl)
                body = rename_shadowing(decl.body, top)
                properties.append(TypedProperty(decl.name, tuple(args), body))
        except TypeCheckError as err:
            err.decl = decl.name
            raise
    return TypedProgram(program, env, globals_, tuple(properties))


def _definition_lambda(decl: Definition) -> Term:
    term = decl.body
    for param in reversed(decl.params):
        term = Lambda(param, term)
    return term
