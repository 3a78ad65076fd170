"""Random well-typed terms by sampling typing derivations.

Given a goal type, the generator picks one of the typing rules whose
conclusion can have that type, and recursively generates the premises at a
strictly smaller size.  Size 0 only admits axioms (and the structural rules
for pairs and functions, which terminate because the type shrinks).
"""

from __future__ import annotations

import dataclasses
import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Optional

from pun.syntax import (
    BOOL, FALSE, INT, LEAF, TRUE, UNIT, UNIT_LIT, App, ArrowType, BinOp,
    BSTType, Fst, If, IntType, Lambda, Let, Node, NumLit, PairTerm, PairType,
    Rec, Snd, Term, Type, UnitType, Var, has_tvars,
)
from pun.typecheck import TypeEnv


@dataclass(frozen=True)
class GenConfig:
    var_bias: float = 0.5
    bound_type_bias: float = 0.75
    # probability of a leaf when generating a tree at size > 0
    node_leaf_bias: float = 0.25
    int_range: tuple[int, int] = (0, 100)
    # depth of the auxiliary types drawn for fst/snd/application/let premises
    type_depth: int = 1

    def __post_init__(self) -> None:
        for name in ("var_bias", "bound_type_bias", "node_leaf_bias"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be a probability, got {value}")
        lo, hi = self.int_range
        if lo > hi:
            raise ValueError(f"empty int_range {self.int_range}")
        if self.type_depth < 0:
            raise ValueError("type_depth must be nonnegative")

    def leaf_bias(self, size: int) -> float:
        return 1.0 if size == 0 else self.node_leaf_bias


@dataclass(frozen=True)
class GenContext:
    globals: TypeEnv
    locals: TypeEnv
    size: int
    rng: random.Random
    fresh_counter: Iterator[int] = field(default_factory=itertools.count, compare=False)

    def __post_init__(self) -> None:
        if self.size < 0:
            raise ValueError("size must be nonnegative")

    def at(self, size: int, locals_: Optional[TypeEnv] = None) -> GenContext:
        """Child context sharing the random stream and name counter."""
        return dataclasses.replace(
            self, size=size, locals=self.locals if locals_ is None else locals_)

    def scope(self) -> dict[str, Type]:
        return {**self.globals, **self.locals}


def new_context(
    seed: int | random.Random,
    size: int,
    globals_: Optional[Mapping[str, Type]] = None,
    locals_: Optional[Mapping[str, Type]] = None,
) -> GenContext:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return GenContext(TypeEnv(globals_), TypeEnv(locals_), size, rng)


def fresh_name(ctx: GenContext) -> str:
    while True:
        name = f"x{next(ctx.fresh_counter)}"
        if name not in ctx.globals and name not in ctx.locals:
            return name


def split_size(ctx: GenContext, parts: int) -> list[int]:
    """Share ``size - 1`` among ``parts`` premises as evenly as possible."""
    budget = ctx.size - 1
    base, extra = divmod(budget, parts)
    sizes = [base] * parts
    for i in ctx.rng.sample(range(parts), extra):
        sizes[i] += 1
    return sizes


# -- types -------------------------------------------------------------------

_BASE_TYPES = (INT, BOOL, UNIT)
_CONSTRUCTORS = ("integer", "boolean", "unit", "pair", "arrow", "bst")


def random_type(rng: random.Random, depth: int) -> Type:
    """Uniform over base types at depth 0, else uniform over constructors."""
    if depth == 0:
        return rng.choice(_BASE_TYPES)
    kind = rng.choice(_CONSTRUCTORS)
    if kind == "integer":
        return INT
    if kind == "boolean":
        return BOOL
    if kind == "unit":
        return UNIT
    a, b = random_type(rng, depth - 1), random_type(rng, depth - 1)
    if kind == "pair":
        return PairType(a, b)
    if kind == "arrow":
        return ArrowType(a, b)
    return BSTType(a, b)


def generate_type(ctx: GenContext, cfg: GenConfig, depth: int) -> Type:
    scope_types = list(dict.fromkeys(ctx.scope().values()))
    if scope_types and ctx.rng.random() < cfg.bound_type_bias:
        return ctx.rng.choice(scope_types)
    return random_type(ctx.rng, depth)


# -- terms -------------------------------------------------------------------


def generate_term(ctx: GenContext, cfg: GenConfig, ty: Type) -> Term:
    if has_tvars(ty):
        raise ValueError(f"cannot generate terms of a non-ground type {ty}")
    rng = ctx.rng
    candidates = [name for name, bound in ctx.scope().items() if bound == ty]
    if candidates and rng.random() < cfg.var_bias:
        return Var(rng.choice(candidates))

    if isinstance(ty, PairType):
        a, b = (ctx, ctx) if ctx.size == 0 else [ctx.at(m) for m in split_size(ctx, 2)]
        return PairTerm(generate_term(a, cfg, ty.fst), generate_term(b, cfg, ty.snd))
    if isinstance(ty, ArrowType):
        return _lambda(ctx.at(max(ctx.size - 1, 0)), cfg, ty.dom, ty.cod)
    if isinstance(ty, BSTType):
        if rng.random() < cfg.leaf_bias(ctx.size):
            return LEAF
        l, k, v, r = (ctx.at(m) for m in split_size(ctx, 4))
        return Node(generate_term(l, cfg, ty), generate_term(k, cfg, ty.key),
                    generate_term(v, cfg, ty.val), generate_term(r, cfg, ty))
    if isinstance(ty, UnitType):
        return UNIT_LIT
    if ctx.size == 0:
        if isinstance(ty, IntType):
            return NumLit(rng.randint(*cfg.int_range))
        return rng.choice((TRUE, FALSE))
    rules = _INT_RULES if isinstance(ty, IntType) else _BOOL_RULES
    return rng.choice(rules)(ctx, cfg, ty)


def _lambda(ctx: GenContext, cfg: GenConfig, dom: Type, cod: Type) -> Lambda:
    """``\\x -> body`` with ``x : dom`` visible while generating ``body``."""
    name = fresh_name(ctx)
    inner = ctx.at(ctx.size, ctx.locals.extend(name, dom))
    return Lambda(name, generate_term(inner, cfg, cod))


def _arith(ctx: GenContext, cfg: GenConfig, ty: Type) -> Term:
    a, b = split_size(ctx, 2)
    op = ctx.rng.choice(("+", "-"))
    return BinOp(op, generate_term(ctx.at(a), cfg, INT), generate_term(ctx.at(b), cfg, INT))


def _leq(ctx: GenContext, cfg: GenConfig, ty: Type) -> Term:
    a, b = split_size(ctx, 2)
    return BinOp("<=", generate_term(ctx.at(a), cfg, INT), generate_term(ctx.at(b), cfg, INT))


def _if(ctx: GenContext, cfg: GenConfig, ty: Type) -> Term:
    c, a, b = split_size(ctx, 3)
    return If(generate_term(ctx.at(c), cfg, BOOL),
              generate_term(ctx.at(a), cfg, ty), generate_term(ctx.at(b), cfg, ty))


def _fst(ctx: GenContext, cfg: GenConfig, ty: Type) -> Term:
    other = generate_type(ctx, cfg, cfg.type_depth)
    return Fst(generate_term(ctx.at(ctx.size - 1), cfg, PairType(ty, other)))


def _snd(ctx: GenContext, cfg: GenConfig, ty: Type) -> Term:
    other = generate_type(ctx, cfg, cfg.type_depth)
    return Snd(generate_term(ctx.at(ctx.size - 1), cfg, PairType(other, ty)))


def _apply(ctx: GenContext, cfg: GenConfig, ty: Type) -> Term:
    dom = generate_type(ctx, cfg, cfg.type_depth)
    body_size, arg_size = split_size(ctx, 2)
    fun = _lambda(ctx.at(body_size), cfg, dom, ty)
    return App(fun, generate_term(ctx.at(arg_size), cfg, dom))


def _let(ctx: GenContext, cfg: GenConfig, ty: Type) -> Term:
    bound_type = generate_type(ctx, cfg, cfg.type_depth)
    bound_size, body_size = split_size(ctx, 2)
    bound = generate_term(ctx.at(bound_size), cfg, bound_type)
    name = fresh_name(ctx)
    body = generate_term(ctx.at(body_size, ctx.locals.extend(name, bound_type)), cfg, ty)
    return Let(name, bound, body)


def generate_rec(ctx: GenContext, cfg: GenConfig, ty: Type) -> Rec:
    """``rec x . body`` where ``x`` is never in scope for ``body``, so the
    recursion is inert and the term terminates whenever ``body`` does."""
    if ctx.size == 0:
        raise ValueError("rec needs a positive size")
    name = fresh_name(ctx)
    return Rec(name, generate_term(ctx.at(ctx.size - 1), cfg, ty))


Rule = Callable[[GenContext, GenConfig, Type], Term]

_SHARED_RULES: tuple[Rule, ...] = (_if, _fst, _snd, _apply, _let, generate_rec)
_INT_RULES: tuple[Rule, ...] = (_arith, *_SHARED_RULES)
_BOOL_RULES: tuple[Rule, ...] = (_leq, *_SHARED_RULES)


def generate_closed(
    ty: Type,
    seed: int | random.Random,
    size: int,
    cfg: Optional[GenConfig] = None,
    globals_: Optional[Mapping[str, Type]] = None,
) -> Term:
    """A term of type ``ty`` whose only free names are top-level ones."""
    return generate_term(new_context(seed, size, globals_), cfg or GenConfig(), ty)

