import collections
import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chisquare

from pun.gengen import (
    GenConfig, fresh_name, generate_closed, generate_rec, generate_term, generate_type,
    new_context, random_type, split_size,
)
from pun.evaluator import evaluate
from pun.syntax import (
    BOOL, INT, LEAF, UNIT, ArrowType, BoolLit, BoolType, BSTType, IntType, NumLit,
    PairTerm, PairType, UnitType, Var, depth, free_vars, subterms, type_depth,
)
from pun.typecheck import check_term

TYPES = (INT, BOOL, UNIT, PairType(INT, BOOL), BSTType(INT, INT), ArrowType(INT, INT),
         PairType(PairType(INT, INT), BSTType(INT, UNIT)))


class TestSizeZero:
    def test_integer_in_range(self):
        cfg = GenConfig(int_range=(3, 9))
        for seed in range(200):
            t = generate_closed(INT, seed, 0, cfg)
            assert isinstance(t, NumLit) and 3 <= t.value <= 9

    def test_tree_is_leaf(self):
        for seed in range(50):
            assert generate_closed(BSTType(INT, BOOL), seed, 0) == LEAF

    def test_pair_of_atoms(self):
        t = generate_closed(PairType(INT, BOOL), 1, 0)
        assert isinstance(t, PairTerm)
        assert isinstance(t.fst, NumLit) and isinstance(t.snd, BoolLit)

    def test_both_booleans_appear(self):
        seen = {generate_closed(BOOL, seed, 0).value for seed in range(50)}
        assert seen == {True, False}


class TestFreshName:
    def test_avoids_scope(self):
        ctx = new_context(0, 3, {"x0": INT}, {"x1": BOOL})
        assert fresh_name(ctx) == "x2"

    def test_distinct(self):
        ctx = new_context(0, 3)
        names = [fresh_name(ctx) for _ in range(100)]
        assert len(set(names)) == 100

    def test_children_share_the_counter(self):
        ctx = new_context(0, 3)
        first = fresh_name(ctx)
        assert fresh_name(ctx.at(1)) != first


def test_split_size_preserves_budget():
    rng = random.Random(4)
    for size in range(1, 30):
        for parts in range(1, 5):
            sizes = split_size(new_context(rng, size), parts)
            assert sum(sizes) == size - 1 and max(sizes) - min(sizes) <= 1


class TestTypes:
    def test_depth_zero_is_base(self):
        rng = random.Random(0)
        assert {random_type(rng, 0) for _ in range(300)} == {INT, BOOL, UNIT}

    def test_full_bias_picks_a_scope_type(self):
        tree = BSTType(INT, BOOL)
        ctx = new_context(0, 3, {}, {"t": tree})
        cfg = GenConfig(bound_type_bias=1.0)
        assert all(generate_type(ctx, cfg, 2) == tree for _ in range(100))

    def test_unbiased_depth_two_distribution(self):
        # oracle: probability of each (constructor, child constructors) shape,
        # computed from the uniform choice at every level
        ctors = ("integer", "boolean", "unit", "pair", "arrow", "bst")
        expected = collections.Counter()
        for outer in ctors:
            if outer in ctors[:3]:
                expected[(outer,)] += 1 / 6
                continue
            for a, b in itertools.product(ctors, ctors):
                expected[(outer, a, b)] += 1 / 6 / 36

        def shape(t):
            name = {IntType: "integer", BoolType: "boolean", UnitType: "unit",
                    PairType: "pair", ArrowType: "arrow", BSTType: "bst"}
            kids = {PairType: ("fst", "snd"), ArrowType: ("dom", "cod"), BSTType: ("key", "val")}
            if type(t) not in kids:
                return (name[type(t)],)
            a, b = (getattr(t, f) for f in kids[type(t)])
            return (name[type(t)], name[type(a)], name[type(b)])

        ctx = new_context(11, 0)
        cfg = GenConfig(bound_type_bias=0.0)
        draws = 10_000
        sampled = [generate_type(ctx, cfg, 2) for _ in range(draws)]
        assert all(type_depth(t) <= 2 for t in sampled)
        seen = collections.Counter(shape(t) for t in sampled)
        assert set(seen) <= set(expected)
        keys = list(expected)
        result = chisquare([seen[k] for k in keys], [expected[k] * draws for k in keys])
        assert result.pvalue > 0.001


def test_config_validation():
    with pytest.raises(ValueError):
        GenConfig(var_bias=1.5)
    with pytest.raises(ValueError):
        GenConfig(int_range=(5, 1))
    with pytest.raises(ValueError):
        GenConfig(type_depth=-1)
    assert GenConfig(node_leaf_bias=0.3).leaf_bias(0) == 1.0


def test_rec_binder_is_never_free():
    rng = random.Random(5)
    for _ in range(500):
        ty = rng.choice((INT, BOOL))
        t = generate_rec(new_context(rng, rng.randint(1, 8)), GenConfig(), ty)
        assert t.name not in free_vars(t.body)


def test_rec_evaluates_like_its_body():
    rng = random.Random(6)
    for _ in range(300):
        t = generate_rec(new_context(rng, rng.randint(1, 6)), GenConfig(), INT)
        assert evaluate(t) == evaluate(t.body)


def test_rec_needs_positive_size():
    with pytest.raises(ValueError):
        generate_rec(new_context(0, 0), GenConfig(), INT)


def test_var_bias_reaches_locals():
    ctx_hits = 0
    for seed in range(1000):
        ctx = new_context(seed, 3, {}, {"x": INT})
        t = generate_term(ctx, GenConfig(), INT)
        ctx_hits += any(s == Var("x") for s in subterms(t))
    assert ctx_hits >= 200


def test_no_locals_means_no_variables_at_size_zero():
    cfg = GenConfig(var_bias=1.0)
    assert isinstance(generate_closed(INT, 0, 0, cfg), NumLit)


def test_non_ground_type_rejected():
    from pun.syntax import TVar
    with pytest.raises(ValueError):
        generate_closed(TVar(0), 0, 3)


@settings(max_examples=300)
@given(st.sampled_from(TYPES), st.integers(0, 2 ** 32), st.integers(0, 12))
def test_generated_terms_are_well_typed_and_closed(ty, seed, size):
    t = generate_closed(ty, seed, size)
    check_term({}, t, ty)
    assert not free_vars(t)


@settings(max_examples=200)
@given(st.sampled_from(TYPES), st.integers(0, 2 ** 32), st.integers(0, 12))
def test_same_seed_same_term(ty, seed, size):
    assert generate_closed(ty, seed, size) == generate_closed(ty, seed, size)


@settings(max_examples=300)
@given(st.sampled_from(TYPES), st.integers(0, 2 ** 32), st.integers(0, 12))
def test_depth_is_linear_in_size(ty, seed, size):
    # each rule spends one unit of size; structural rules add depth bounded by the type
    t = generate_closed(ty, seed, size)
    assert depth(t) <= 4 * (size + 1) + 8


@settings(max_examples=200)
@given(st.integers(0, 2 ** 32), st.integers(1, 10))
def test_globals_are_usable(seed, size):
    env = {"g": ArrowType(INT, INT)}
    t = generate_closed(INT, seed, size, GenConfig(var_bias=0.9), env)
    check_term(env, t, INT)
    assert free_vars(t) <= {"g"}
