import pytest

from pun.evaluator import EvalErrorKind, evaluate
from pun.parser import parse_program, parse_term
from pun.propcheck import (
    Aborted, Failed, Passed, RunConfig, check_all, check_property, instantiate,
    render_outcome, test_rng as rng_for,
)
from pun.syntax import FALSE, free_vars, pretty
from pun.typecheck import check_program


def typed(src):
    return check_program(parse_program(src))


def test_true_property_passes(load):
    outcome = check_property(load("arith_props.pun"), "add-is-commutative", RunConfig(seed=3))
    assert outcome == Passed(50)


def test_false_property_fails_with_replayable_counterexample(load):
    prog = load("sub_props.pun")
    outcome = check_property(prog, "sub-is-commutative", RunConfig(seed=3))
    assert isinstance(outcome, Failed)
    assert not free_vars(outcome.counterexample) - set(prog.globals)
    replayed = parse_term(pretty(outcome.counterexample))
    assert evaluate(replayed, globals_=prog.globals) == FALSE


def test_diverging_property_aborts():
    prog = typed("loop : integer -> boolean .\nloop n = loop n .\nproperty spins n . loop n .")
    outcome = check_property(prog, "spins", RunConfig(fuel=2000))
    assert isinstance(outcome, Aborted) and outcome.after_tests == 1
    assert outcome.reason.kind is EvalErrorKind.OUT_OF_FUEL


def test_runs_are_deterministic(load):
    prog = load("bst_props.pun")
    cfg = RunConfig(seed=42, tests_per_property=20)
    assert check_all(prog, cfg) == check_all(prog, cfg)


def test_instantiate_depends_only_on_seed_and_index(load):
    prog = load("arith_props.pun")
    prop = prog.property("add-is-commutative")
    cfg = RunConfig(seed=9)
    assert instantiate(prog, prop, cfg, 7) == instantiate(prog, prop, cfg, 7)
    assert rng_for(1, "p", 2).random() != rng_for(1, "p", 3).random()


def test_check_all_on_program_without_properties():
    assert check_all(typed("one : integer .\none = 1 .")) == []


def test_size_schedule_grows_to_max():
    cfg = RunConfig(tests_per_property=50, max_size=10)
    sizes = [cfg.size_for(i) for i in range(1, 51)]
    assert sizes == sorted(sizes)
    assert sizes[0] == 1 and sizes[-1] == 10


def test_config_rejects_nonpositive_counts():
    with pytest.raises(ValueError):
        RunConfig(tests_per_property=0)


class TestRender:
    def test_pass(self):
        assert render_outcome("p", Passed(3)) == "testing p: ... ok"

    def test_fail(self):
        term = parse_term(r"((\ x -> x + 2) 3) - 7 == 7 - ((\ x -> x + 2) 3)")
        text = render_outcome("sub-is-commutative", Failed(term, 1))
        assert text == (
            'testing sub-is-commutative: "failed with counter example :"\n'
            "  ((\\ x -> x + 2) 3) - 7 == 7 - ((\\ x -> x + 2) 3)\n"
            '"after 1 tests"'
        )

    def test_fail_after_several(self):
        text = render_outcome("p", Failed(parse_term("1 == 2"), 4))
        assert text.startswith('testing p: ..."failed')
        assert text.endswith('"after 4 tests"')

    def test_abort(self):
        prog = typed("loop : integer -> boolean .\nloop n = loop n .\nproperty spins n . loop n .")
        outcome = check_property(prog, "spins", RunConfig(fuel=100))
        assert render_outcome("spins", outcome) == "testing spins: aborted: out of fuel"
