import pytest

from pun import corpus
from pun.evaluator import evaluate, run_deep
from pun.parser import parse_program, parse_term
from pun.propcheck import RunConfig, check_property
from pun.syntax import Definition, Program, Property, Signature
from pun.typecheck import check_program

ALL_FILES = sorted(
    str(p.relative_to(corpus.CORPUS_DIR)) for p in corpus.CORPUS_DIR.rglob("*.pun"))


def library(prog):
    return {d.name: d for d in prog.declarations if isinstance(d, (Signature, Definition))}


@pytest.mark.parametrize("name", ALL_FILES)
def test_every_file_parses(name):
    parse_program(corpus.source(name))


@pytest.mark.parametrize("name", [e.path for e in corpus.ENTRIES])
def test_entries_typecheck_and_list_every_property(load, name):
    typed = load(name)
    assert [p.name for p in typed.properties] == list(corpus.entry(name).expected)


def test_shared_library_is_in_sync(load):
    bst = library(load("bst.pun").program)
    props = library(load("bst_props.pun").program)
    assert props == bst


def test_mutant_changes_one_definition(load):
    entry = corpus.entry("mutants/insert_clobber.pun")
    original = load(entry.mutation_of).program
    mutant = load(entry.path).program
    assert [d.name for d in original.declarations] == [d.name for d in mutant.declarations]
    changed = [a.name for a, b in zip(original.declarations, mutant.declarations) if a != b]
    assert changed == ["insert"]
    assert original.signatures["insert"] == mutant.signatures["insert"]


def test_listing_typechecks_once_arity_is_fixed(load):
    fixed = corpus.source("listings/insert.pun").replace("insert k t", "insert k v t")
    listing = parse_program(fixed)
    lib = [d for d in load("bst.pun").program.declarations
           if not isinstance(d, Property) and d.name not in listing.signatures]
    typed = check_program(Program(tuple(lib) + listing.declarations))
    assert [p.name for p in typed.properties] == ["insert-valid", "find-post-present"]


def test_model_of_example_tree(load):
    globals_ = load("bst.pun").globals
    tree = "[node [node leaf 1 4 leaf] 2 8 [node leaf 3 1 [node leaf 4 10 leaf]]]"
    spine = "leaf"
    for k, v in reversed([(1, 4), (2, 8), (3, 1), (4, 10)]):
        spine = f"[node leaf ({k}, {v}) () {spine}]"
    assert evaluate(parse_term(f"model {tree}"), globals_=globals_) == parse_term(spine)
    assert evaluate(parse_term("model leaf"), globals_=globals_) == parse_term("leaf")


def test_insert_overwrites_existing_key(load):
    globals_ = load("bst.pun").globals
    result = evaluate(parse_term("insert 2 9 [node leaf 2 1 leaf]"), globals_=globals_)
    assert result == parse_term("[node leaf 2 9 leaf]")


def test_validify_produces_a_search_tree(load):
    globals_ = load("bst.pun").globals
    bad = "[node [node leaf 5 0 leaf] 1 0 leaf]"
    assert evaluate(parse_term(f"valid {bad}"), globals_=globals_) == parse_term("false")
    assert evaluate(parse_term(f"valid (validify {bad})"), globals_=globals_) == parse_term("true")


OUTCOME_CASES = [
    (e.path, name, expected)
    for e in corpus.ENTRIES for name, expected in e.expected.items() if expected != "either"
]


@pytest.mark.parametrize("path,prop,expected", OUTCOME_CASES)
def test_expected_outcomes(load, path, prop, expected):
    typed = load(path)
    for seed in (0, 1, 2):
        outcome = run_deep(check_property, typed, prop, RunConfig(seed=seed))
        assert type(outcome).__name__.lower() == expected, (seed, outcome)
