import pytest
from hypothesis import settings

from pun import corpus
from pun.parser import parse_program
from pun.typecheck import check_program

# generated programs vary a lot in evaluation cost; timing is not what these tests check
settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def load():
    """Parse and typecheck a corpus file, cached per session."""
    cache = {}

    def load(name):
        if name not in cache:
            cache[name] = check_program(parse_program(corpus.source(name)))
        return cache[name]

    return load


# acceptance criterion number -> (passed, detail), filled in by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
