"""Bundled ``.pun`` programs and the outcome each property is expected to have."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

CORPUS_DIR = Path(__file__).resolve().parent


def path(name: str) -> Path:
    """Absolute path of a corpus file, e.g. ``path("mutants/insert_clobber.pun")``."""
    return CORPUS_DIR / name


def source(name: str) -> str:
    return path(name).read_text(encoding="utf-8")


@dataclass(frozen=True)
class CorpusEntry:
    path: str
    # property name -> "passed", "failed" or "either"
    expected: dict[str, str] = field(default_factory=dict)
    mutation_of: Optional[str] = None


ENTRIES = (
    CorpusEntry("arith_props.pun", {
        "add-is-commutative": "passed",
        "plus-zero-identity": "passed",
    }),
    CorpusEntry("sub_props.pun", {"sub-is-commutative": "failed"}),
    CorpusEntry("bst.pun", {
        "leaf-is-valid": "passed",
        "validify-valid": "passed",
        "union-valid": "passed",
        "find-absent": "passed",
        "model-sorted": "passed",
        "model-of-leaf": "passed",
    }),
    CorpusEntry("bst_props.pun", {
        "insert-valid-guarded": "passed",
        "insert-valid": "passed",
        "find-post-present": "passed",
        "insert-insert": "passed",
        "insert-model": "passed",
    }),
    CorpusEntry(
        "mutants/insert_clobber.pun",
        {
            "insert-valid-guarded": "passed",
            "insert-valid": "passed",
            # the clobbering insert still finds the key it just stored
            "find-post-present": "passed",
            "insert-insert": "failed",
            "insert-model": "failed",
        },
        mutation_of="bst_props.pun",
    ),
)


def entry(name: str) -> CorpusEntry:
    for e in ENTRIES:
        if e.path == name:
            return e
    raise KeyError(name)
