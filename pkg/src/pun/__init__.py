"""pun: a small call-by-value functional language with built-in properties.

Property arguments are filled with random well-typed terms derived from the
argument types, so no hand-written generators are needed.
"""

from pun.evaluator import EvalError, evaluate
from pun.gengen import GenConfig, generate_term, new_context
from pun.parser import ParseError, parse_program, parse_term, parse_type
from pun.propcheck import RunConfig, check_all, check_property, render_outcome
from pun.syntax import pretty
from pun.typecheck import TypeCheckError, check_program, check_term, infer_term

__version__ = "0.1.0"

__all__ = [
    "EvalError", "GenConfig", "ParseError", "RunConfig", "TypeCheckError",
    "check_all", "check_program", "check_property", "check_term", "evaluate",
    "generate_term", "infer_term", "new_context", "parse_program", "parse_term",
    "parse_type", "pretty", "render_outcome",
]
