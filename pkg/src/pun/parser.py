"""Lexer and recursive-descent parser for ``.pun`` source files.

Grammar::

    program ::= decl*
    decl    ::= ident ':' type '.'
              | ident ident* '=' term '.'
              | 'property' ident ident* '.' term '.'
    type    ::= btype ('->' type)?
    btype   ::= 'bst' atype atype | atype
    atype   ::= 'integer' | 'boolean' | 'unit' | '(' type ',' type ')' | '(' type ')'
    term    ::= lambda | let | if | case | rec | cmp
    lambda  ::= '\\' ident ('.' | '->') term
    cmp     ::= arith (('<=' | '<' | '>' | '==') arith)?
    arith   ::= app (('+' | '-') app)*
    app     ::= atom+
    atom    ::= int | 'true' | 'false' | '()' | ident | 'leaf'
              | '[' 'node' atom atom atom atom ']'
              | 'fst' '(' term ')' | 'snd' '(' term ')'
              | '(' term ',' term ')' | '(' term ')' | '(' '-' int ')'

Lines starting with ``--`` are comments.
"""

from __future__ import annotations

from dataclasses import dataclass

from pun.syntax import (
    BOOL, INT, INT64_MAX, INT64_MIN, LEAF, UNIT, UNIT_LIT, App, ArrowType,
    BinOp, BoolLit, BSTType, Case, Declaration, Definition, Fst, If, Lambda,
    Let, Node, NumLit, PairTerm, PairType, Pattern, PConst, PLeaf, PNode,
    PPair, Program, Property, PVar, Rec, Signature, Snd, Term, Type, Var,
    pattern_vars,
)

KEYWORDS = frozenset({
    "property", "let", "in", "if", "then", "else", "case", "of", "rec",
    "fst", "snd", "leaf", "node", "true", "false", "integer", "boolean",
    "unit", "bst",
})

# longest first
OPERATORS = ("<=", "==", "->", "+", "-", "<", ">", "=", ".", ",", "(", ")",
             "[", "]", ";", ":", "\\")


@dataclass(frozen=True)
class SourcePos:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Token:
    kind: str  # "kw", "id", "int", "op" or "eof"
    text: str
    pos: SourcePos

    def __str__(self) -> str:
        if self.kind == "eof":
            return "end of input"
        return repr(self.text)


class ParseError(Exception):
    def __init__(self, pos: SourcePos, expected: str, found: str) -> None:
        super().__init__(f"parse error at {pos}: expected {expected}, found {found}")
        self.pos = pos
        self.expected = expected
        self.found = found


def _is_ident_char(c: str) -> bool:
    return c.isalnum() or c == "_"


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, i, n = 1, 1, 0, len(source)

    def advance(k: int) -> None:
        nonlocal i, col
        i += k
        col += k

    while i < n:
        c = source[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c.isspace():
            advance(1)
            continue
        if source.startswith("--", i) and source[:i].rsplit("\n", 1)[-1].strip() == "":
            while i < n and source[i] != "\n":
                advance(1)
            continue
        pos = SourcePos(line, col)
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and (source[j].isalpha() or source[j] == "_"):
                raise ParseError(pos, "a number", repr(source[i:j + 1]))
            tokens.append(Token("int", source[i:j], pos))
            advance(j - i)
            continue
        if c.isalpha():
            j = i
            while j < n:
                if _is_ident_char(source[j]):
                    j += 1
                elif source[j] == "-" and j + 1 < n and _is_ident_char(source[j + 1]):
                    j += 1
                else:
                    break
            text = source[i:j]
            tokens.append(Token("kw" if text in KEYWORDS else "id", text, pos))
            advance(j - i)
            continue
        for op in OPERATORS:
            if source.startswith(op, i):
                tokens.append(Token("op", op, pos))
                advance(len(op))
                break
        else:
            raise ParseError(pos, "a token", repr(c))
    tokens.append(Token("eof", "", SourcePos(line, col)))
    return tokens


class Parser:
    def __init__(self, source: str) -> None:
        self.tokens = tokenize(source)
        self.i = 0

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "kw") and self.tok.text == text

    def next(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def fail(self, expected: str) -> ParseError:
        return ParseError(self.tok.pos, expected, str(self.tok))

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.fail(repr(text))
        return self.next()

    def ident(self) -> str:
        if self.tok.kind != "id":
            raise self.fail("an identifier")
        return self.next().text

    # -- declarations

    def program(self) -> Program:
        decls: list[Declaration] = []
        positions: list[SourcePos] = []
        while self.tok.kind != "eof":
            positions.append(self.tok.pos)
            decls.append(self.declaration())
        program = Program(tuple(decls))
        check_declarations(program, positions)
        return program

    def declaration(self) -> Declaration:
        if self.at("property"):
            self.next()
            name = self.ident()
            args = []
            while self.tok.kind == "id":
                args.append(self.ident())
            self.expect(".")
            body = self.term()
            self.expect(".")
            return Property(name, tuple(args), body)
        name = self.ident()
        if self.at(":"):
            self.next()
            ty = self.type()
            self.expect(".")
            return Signature(name, ty)
        params = []
        while self.tok.kind == "id":
            params.append(self.ident())
        if not self.at("="):
            raise self.fail("':' or '='")
        self.next()
        body = self.term()
        self.expect(".")
        return Definition(name, tuple(params), body)

    # -- types

    def type(self) -> Type:
        ty = self.btype()
        if self.at("->"):
            self.next()
            return ArrowType(ty, self.type())
        return ty

    def btype(self) -> Type:
        if self.at("bst"):
            self.next()
            return BSTType(self.atype(), self.atype())
        return self.atype()

    def atype(self) -> Type:
        simple = {"integer": INT, "boolean": BOOL, "unit": UNIT}
        if self.tok.kind == "kw" and self.tok.text in simple:
            return simple[self.next().text]
        if self.at("("):
            self.next()
            ty = self.type()
            if self.at(","):
                self.next()
                ty = PairType(ty, self.type())
            self.expect(")")
            return ty
        raise self.fail("a type")

    # -- terms

    def term(self) -> Term:
        if self.at("\\"):
            self.next()
            param = self.ident()
            if not (self.at(".") or self.at("->")):
                raise self.fail("'.' or '->'")
            self.next()
            return Lambda(param, self.term())
        if self.at("let"):
            self.next()
            name = self.ident()
            self.expect("=")
            bound = self.term()
            self.expect("in")
            return Let(name, bound, self.term())
        if self.at("if"):
            self.next()
            cond = self.term()
            self.expect("then")
            then = self.term()
            self.expect("else")
            return If(cond, then, self.term())
        if self.at("rec"):
            self.next()
            name = self.ident()
            self.expect(".")
            return Rec(name, self.term())
        if self.at("case"):
            self.next()
            scrutinee = self.term()
            self.expect("of")
            self.expect(";")
            self.expect("leaf")
            self.expect("->")
            leaf_branch = self.term()
            self.expect(";")
            pattern = self.pattern()
            self.expect("->")
            return Case(scrutinee, leaf_branch, pattern, self.term())
        return self.cmp()

    def cmp(self) -> Term:
        lhs = self.arith()
        if self.tok.kind == "op" and self.tok.text in ("<=", "<", ">", "=="):
            op = self.next().text
            return BinOp(op, lhs, self.arith())
        return lhs

    def arith(self) -> Term:
        lhs = self.app()
        while self.at("+") or self.at("-"):
            op = self.next().text
            lhs = BinOp(op, lhs, self.app())
        return lhs

    def app(self) -> Term:
        term = self.atom()
        while self.starts_atom():
            term = App(term, self.atom())
        return term

    def starts_atom(self) -> bool:
        tok = self.tok
        if tok.kind in ("int", "id"):
            return True
        if tok.kind == "kw":
            return tok.text in ("true", "false", "leaf", "fst", "snd")
        return tok.kind == "op" and tok.text in ("(", "[")

    def atom(self) -> Term:
        tok = self.tok
        if tok.kind == "int":
            self.next()
            return NumLit(self.literal(tok.text, tok.pos))
        if tok.kind == "id":
            return Var(self.next().text)
        if tok.kind == "kw":
            if tok.text in ("true", "false"):
                self.next()
                return BoolLit(tok.text == "true")
            if tok.text == "leaf":
                self.next()
                return LEAF
            if tok.text in ("fst", "snd"):
                self.next()
                self.expect("(")
                arg = self.term()
                self.expect(")")
                return Fst(arg) if tok.text == "fst" else Snd(arg)
        if self.at("["):
            self.next()
            self.expect("node")
            parts = [self.atom() for _ in range(4)]
            self.expect("]")
            return Node(*parts)
        if self.at("("):
            self.next()
            if self.at(")"):
                self.next()
                return UNIT_LIT
            if self.at("-") and self.peek().kind == "int" and self.peek(2).text == ")":
                self.next()
                lit = self.next()
                self.next()
                return NumLit(self.literal("-" + lit.text, lit.pos))
            inner = self.term()
            if self.at(","):
                self.next()
                inner = PairTerm(inner, self.term())
            self.expect(")")
            return inner
        raise self.fail("a term")

    @staticmethod
    def literal(text: str, pos: SourcePos) -> int:
        value = int(text)
        if not INT64_MIN <= value <= INT64_MAX:
            raise ParseError(pos, "a 64-bit integer literal", text)
        return value

    # -- patterns

    def pattern(self) -> Pattern:
        start = self.tok.pos
        p = self.subpattern()
        names = pattern_vars(p)
        if len(names) != len(set(names)):
            raise ParseError(start, "a pattern with distinct variables", " ".join(names))
        return p

    def subpattern(self) -> Pattern:
        tok = self.tok
        if tok.kind == "id":
            return PVar(self.next().text)
        if tok.kind == "int":
            self.next()
            return PConst(NumLit(self.literal(tok.text, tok.pos)))
        if self.at("true") or self.at("false"):
            self.next()
            return PConst(BoolLit(tok.text == "true"))
        if self.at("leaf"):
            self.next()
            return PLeaf()
        if self.at("["):
            self.next()
            self.expect("node")
            parts = [self.subpattern() for _ in range(4)]
            self.expect("]")
            return PNode(*parts)
        if self.at("("):
            self.next()
            if self.at(")"):
                self.next()
                return PConst(UNIT_LIT)
            if self.at("-") and self.peek().kind == "int":
                self.next()
                lit = self.next()
                self.expect(")")
                return PConst(NumLit(self.literal("-" + lit.text, lit.pos)))
            p = self.subpattern()
            if self.at(","):
                self.next()
                p = PPair(p, self.subpattern())
            self.expect(")")
            return p
        raise self.fail("a pattern")


class DeclarationError(ParseError):
    """A structurally invalid program: missing signature or duplicate name."""


def check_declarations(program: Program, positions: list[SourcePos]) -> None:
    """Every definition follows its signature; names are unique."""
    signed: set[str] = set()
    defined: set[str] = set()
    properties: set[str] = set()
    for d, pos in zip(program.declarations, positions):
        if isinstance(d, Signature):
            if d.name in signed:
                raise DeclarationError(pos, "a fresh name", f"duplicate signature {d.name!r}")
            signed.add(d.name)
        elif isinstance(d, Definition):
            if d.name not in signed:
                raise DeclarationError(
                    pos, f"a signature for {d.name!r}", "a definition without one")
            if d.name in defined:
                raise DeclarationError(pos, "a fresh name", f"duplicate definition {d.name!r}")
            defined.add(d.name)
        else:
            if d.name in properties:
                raise DeclarationError(
                    pos, "a fresh property name", f"duplicate property {d.name!r}")
            properties.add(d.name)
    for d, pos in zip(program.declarations, positions):
        if isinstance(d, Signature) and d.name not in defined:
            raise DeclarationError(pos, f"a definition for {d.name!r}", "a signature without one")


def parse_program(source: str) -> Program:
    return Parser(source).program()


def parse_term(source: str) -> Term:
    parser = Parser(source)
    term = parser.term()
    if parser.tok.kind != "eof":
        raise parser.fail("end of input")
    return term


def parse_type(source: str) -> Type:
    parser = Parser(source)
    ty = parser.type()
    if parser.tok.kind != "eof":
        raise parser.fail("end of input")
    return ty


def parse_file(path: str, encoding: str = "utf-8") -> Program:
    with open(path, encoding=encoding) as f:
        return parse_program(f.read())

