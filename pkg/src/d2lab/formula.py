"""Formula language: AST nodes, parser, printer, and scheme utilities.

Two sublanguages share one node set.  Discursive formulas are built from
atoms, metavariables and the connectives ``~`` (negation), ``|``
(disjunction), ``=>`` (discussive implication) and ``^`` (discussive
conjunction).  Modal formulas are built from atoms and ``~``, ``|``,
``&``, ``->``, ``<->``, ``<>`` (possibly) and ``[]`` (necessarily);
metavariables are not part of the modal language.

Concrete syntax: atoms are lowercase identifiers (``p``, ``q1``),
metavariables are single uppercase letters (``A``, ``B``, ``C``).
Precedence, tightest first:

    unary (``~``, ``<>``, ``[]``)  >  ``^``/``&``  >  ``|``  >
    ``=>``/``->`` (right associative)  >  ``<->``

``|``, ``^``, ``&`` and ``<->`` associate to the left.  The printer
parenthesizes every binary operand, matching the way axiom tables are
conventionally typeset, so its output re-parses identically under any
precedence convention.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union


class FormulaError(Exception):
    """Base class for formula-language errors."""


class ParseError(FormulaError):
    """Syntax error with a character offset into the input."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at column {position + 1}: {text!r}")


class WrongLanguageError(ParseError):
    """A connective of the other sublanguage appeared in the input."""


class SubstitutionError(FormulaError):
    """A substitution does not cover the scheme's metavariables."""


class SchemeError(FormulaError):
    """A scheme violates an arity or groundness requirement."""


# ---------------------------------------------------------------------------
# AST nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class MetaVar:
    name: str


@dataclass(frozen=True)
class Neg:
    child: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class DImp:
    """Discussive implication (``=>``)."""

    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class DConj:
    """Discussive conjunction (``^``)."""

    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Dia:
    child: "Formula"


@dataclass(frozen=True)
class Box:
    child: "Formula"


Formula = Union[Atom, MetaVar, Neg, Or, DImp, DConj, And, Imp, Iff, Dia, Box]

_UNARY = (Neg, Dia, Box)
_BINARY = (Or, DImp, DConj, And, Imp, Iff)
_DISCURSIVE_NODES = (Atom, MetaVar, Neg, Or, DImp, DConj)
_MODAL_NODES = (Atom, Neg, Or, And, Imp, Iff, Dia, Box)


def subformulas(f: Formula) -> Iterator[Formula]:
    """All subformulas of ``f``, preorder, left to right."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, _UNARY):
            stack.append(node.child)
        elif isinstance(node, _BINARY):
            stack.append(node.right)
            stack.append(node.left)


def leaf_names(f: Formula) -> list[str]:
    """Atom and metavariable names in first-occurrence order."""
    seen: list[str] = []
    for node in subformulas(f):
        if isinstance(node, (Atom, MetaVar)) and node.name not in seen:
            seen.append(node.name)
    return seen


def metavariables(f: Formula) -> list[str]:
    """Metavariable names in first-occurrence order."""
    seen: list[str] = []
    for node in subformulas(f):
        if isinstance(node, MetaVar) and node.name not in seen:
            seen.append(node.name)
    return seen


def atom_names(f: Formula) -> list[str]:
    """Atom names in first-occurrence order."""
    seen: list[str] = []
    for node in subformulas(f):
        if isinstance(node, Atom) and node.name not in seen:
            seen.append(node.name)
    return seen


def is_ground(f: Formula) -> bool:
    return not any(isinstance(n, MetaVar) for n in subformulas(f))


def is_discursive(f: Formula) -> bool:
    return all(isinstance(n, _DISCURSIVE_NODES) for n in subformulas(f))


def is_modal(f: Formula) -> bool:
    return all(isinstance(n, _MODAL_NODES) for n in subformulas(f))


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""\s+
      | [A-Za-z][A-Za-z0-9_]*
      | <->|<>|->|=>|\[\]
      | [~|^&()]
    """,
    re.VERBOSE,
)

_MODAL_ONLY_OPS = {"&", "->", "<->", "<>", "[]"}
_DISCURSIVE_ONLY_OPS = {"=>", "^"}

_ATOM_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
_METAVAR_RE = re.compile(r"[A-Z]\Z")


def _tokenize(text: str, language: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        lexeme = m.group()
        if not lexeme.isspace():
            if lexeme[0].isalpha():
                if _ATOM_RE.match(lexeme):
                    kind = "atom"
                elif _METAVAR_RE.match(lexeme):
                    if language == "modal":
                        raise WrongLanguageError(
                            f"metavariable {lexeme!r} is not part of the modal language",
                            text, pos)
                    kind = "metavar"
                else:
                    raise ParseError(
                        f"bad identifier {lexeme!r}: expected a lowercase atom "
                        "or a single uppercase metavariable", text, pos)
            else:
                kind = "op"
                if language == "discursive" and lexeme in _MODAL_ONLY_OPS:
                    raise WrongLanguageError(
                        f"modal connective {lexeme!r} is not part of the "
                        "discursive language", text, pos)
                if language == "modal" and lexeme in _DISCURSIVE_ONLY_OPS:
                    raise WrongLanguageError(
                        f"discursive connective {lexeme!r} is not part of the "
                        "modal language", text, pos)
            tokens.append((kind, lexeme, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, language: str):
        self.text = text
        self.language = language
        self.tokens = _tokenize(text, language)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str) -> ParseError:
        _, lexeme, pos = self.peek()
        found = repr(lexeme) if lexeme else "end of input"
        return ParseError(f"{message}, found {found}", self.text, pos)

    def parse(self) -> Formula:
        f = self.parse_iff() if self.language == "modal" else self.parse_imp()
        if self.peek()[0] != "end":
            raise self.error("expected an operator or end of input")
        return f

    def parse_iff(self) -> Formula:
        f = self.parse_imp()
        while self.peek()[1] == "<->":
            self.advance()
            f = Iff(f, self.parse_imp())
        return f

    def parse_imp(self) -> Formula:
        arrow = "->" if self.language == "modal" else "=>"
        node = Imp if self.language == "modal" else DImp
        f = self.parse_or()
        if self.peek()[1] == arrow:
            self.advance()
            return node(f, self.parse_imp())  # right associative
        return f

    def parse_or(self) -> Formula:
        f = self.parse_conj()
        while self.peek()[1] == "|":
            self.advance()
            f = Or(f, self.parse_conj())
        return f

    def parse_conj(self) -> Formula:
        wedge = "&" if self.language == "modal" else "^"
        node = And if self.language == "modal" else DConj
        f = self.parse_unary()
        while self.peek()[1] == wedge:
            self.advance()
            f = node(f, self.parse_unary())
        return f

    def parse_unary(self) -> Formula:
        kind, lexeme, _ = self.peek()
        if lexeme == "~":
            self.advance()
            return Neg(self.parse_unary())
        if lexeme == "<>":
            self.advance()
            return Dia(self.parse_unary())
        if lexeme == "[]":
            self.advance()
            return Box(self.parse_unary())
        if lexeme == "(":
            self.advance()
            f = self.parse_iff() if self.language == "modal" else self.parse_imp()
            if self.peek()[1] != ")":
                raise self.error("expected ')'")
            self.advance()
            return f
        if kind == "atom":
            self.advance()
            return Atom(lexeme)
        if kind == "metavar":
            self.advance()
            return MetaVar(lexeme)
        raise self.error("expected a formula")


def parse(text: str, language: str = "discursive") -> Formula:
    """Parse ``text`` as a discursive or modal formula.

    Raises :class:`ParseError` (with a character offset) on malformed
    input, and :class:`WrongLanguageError` when a connective of the
    other sublanguage appears.
    """
    if language not in ("discursive", "modal"):
        raise ValueError(f"unknown language {language!r}")
    return _Parser(text, language).parse()


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

_UNARY_SYMBOL = {Neg: "~", Dia: "<>", Box: "[]"}
_BINARY_SYMBOL = {Or: "|", DImp: "=>", DConj: "^", And: "&", Imp: "->", Iff: "<->"}


def _operand(f: Formula) -> str:
    text = render(f)
    return f"({text})" if isinstance(f, _BINARY) else text


def render(f: Formula) -> str:
    """Pretty-print a formula; ``parse(render(f))`` returns ``f``."""
    if isinstance(f, (Atom, MetaVar)):
        return f.name
    if isinstance(f, _UNARY):
        return _UNARY_SYMBOL[type(f)] + _operand(f.child)
    if isinstance(f, _BINARY):
        return f"{_operand(f.left)} {_BINARY_SYMBOL[type(f)]} {_operand(f.right)}"
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# Schemes and substitution
# ---------------------------------------------------------------------------

CANONICAL_ATOMS = ("p", "q", "r")


def substitute(scheme: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Replace each metavariable by its image under ``mapping``.

    Images must be ground; the language has no binders, so replacement
    is purely structural.
    """
    for name, image in mapping.items():
        if not is_ground(image):
            raise SubstitutionError(
                f"substitution image for {name} contains metavariables")

    def walk(node: Formula) -> Formula:
        if isinstance(node, MetaVar):
            try:
                return mapping[node.name]
            except KeyError:
                raise SubstitutionError(
                    f"substitution does not cover metavariable {node.name}") from None
        if isinstance(node, Atom):
            return node
        if isinstance(node, _UNARY):
            return type(node)(walk(node.child))
        return type(node)(walk(node.left), walk(node.right))

    return walk(scheme)


def canonical_instance(scheme: Formula) -> Formula:
    """Instantiate a scheme with fresh atoms, first occurrence first.

    Metavariables are mapped to ``p``, ``q``, ``r`` in the order they
    first appear; ground input is returned unchanged.  Schemes with
    more than three metavariables are rejected.
    """
    names = metavariables(scheme)
    if not names:
        return scheme
    if len(names) > len(CANONICAL_ATOMS):
        raise SchemeError(
            f"scheme has {len(names)} metavariables; at most "
            f"{len(CANONICAL_ATOMS)} are supported")
    mapping = {name: Atom(fresh) for name, fresh in zip(names, CANONICAL_ATOMS)}
    return substitute(scheme, mapping)
