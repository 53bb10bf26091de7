"""Finite logical matrices for the discursive language.

A matrix carries truth values ``1..size``, a designated subset, a unary
negation table and three binary tables (disjunction, discussive
conjunction, discussive implication).  Binary tables are indexed row
first by the LEFT argument: ``table[i-1][j-1]`` is the value of
``op(i, j)``.

A scheme holds on a matrix when every assignment of truth values to its
leaves (metavariables and atoms alike) yields a designated value.
Detachment is sound on a matrix when a designated antecedent and a
designated implication force a designated consequent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .axioms import AxiomSystem
from .formula import (
    Atom, Box, DConj, Dia, DImp, Formula, MetaVar, Neg, Or,
    is_discursive, leaf_names,
)


class MatrixError(Exception):
    """A matrix component is malformed."""


class MatrixFormatError(MatrixError):
    """A matrix file cannot be parsed; carries a 1-based line number."""

    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


class EvaluationError(MatrixError):
    """A formula cannot be evaluated against a matrix."""


class VariableLimitError(MatrixError):
    """A scheme quantifies over more leaves than the configured limit."""


Table = tuple[tuple[int, ...], ...]


def _check_value(value: int, size: int, what: str) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= size:
        raise MatrixError(f"{what} must be an integer in 1..{size}, got {value!r}")


def _freeze_table(rows: Iterable[Iterable[int]], size: int, name: str) -> Table:
    table = tuple(tuple(row) for row in rows)
    if len(table) != size or any(len(row) != size for row in table):
        raise MatrixError(f"{name} table must be {size}x{size}")
    for i, row in enumerate(table):
        for j, value in enumerate(row):
            _check_value(value, size, f"{name}({i + 1}, {j + 1})")
    return table


@dataclass(frozen=True)
class Matrix:
    """An interpretation of ``~``, ``|``, ``^`` and ``=>`` over ``1..size``."""

    matrix_id: str
    size: int
    designated: frozenset[int]
    neg: tuple[int, ...]
    or_table: Table
    dand_table: Table
    dimp_table: Table

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise MatrixError(f"size must be a positive integer, got {self.size!r}")
        if not self.designated:
            raise MatrixError("designated set must be nonempty")
        for value in self.designated:
            _check_value(value, self.size, "designated value")
        if len(self.neg) != self.size:
            raise MatrixError(f"neg table must list {self.size} values")
        for i, value in enumerate(self.neg):
            _check_value(value, self.size, f"neg({i + 1})")
        _freeze_table(self.or_table, self.size, "or")
        _freeze_table(self.dand_table, self.size, "dand")
        _freeze_table(self.dimp_table, self.size, "dimp")

    @classmethod
    def build(cls, matrix_id: str, size: int, designated: Iterable[int],
              neg: Iterable[int], or_table: Iterable[Iterable[int]],
              dand_table: Iterable[Iterable[int]],
              dimp_table: Iterable[Iterable[int]]) -> "Matrix":
        """Construct from plain lists, freezing everything."""
        return cls(
            matrix_id=matrix_id,
            size=size,
            designated=frozenset(designated),
            neg=tuple(neg),
            or_table=tuple(tuple(row) for row in or_table),
            dand_table=tuple(tuple(row) for row in dand_table),
            dimp_table=tuple(tuple(row) for row in dimp_table),
        )

    @property
    def values(self) -> range:
        return range(1, self.size + 1)

    def neg_of(self, a: int) -> int:
        return self.neg[a - 1]

    def or_of(self, a: int, b: int) -> int:
        return self.or_table[a - 1][b - 1]

    def dand_of(self, a: int, b: int) -> int:
        return self.dand_table[a - 1][b - 1]

    def dimp_of(self, a: int, b: int) -> int:
        return self.dimp_table[a - 1][b - 1]


def eval_formula(matrix: Matrix, formula: Formula,
                 assignment: Mapping[str, int]) -> int:
    """Value of ``formula`` under an assignment of values to its leaves.

    Metavariables and atoms are both looked up by name, so schemes can
    be evaluated directly without instantiating them first.
    """
    if isinstance(formula, (Atom, MetaVar)):
        try:
            value = assignment[formula.name]
        except KeyError:
            raise EvaluationError(
                f"assignment does not cover {formula.name!r}") from None
        _check_value(value, matrix.size, f"assignment for {formula.name!r}")
        return value
    if isinstance(formula, Neg):
        return matrix.neg[eval_formula(matrix, formula.child, assignment) - 1]
    if isinstance(formula, (Dia, Box)):
        raise EvaluationError("matrices interpret the discursive language only")
    left = eval_formula(matrix, formula.left, assignment)
    right = eval_formula(matrix, formula.right, assignment)
    if isinstance(formula, Or):
        return matrix.or_table[left - 1][right - 1]
    if isinstance(formula, DConj):
        return matrix.dand_table[left - 1][right - 1]
    if isinstance(formula, DImp):
        return matrix.dimp_table[left - 1][right - 1]
    raise EvaluationError(f"matrices do not interpret {type(formula).__name__}")


DEFAULT_VAR_LIMIT = 6


@dataclass(frozen=True)
class SchemeResult:
    """Outcome of checking one scheme on one matrix.

    ``witness`` and ``value`` are populated on failure with the first
    refuting assignment in ascending enumeration order (leaves ordered
    by first occurrence, values counted up from 1).
    """

    passed: bool
    witness: tuple[tuple[str, int], ...] | None = None
    value: int | None = None

    @property
    def witness_dict(self) -> dict[str, int] | None:
        return None if self.witness is None else dict(self.witness)


def check_scheme(matrix: Matrix, scheme: Formula,
                 var_limit: int = DEFAULT_VAR_LIMIT) -> SchemeResult:
    """Does every assignment make ``scheme`` designated?"""
    if not is_discursive(scheme):
        raise EvaluationError("matrices interpret the discursive language only")
    names = leaf_names(scheme)
    if len(names) > var_limit:
        raise VariableLimitError(
            f"scheme has {len(names)} distinct leaves, limit is {var_limit}")
    designated = matrix.designated
    for values in itertools.product(matrix.values, repeat=len(names)):
        assignment = dict(zip(names, values))
        value = eval_formula(matrix, scheme, assignment)
        if value not in designated:
            return SchemeResult(False, tuple(zip(names, values)), value)
    return SchemeResult(True)


@dataclass(frozen=True)
class MpResult:
    """Soundness of detachment for ``=>`` on a matrix.

    On failure, ``antecedent`` is a designated value and ``consequent``
    an undesignated one with ``dimp(antecedent, consequent)`` designated.
    """

    passed: bool
    antecedent: int | None = None
    consequent: int | None = None


def check_mp(matrix: Matrix) -> MpResult:
    designated = matrix.designated
    for a in sorted(designated):
        row = matrix.dimp_table[a - 1]
        for b in matrix.values:
            if row[b - 1] in designated and b not in designated:
                return MpResult(False, a, b)
    return MpResult(True)


@dataclass(frozen=True)
class ValidationReport:
    """Per-axiom results for one matrix against one axiom system."""

    matrix_id: str
    system_id: str
    axiom_results: tuple[tuple[str, SchemeResult], ...]
    mp: MpResult

    @property
    def refuted(self) -> tuple[str, ...]:
        return tuple(axiom_id for axiom_id, result in self.axiom_results
                     if not result.passed)

    @property
    def validates(self) -> bool:
        return self.mp.passed and not self.refuted

    def result_for(self, axiom_id: str) -> SchemeResult:
        for candidate, result in self.axiom_results:
            if candidate == axiom_id:
                return result
        raise KeyError(axiom_id)


def check_system(matrix: Matrix, system: AxiomSystem,
                 var_limit: int = DEFAULT_VAR_LIMIT) -> ValidationReport:
    """Check every axiom of ``system`` plus detachment on ``matrix``."""
    results = tuple(
        (axiom_id, check_scheme(matrix, scheme, var_limit))
        for axiom_id, scheme in system.axioms)
    return ValidationReport(matrix.matrix_id, system.system_id, results,
                            check_mp(matrix))


# ---------------------------------------------------------------------------
# Matrix files
# ---------------------------------------------------------------------------
#
#     # optional comments
#     size 3
#     designated 1 3
#     neg 3 3 2
#     or
#     3 1 3
#     1 2 3
#     3 3 3
#     dand
#     ...
#     dimp
#     ...
#
# The writer emits one table row per line as above; the reader only
# cares about token order, so inline rows are accepted too.

_SECTION_KEYWORDS = ("or", "dand", "dimp")


def _scan_tokens(text: str) -> list[tuple[str, int]]:
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        for word in body.split():
            tokens.append((word, lineno))
    return tokens


class _MatrixReader:
    def __init__(self, text: str):
        self.tokens = _scan_tokens(text)
        self.i = 0

    def at_end(self) -> bool:
        return self.i >= len(self.tokens)

    def peek(self) -> tuple[str, int]:
        if self.at_end():
            last_line = self.tokens[-1][1] if self.tokens else 1
            raise MatrixFormatError("unexpected end of file", last_line)
        return self.tokens[self.i]

    def take_keyword(self, *expected: str) -> str:
        word, line = self.peek()
        if word not in expected:
            raise MatrixFormatError(
                f"expected {' or '.join(expected)!s}, got {word!r}", line)
        self.i += 1
        return word

    def take_int(self, what: str) -> int:
        word, line = self.peek()
        try:
            value = int(word)
        except ValueError:
            raise MatrixFormatError(f"expected {what}, got {word!r}", line) from None
        self.i += 1
        return value

    def take_ints(self, count: int, what: str) -> list[int]:
        return [self.take_int(what) for _ in range(count)]

    def next_is_int(self) -> bool:
        if self.at_end():
            return False
        word, _ = self.peek()
        try:
            int(word)
        except ValueError:
            return False
        return True


def parse_matrix(text: str, matrix_id: str = "matrix") -> Matrix:
    """Parse the matrix file format; raises :class:`MatrixFormatError`."""
    reader = _MatrixReader(text)
    reader.take_keyword("size")
    size = reader.take_int("the matrix size")

    reader.take_keyword("designated")
    designated = []
    while reader.next_is_int():
        designated.append(reader.take_int("a designated value"))
    if not designated:
        _, line = reader.peek() if not reader.at_end() else ("", 1)
        raise MatrixFormatError("designated set must list at least one value", line)

    reader.take_keyword("neg")
    neg = reader.take_ints(size, "a neg table entry")

    tables: dict[str, list[list[int]]] = {}
    while not reader.at_end():
        keyword = reader.take_keyword(*_SECTION_KEYWORDS)
        if keyword in tables:
            _, line = reader.tokens[reader.i - 1]
            raise MatrixFormatError(f"duplicate {keyword} table", line)
        tables[keyword] = [reader.take_ints(size, f"a {keyword} table entry")
                           for _ in range(size)]
    missing = [k for k in _SECTION_KEYWORDS if k not in tables]
    if missing:
        last_line = reader.tokens[-1][1] if reader.tokens else 1
        raise MatrixFormatError(f"missing table(s): {', '.join(missing)}", last_line)

    try:
        return Matrix.build(matrix_id, size, designated, neg,
                            tables["or"], tables["dand"], tables["dimp"])
    except MatrixError as exc:
        raise MatrixFormatError(str(exc), 1) from exc


def render_matrix(matrix: Matrix) -> str:
    lines = [f"size {matrix.size}",
             "designated " + " ".join(str(v) for v in sorted(matrix.designated)),
             "neg " + " ".join(str(v) for v in matrix.neg)]
    for keyword, table in (("or", matrix.or_table),
                           ("dand", matrix.dand_table),
                           ("dimp", matrix.dimp_table)):
        lines.append(keyword)
        for row in table:
            lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def read_matrix(path: str | Path, matrix_id: str | None = None) -> Matrix:
    path = Path(path)
    return parse_matrix(path.read_text(encoding="utf-8"),
                        matrix_id if matrix_id is not None else path.stem)


def write_matrix(matrix: Matrix, path: str | Path) -> None:
    Path(path).write_text(render_matrix(matrix), encoding="utf-8")
