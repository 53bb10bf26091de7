"""Independent matrix evaluator used to cross-check the primary one.

Deliberately different machinery from :mod:`d2lab.matrix`: formulas are
flattened to postfix and run on a stack machine, tables are re-indexed
into dictionaries, leaves are enumerated in sorted name order rather
than first-occurrence order, and scheme checks collect every
counterexample instead of stopping at the first.  The two evaluators
must agree on pass/fail for every scheme, and the primary witness must
appear among the oracle's counterexamples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .formula import (
    Atom, DConj, DImp, Formula, MetaVar, Neg, Or, leaf_names,
)
from .matrix import EvaluationError, Matrix, VariableLimitError


def _postfix(formula: Formula) -> list[tuple]:
    """Flatten to postfix instructions for the stack machine."""
    program: list[tuple] = []
    todo: list[tuple[Formula, bool]] = [(formula, False)]
    while todo:
        node, expanded = todo.pop()
        if isinstance(node, (Atom, MetaVar)):
            program.append(("leaf", node.name))
        elif expanded:
            if isinstance(node, Neg):
                program.append(("neg",))
            elif isinstance(node, Or):
                program.append(("or",))
            elif isinstance(node, DConj):
                program.append(("dand",))
            elif isinstance(node, DImp):
                program.append(("dimp",))
            else:
                raise EvaluationError(
                    f"oracle handles the discursive language only, "
                    f"got {type(node).__name__}")
        else:
            todo.append((node, True))
            if isinstance(node, Neg):
                todo.append((node.child, False))
            elif isinstance(node, (Or, DConj, DImp)):
                todo.append((node.right, False))
                todo.append((node.left, False))
            else:
                raise EvaluationError(
                    f"oracle handles the discursive language only, "
                    f"got {type(node).__name__}")
    return program


def _dict_tables(matrix: Matrix) -> dict:
    neg = {a: matrix.neg[a - 1] for a in matrix.values}
    binop = {}
    for name, table in (("or", matrix.or_table), ("dand", matrix.dand_table),
                        ("dimp", matrix.dimp_table)):
        binop[name] = {(a, b): table[a - 1][b - 1]
                       for a in matrix.values for b in matrix.values}
    return {"neg": neg, **binop}


def oracle_eval(matrix: Matrix, formula: Formula,
                assignment: dict[str, int]) -> int:
    """Stack-machine evaluation; same contract as the primary evaluator."""
    tables = _dict_tables(matrix)
    return _run(_postfix(formula), tables, assignment)


def _run(program: list[tuple], tables: dict, assignment: dict[str, int]) -> int:
    stack: list[int] = []
    for instr in program:
        if instr[0] == "leaf":
            stack.append(assignment[instr[1]])
        elif instr[0] == "neg":
            stack.append(tables["neg"][stack.pop()])
        else:
            b = stack.pop()
            a = stack.pop()
            stack.append(tables[instr[0]][(a, b)])
    (result,) = stack
    return result


@dataclass(frozen=True)
class OracleSchemeReport:
    """All refuting assignments for one scheme, sorted-name leaf order."""

    passed: bool
    counterexamples: tuple[tuple[tuple[tuple[str, int], ...], int], ...]

    def witnesses(self) -> set[tuple[tuple[str, int], ...]]:
        """Counterexample assignments keyed by sorted leaf name."""
        out = set()
        for assignment, _ in self.counterexamples:
            out.add(tuple(sorted(assignment)))
        return out


def oracle_check_scheme(matrix: Matrix, scheme: Formula,
                        var_limit: int = 6) -> OracleSchemeReport:
    names = sorted(leaf_names(scheme))
    if len(names) > var_limit:
        raise VariableLimitError(
            f"scheme has {len(names)} distinct leaves, limit is {var_limit}")
    program = _postfix(scheme)
    tables = _dict_tables(matrix)
    bad = []
    for values in itertools.product(matrix.values, repeat=len(names)):
        assignment = dict(zip(names, values))
        value = _run(program, tables, assignment)
        if value not in matrix.designated:
            bad.append((tuple(assignment.items()), value))
    return OracleSchemeReport(not bad, tuple(bad))


def oracle_check_mp(matrix: Matrix) -> tuple[tuple[int, int], ...]:
    """All detachment violations, enumerated over the full value square."""
    violations = []
    tables = _dict_tables(matrix)
    for a, b in itertools.product(matrix.values, repeat=2):
        if (a in matrix.designated
                and tables["dimp"][(a, b)] in matrix.designated
                and b not in matrix.designated):
            violations.append((a, b))
    return tuple(violations)
