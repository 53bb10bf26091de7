"""The thirteen published countermodel matrices and their claimed roles.

Matrices P1 through P12 are claimed to validate every axiom of system C
(and detachment) while each refutes one axiom of system D; P13 is
claimed to validate all of system D while refuting C13.  The tables are
embedded here as the source of truth; the same matrices ship as
``fixtures/*.mat`` data files for the command line.

:func:`verify_paper_claims` replays every claim with the primary
evaluator, cross-checks each verdict with the independent oracle
evaluator, and reports any divergence from the published claims as
findings.  Disagreement between the two evaluators is an error;
disagreement with the published claim is a finding.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .axioms import axiom_scheme, axiom_system
from .matrix import Matrix, SchemeResult, ValidationReport, check_scheme, check_system
from .oracle import oracle_check_mp, oracle_check_scheme


class EvaluatorDisagreement(Exception):
    """The primary and oracle evaluators returned different verdicts."""


def _m(matrix_id, size, designated, neg, or_table, dand_table, dimp_table):
    return Matrix.build(matrix_id, size, designated, neg,
                        or_table, dand_table, dimp_table)


PAPER_MATRICES: dict[str, Matrix] = {m.matrix_id: m for m in [
    _m("P1", 3, [1, 3], [3, 3, 2],
       [[3, 1, 3], [1, 2, 3], [3, 3, 3]],
       [[3, 2, 1], [2, 2, 2], [1, 2, 3]],
       [[3, 2, 3], [3, 1, 2], [1, 2, 3]]),
    _m("P2", 4, [2, 3, 4], [4, 3, 4, 1],
       [[1, 2, 3, 4], [2, 2, 2, 2], [3, 3, 3, 4], [4, 4, 4, 4]],
       [[1, 1, 1, 1], [1, 3, 4, 4], [1, 3, 2, 2], [1, 4, 3, 4]],
       [[4, 2, 2, 4], [1, 3, 3, 3], [1, 4, 4, 3], [1, 2, 3, 3]]),
    _m("P3", 3, [1, 2], [3, 2, 1],
       [[2, 1, 1], [2, 1, 2], [1, 2, 3]],
       [[1, 1, 3], [2, 2, 3], [3, 3, 3]],
       [[2, 1, 3], [1, 1, 3], [1, 1, 1]]),
    _m("P4", 3, [1, 2], [3, 1, 1],
       [[2, 2, 1], [2, 2, 2], [1, 2, 3]],
       [[1, 1, 3], [1, 2, 3], [3, 3, 3]],
       [[1, 1, 3], [1, 2, 3], [1, 1, 1]]),
    _m("P5", 3, [1, 3], [3, 3, 2],
       [[3, 1, 3], [1, 2, 3], [1, 3, 1]],
       [[1, 2, 1], [2, 2, 2], [3, 2, 3]],
       [[1, 2, 3], [3, 1, 3], [1, 2, 3]]),
    _m("P6", 4, [2, 3, 4], [3, 2, 1, 4],
       [[1, 2, 4, 4], [3, 4, 3, 2], [4, 3, 3, 2], [4, 2, 4, 4]],
       [[1, 1, 1, 1], [1, 2, 2, 4], [1, 3, 3, 2], [1, 2, 2, 2]],
       [[4, 2, 2, 2], [1, 4, 2, 2], [1, 2, 2, 4], [1, 4, 3, 3]]),
    _m("P7", 3, [1, 2], [3, 2, 1],
       [[2, 1, 1], [1, 1, 2], [1, 2, 3]],
       [[1, 1, 3], [1, 2, 3], [3, 3, 3]],
       [[1, 1, 3], [1, 1, 3], [2, 1, 1]]),
    _m("P8", 3, [1, 2], [3, 1, 1],
       [[2, 2, 1], [1, 1, 2], [1, 2, 3]],
       [[1, 2, 3], [2, 1, 3], [3, 3, 3]],
       [[1, 1, 3], [1, 1, 3], [2, 2, 2]]),
    _m("P9", 3, [1, 2], [3, 1, 1],
       [[2, 2, 1], [1, 1, 2], [1, 2, 3]],
       [[1, 1, 3], [2, 2, 3], [3, 3, 3]],
       [[1, 1, 3], [2, 2, 3], [2, 1, 1]]),
    _m("P10", 3, [2, 3], [3, 3, 1],
       [[1, 2, 3], [2, 3, 3], [3, 3, 2]],
       [[1, 1, 1], [1, 2, 2], [1, 2, 3]],
       [[2, 3, 2], [1, 3, 2], [1, 2, 2]]),
    _m("P11", 3, [1, 2], [3, 2, 1],
       [[2, 2, 1], [2, 1, 2], [1, 2, 3]],
       [[1, 1, 3], [1, 2, 3], [3, 3, 3]],
       [[2, 1, 3], [2, 1, 3], [2, 1, 2]]),
    _m("P12", 3, [1, 2], [3, 2, 1],
       [[2, 1, 1], [1, 1, 2], [1, 2, 3]],
       [[1, 2, 3], [1, 1, 3], [3, 3, 3]],
       [[2, 1, 3], [2, 1, 3], [2, 1, 2]]),
    _m("P13", 4, [2, 3, 4], [2, 1, 4, 3],
       [[1, 2, 3, 4], [2, 2, 2, 2], [3, 2, 3, 2], [4, 2, 2, 4]],
       [[1, 1, 1, 1], [1, 2, 3, 4], [1, 2, 3, 4], [1, 2, 3, 4]],
       [[2, 2, 2, 2], [1, 2, 3, 4], [1, 2, 3, 4], [1, 2, 3, 4]]),
]}

# matrix id -> (axiom it refutes, system it is claimed to validate)
TARGETS: dict[str, tuple[str, str]] = {
    "P1": ("DDK10", "C"),
    "P2": ("DDK12", "C"),
    "P3": ("DDK13", "C"),
    "P4": ("DDK14", "C"),
    "P5": ("DDK15", "C"),
    "P6": ("DDK16", "C"),
    "P7": ("DDK17", "C"),
    "P8": ("DDK18", "C"),
    "P9": ("DDK19", "C"),
    "P10": ("DDK20", "C"),
    "P11": ("DDK21", "C"),
    "P12": ("DDK22", "C"),
    "P13": ("C13", "D"),
}

MATRIX_IDS = tuple(TARGETS)


def paper_matrix(matrix_id: str) -> Matrix:
    """Look up one of P1..P13."""
    try:
        return PAPER_MATRICES[matrix_id]
    except KeyError:
        raise KeyError(f"unknown matrix id {matrix_id!r}; "
                       f"known: {', '.join(MATRIX_IDS)}") from None


def fixture_path(matrix_id: str) -> Path:
    """Filesystem path of the packaged ``.mat`` file for a matrix."""
    paper_matrix(matrix_id)  # validate the id
    return Path(str(resources.files("d2lab") / "fixtures" / f"{matrix_id}.mat"))


@dataclass(frozen=True)
class Finding:
    """A computed verdict that contradicts the published claim."""

    matrix_id: str
    axiom_id: str
    claimed: str   # "designated everywhere" or "refuted" or "detachment sound"
    observed: str
    witness: tuple[tuple[str, int], ...] | None = None
    value: int | None = None

    def describe(self) -> str:
        text = (f"{self.matrix_id}/{self.axiom_id}: claimed {self.claimed}, "
                f"observed {self.observed}")
        if self.witness is not None:
            parts = ", ".join(f"{name}={v}" for name, v in self.witness)
            text += f" ({parts} gives value {self.value})"
        return text


@dataclass(frozen=True)
class PropositionRecord:
    """Replay of one matrix's published role."""

    matrix_id: str
    refuted_axiom: str
    refutation: SchemeResult
    validated_system: str
    validation: ValidationReport
    findings: tuple[Finding, ...]

    @property
    def refutation_confirmed(self) -> bool:
        return not self.refutation.passed


def _cross_check_scheme(matrix: Matrix, axiom_id: str,
                        primary: SchemeResult) -> None:
    """Both evaluators must agree; the primary witness must be real."""
    oracle = oracle_check_scheme(matrix, axiom_scheme(axiom_id))
    if primary.passed != oracle.passed:
        raise EvaluatorDisagreement(
            f"{matrix.matrix_id}/{axiom_id}: primary says "
            f"{'pass' if primary.passed else 'fail'}, oracle says "
            f"{'pass' if oracle.passed else 'fail'}")
    if not primary.passed:
        key = tuple(sorted(primary.witness))
        if key not in oracle.witnesses():
            raise EvaluatorDisagreement(
                f"{matrix.matrix_id}/{axiom_id}: primary witness {key} "
                f"not among the oracle's counterexamples")


def _cross_check_mp(matrix: Matrix, primary_passed: bool) -> None:
    oracle_violations = oracle_check_mp(matrix)
    if primary_passed != (not oracle_violations):
        raise EvaluatorDisagreement(
            f"{matrix.matrix_id}/MP: primary says "
            f"{'pass' if primary_passed else 'fail'}, oracle found "
            f"{len(oracle_violations)} violation(s)")


def verify_paper_claims() -> tuple[PropositionRecord, ...]:
    """Replay all thirteen published matrix claims, oracle-confirmed.

    Raises :class:`EvaluatorDisagreement` if the two evaluators ever
    differ.  Divergences from the published claims come back as
    findings on the affected record, not as errors.
    """
    records = []
    for matrix_id, (refuted_axiom, system_id) in TARGETS.items():
        matrix = PAPER_MATRICES[matrix_id]
        findings: list[Finding] = []

        refutation = check_scheme(matrix, axiom_scheme(refuted_axiom))
        _cross_check_scheme(matrix, refuted_axiom, refutation)
        if refutation.passed:
            findings.append(Finding(matrix_id, refuted_axiom,
                                    claimed="refuted",
                                    observed="designated everywhere"))

        system = axiom_system(system_id)
        validation = check_system(matrix, system)
        for axiom_id, result in validation.axiom_results:
            _cross_check_scheme(matrix, axiom_id, result)
            if not result.passed:
                findings.append(Finding(matrix_id, axiom_id,
                                        claimed="designated everywhere",
                                        observed="fails",
                                        witness=result.witness,
                                        value=result.value))
        _cross_check_mp(matrix, validation.mp.passed)
        if not validation.mp.passed:
            findings.append(Finding(
                matrix_id, "MP",
                claimed="detachment sound",
                observed="fails",
                witness=(("antecedent", validation.mp.antecedent),
                         ("consequent", validation.mp.consequent))))

        records.append(PropositionRecord(
            matrix_id=matrix_id,
            refuted_axiom=refuted_axiom,
            refutation=refutation,
            validated_system=system_id,
            validation=validation,
            findings=tuple(findings),
        ))
    return tuple(records)
