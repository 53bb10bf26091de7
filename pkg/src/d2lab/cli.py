"""Command line interface.

Every subcommand produces either a short text report or a JSON envelope
``{"command", "result", "findings", "exit_status"}`` validating against
the shipped ``report_schema.json``.  Exit codes: 0 when the result is
the expected or valid one, 1 when a refutation, countermodel, or finding
was produced, 2 on usage and input errors, 3 when a resource limit (atom
or variable bound, search time budget) cut the question short.

Wherever a discursive formula is accepted, an axiom id (``C7``,
``DDK10``) may be given instead; schemes are instantiated with atoms
p, q, r in order of first occurrence.  A matrix argument is a path to a
matrix file, or the id of one of the bundled countermodel fixtures
(``P1`` .. ``P13``).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass

from . import __version__
from .axioms import axiom_scheme, axiom_system
from .fixtures import (
    MATRIX_IDS, TARGETS, Finding, paper_matrix, verify_paper_claims,
)
from .formula import (
    Formula, FormulaError, canonical_instance, metavariables, parse, render,
)
from .matrix import (
    Matrix, MatrixError, SchemeResult, VariableLimitError, check_scheme,
    check_system, eval_formula, read_matrix, render_matrix, write_matrix,
)
from .modal import (
    AtomLimitError, DEFAULT_ATOM_LIMIT, ModalError, Verdict,
    classify_d_axioms, d2_valid, s5_valid, translate,
)
from .search import SearchConstraints, SearchError, Termination, find_matrices

_AXIOM_ID = re.compile(r"(?:C|DDK)\d+\Z")

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3

BUDGET_ENV = "D2LAB_BUDGET"


@dataclass(frozen=True)
class Report:
    """What a subcommand computed, in serializable form."""

    command: str
    result: dict
    findings: list[dict]
    exit_status: int

    def to_json(self) -> str:
        return json.dumps({
            "command": self.command,
            "result": self.result,
            "findings": self.findings,
            "exit_status": self.exit_status,
        }, indent=2)


class CliError(Exception):
    """Bad argument or unreadable input; maps to exit status 2."""


def _formula_arg(text: str) -> Formula:
    """A discursive formula, an axiom id, or a scheme to instantiate."""
    if _AXIOM_ID.match(text):
        try:
            return canonical_instance(axiom_scheme(text))
        except KeyError:
            raise CliError(f"unknown axiom id {text!r}")
    f = parse(text, language="discursive")
    if metavariables(f):
        f = canonical_instance(f)
    return f


def _scheme_arg(text: str) -> tuple[str, Formula]:
    """Like _formula_arg but keeps schemes as schemes, for matrix checks."""
    if _AXIOM_ID.match(text):
        try:
            return text, axiom_scheme(text)
        except KeyError:
            raise CliError(f"unknown axiom id {text!r}")
    return text, parse(text, language="discursive")


def _matrix_arg(text: str) -> Matrix:
    if text in MATRIX_IDS:
        return paper_matrix(text)
    if not os.path.exists(text):
        raise CliError(f"no such matrix file or fixture id: {text!r}")
    return read_matrix(text)


def _matrix_json(m: Matrix) -> dict:
    return {
        "matrix_id": m.matrix_id,
        "size": m.size,
        "designated": sorted(m.designated),
        "neg": list(m.neg),
        "or": [list(row) for row in m.or_table],
        "dand": [list(row) for row in m.dand_table],
        "dimp": [list(row) for row in m.dimp_table],
    }


def _witness_json(result: SchemeResult) -> dict | None:
    return result.witness_dict


def _verdict_json(verdict: Verdict) -> dict:
    out: dict = {"valid": verdict.valid,
                 "models_checked": verdict.models_checked}
    if verdict.valid:
        out["countermodel"] = None
    else:
        model = verdict.countermodel
        out["countermodel"] = {
            "atoms": list(model.atoms),
            "worlds": ["".join("1" if bit else "0" for bit in world)
                       for world in model.worlds],
            "world_index": verdict.world_index,
        }
    return out


def _finding_json(finding: Finding) -> dict:
    return {
        "matrix": finding.matrix_id,
        "axiom": finding.axiom_id,
        "claimed": finding.claimed,
        "observed": finding.observed,
        "witness": None if finding.witness is None else dict(finding.witness),
        "value": finding.value,
    }


def _witness_text(witness: tuple[tuple[str, int], ...]) -> str:
    return ", ".join(f"{name}={value}" for name, value in witness)


# ---------------------------------------------------------------- handlers

def _cmd_eval(args) -> tuple[dict, list[dict], int]:
    matrix = _matrix_arg(args.matrix)
    label, scheme = _scheme_arg(args.formula)
    result: dict = {"matrix": matrix.matrix_id, "formula": label}
    if args.assign is None:
        outcome = check_scheme(matrix, scheme)
        result["mode"] = "scheme"
        result["passed"] = outcome.passed
        result["witness"] = _witness_json(outcome)
        result["witness_value"] = outcome.value
        status = EXIT_OK if outcome.passed else EXIT_REFUTED
        return result, [], status
    assignment = _parse_assignment(args.assign)
    value = eval_formula(matrix, scheme, assignment)
    result["mode"] = "assignment"
    result["assignment"] = assignment
    result["value"] = value
    result["designated"] = value in matrix.designated
    return result, [], EXIT_OK


def _parse_assignment(text: str) -> dict[str, int]:
    assignment: dict[str, int] = {}
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        name, eq, raw = piece.partition("=")
        if not eq or not raw.strip().isdigit():
            raise CliError(f"bad assignment entry {piece!r}; expected name=value")
        assignment[name.strip()] = int(raw)
    if not assignment:
        raise CliError("empty assignment")
    return assignment


def _fixture_findings(matrix: Matrix, system_id: str, report) -> list[dict]:
    """Findings apply only where the published tables claim validation."""
    target = TARGETS.get(matrix.matrix_id)
    if target is None or target[1] != system_id:
        return []
    findings = []
    for axiom_id, result in report.axiom_results:
        if not result.passed:
            findings.append(_finding_json(Finding(
                matrix.matrix_id, axiom_id, "designated everywhere",
                "refuted", result.witness, result.value)))
    if not report.mp.passed:
        findings.append(_finding_json(Finding(
            matrix.matrix_id, "MP", "detachment sound", "unsound")))
    return findings


def _cmd_check(args) -> tuple[dict, list[dict], int]:
    matrix = _matrix_arg(args.matrix)
    system = axiom_system(args.system)
    report = check_system(matrix, system)
    result: dict = {
        "matrix": matrix.matrix_id,
        "system": system.system_id,
        "validates": report.validates,
        "axioms": [
            {"axiom": axiom_id, "passed": res.passed,
             "witness": _witness_json(res), "value": res.value}
            for axiom_id, res in report.axiom_results
        ],
        "mp": {"passed": report.mp.passed,
               "antecedent": report.mp.antecedent,
               "consequent": report.mp.consequent},
    }
    expected = report.validates
    if args.refute is not None:
        refute_id, refute_scheme = _scheme_arg(args.refute)
        refutation = check_scheme(matrix, refute_scheme)
        result["refute"] = {
            "axiom": refute_id,
            "refuted": not refutation.passed,
            "witness": _witness_json(refutation),
            "value": refutation.value,
        }
        expected = expected and not refutation.passed
    findings = _fixture_findings(matrix, system.system_id, report)
    return result, findings, EXIT_OK if expected else EXIT_REFUTED


def _cmd_s5(args) -> tuple[dict, list[dict], int]:
    f = parse(args.formula, language="modal")
    verdict = s5_valid(f, atom_limit=args.atom_limit)
    result = {"formula": render(f)}
    result.update(_verdict_json(verdict))
    return result, [], EXIT_OK if verdict.valid else EXIT_REFUTED


def _cmd_d2(args) -> tuple[dict, list[dict], int]:
    f = _formula_arg(args.formula)
    verdict = d2_valid(f, args.dconj, outer_diamond=not args.no_outer_diamond,
                       atom_limit=args.atom_limit)
    result = {
        "formula": render(f),
        "dconj": args.dconj,
        "outer_diamond": not args.no_outer_diamond,
        "translation": render(translate(f, args.dconj)),
    }
    result.update(_verdict_json(verdict))
    return result, [], EXIT_OK if verdict.valid else EXIT_REFUTED


def _cmd_translate(args) -> tuple[dict, list[dict], int]:
    f = _formula_arg(args.formula)
    result = {
        "formula": render(f),
        "dconj": args.dconj,
        "translation": render(translate(f, args.dconj)),
    }
    return result, [], EXIT_OK


def _cmd_classify(args) -> tuple[dict, list[dict], int]:
    rows = classify_d_axioms(atom_limit=args.atom_limit)
    result = {"rows": []}
    findings: list[dict] = []
    for row in rows:
        result["rows"].append({
            "axiom": row.axiom_id,
            "claimed": row.claimed,
            "status": row.status,
            "right": _verdict_json(row.verdict),
            "left": _verdict_json(row.verdict_left),
        })
        if row.status == "finding":
            findings.append({
                "matrix": None,
                "axiom": row.axiom_id,
                "claimed": row.claimed,
                "observed": "valid" if row.verdict.valid else "invalid",
                "witness": None,
                "value": None,
            })
    status = EXIT_REFUTED if findings else EXIT_OK
    return result, findings, status


def _cmd_paper_verify(args) -> tuple[dict, list[dict], int]:
    records = verify_paper_claims()
    result = {"records": []}
    findings: list[dict] = []
    confirmed = True
    for record in records:
        result["records"].append({
            "matrix": record.matrix_id,
            "refuted_axiom": record.refuted_axiom,
            "refutation_confirmed": record.refutation_confirmed,
            "witness": _witness_json(record.refutation),
            "value": record.refutation.value,
            "validated_system": record.validated_system,
            "validates": record.validation.validates,
            "findings": len(record.findings),
        })
        confirmed = confirmed and record.refutation_confirmed
        findings.extend(_finding_json(f) for f in record.findings)
    status = EXIT_OK if confirmed and not findings else EXIT_REFUTED
    return result, findings, status


def _cmd_search(args) -> tuple[dict, list[dict], int]:
    budget = args.budget
    if budget is None and os.environ.get(BUDGET_ENV):
        try:
            budget = float(os.environ[BUDGET_ENV])
        except ValueError:
            raise CliError(f"{BUDGET_ENV} must be a number")
    constraints = SearchConstraints(
        size=args.size,
        validate=_axiom_list(args.validate),
        refute=_axiom_list(args.refute),
        designated=_value_set(args.designated),
        neg=_value_tuple(args.neg),
        prune_isomorphic=args.prune_isomorphic,
        limit=args.limit,
        budget=budget,
    )
    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)
    matrices: list[dict] = []
    written: list[str] = []
    termination = None
    for item in find_matrices(constraints):
        if isinstance(item, Termination):
            termination = item
            break
        matrices.append(_matrix_json(item))
        if args.out is not None:
            path = os.path.join(args.out, f"{item.matrix_id}.mat")
            write_matrix(item, path)
            written.append(path)
    result = {
        "constraints": {
            "size": constraints.size,
            "validate": list(constraints.validate),
            "refute": list(constraints.refute),
            "designated": (None if constraints.designated is None
                           else sorted(constraints.designated)),
            "neg": (None if constraints.neg is None
                    else list(constraints.neg)),
            "prune_isomorphic": constraints.prune_isomorphic,
            "limit": constraints.limit,
            "budget": constraints.budget,
        },
        "matrices": matrices,
        "termination": {
            "reason": termination.reason,
            "count": termination.count,
            "elapsed": termination.elapsed,
        },
    }
    if args.out is not None:
        result["written"] = written
    status = EXIT_LIMIT if termination.reason == "budget" else EXIT_OK
    return result, [], status


def _axiom_list(text: str | None) -> tuple[str, ...]:
    if not text:
        return ()
    ids = tuple(piece.strip() for piece in text.split(",") if piece.strip())
    for axiom_id in ids:
        try:
            axiom_scheme(axiom_id)
        except KeyError:
            raise CliError(f"unknown axiom id {axiom_id!r}")
    return ids


def _value_set(text: str | None) -> frozenset[int] | None:
    if text is None:
        return None
    return frozenset(_value_tuple(text))


def _value_tuple(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    pieces = [piece.strip() for piece in text.split(",") if piece.strip()]
    if not pieces or not all(piece.isdigit() for piece in pieces):
        raise CliError(f"expected comma-separated integers, got {text!r}")
    return tuple(int(piece) for piece in pieces)


# ------------------------------------------------------------ text output

def _print_verdict(result: dict, out) -> None:
    print("VALID" if result["valid"] else "INVALID", file=out)
    if result["valid"]:
        print(f"checked {result['models_checked']} universal models", file=out)
    else:
        model = result["countermodel"]
        worlds = "; ".join(
            "{" + ", ".join(f"{atom}={'T' if bit == '1' else 'F'}"
                            for atom, bit in zip(model["atoms"], world)) + "}"
            for world in model["worlds"])
        print(f"countermodel: world {model['world_index']} of [{worlds}]",
              file=out)


def _print_text(report: Report, out) -> None:
    command, result = report.command, report.result
    if command == "eval":
        if result["mode"] == "assignment":
            pairs = ", ".join(f"{k}={v}" for k, v in result["assignment"].items())
            mark = "designated" if result["designated"] else "undesignated"
            print(f"{result['matrix']}: {result['formula']} with {pairs} "
                  f"gives {result['value']} ({mark})", file=out)
        elif result["passed"]:
            print(f"{result['matrix']}: {result['formula']} validated", file=out)
        else:
            pairs = ", ".join(f"{k}={v}" for k, v in result["witness"].items())
            print(f"{result['matrix']}: {result['formula']} refuted at {pairs} "
                  f"(value {result['witness_value']})", file=out)
    elif command == "check":
        print(f"{result['matrix']} against system {result['system']}:", file=out)
        for entry in result["axioms"]:
            if entry["passed"]:
                print(f"  {entry['axiom']:<6} validated", file=out)
            else:
                pairs = ", ".join(f"{k}={v}" for k, v in entry["witness"].items())
                print(f"  {entry['axiom']:<6} refuted at {pairs} "
                      f"(value {entry['value']})", file=out)
        mp = result["mp"]
        if mp["passed"]:
            print("  MP     sound", file=out)
        else:
            print(f"  MP     unsound: {mp['antecedent']} => {mp['consequent']} "
                  "detaches to an undesignated value", file=out)
        print(f"validates {result['system']}: "
              f"{'yes' if result['validates'] else 'no'}", file=out)
        if "refute" in result:
            entry = result["refute"]
            if entry["refuted"]:
                pairs = ", ".join(f"{k}={v}" for k, v in entry["witness"].items())
                print(f"refutes {entry['axiom']}: yes, at {pairs} "
                      f"(value {entry['value']})", file=out)
            else:
                print(f"refutes {entry['axiom']}: no", file=out)
    elif command in ("s5", "d2"):
        _print_verdict(result, out)
        if command == "d2":
            print(f"translation: {result['translation']}", file=out)
    elif command == "translate":
        print(result["translation"], file=out)
    elif command == "classify":
        for row in result["rows"]:
            right = "Valid" if row["right"]["valid"] else "Invalid"
            left = "Valid" if row["left"]["valid"] else "Invalid"
            claimed = row["claimed"] if row["claimed"] is not None else "(none)"
            line = (f"{row['axiom']:<6} claimed {claimed:<6} "
                    f"computed {right:<8} {row['status']}")
            if right != left:
                line += f"  [left-variant conjunction: {left}]"
            print(line, file=out)
    elif command == "paper-verify":
        for record in result["records"]:
            if record["witness"] is None:
                refutation = "NOT confirmed"
            else:
                pairs = ", ".join(f"{k}={v}"
                                  for k, v in record["witness"].items())
                refutation = f"confirmed at {pairs} (value {record['value']})"
            validates = "yes" if record["validates"] else "no"
            print(f"{record['matrix']}: refutes {record['refuted_axiom']} "
                  f"{refutation}; validates {record['validated_system']}: "
                  f"{validates} ({record['findings']} findings)", file=out)
    elif command == "search":
        for entry in result["matrices"]:
            print(f"# {entry['matrix_id']}", file=out)
            print(render_matrix(_matrix_from_json(entry)), file=out)
        if "written" in result:
            for path in result["written"]:
                print(f"wrote {path}", file=out)
        term = result["termination"]
        print(f"termination: {term['reason']} ({term['count']} matrices, "
              f"{term['elapsed']:.2f}s)", file=out)
    if report.findings:
        print("findings:", file=out)
        for finding in report.findings:
            where = finding["matrix"] or "classification"
            line = (f"  {where}/{finding['axiom']}: claimed "
                    f"{finding['claimed']}, observed {finding['observed']}")
            if finding["witness"] is not None:
                pairs = ", ".join(f"{k}={v}"
                                  for k, v in finding["witness"].items())
                line += f" ({pairs} gives value {finding['value']})"
            print(line, file=out)


def _matrix_from_json(entry: dict) -> Matrix:
    return Matrix.build(entry["matrix_id"], entry["size"],
                        entry["designated"], entry["neg"],
                        entry["or"], entry["dand"], entry["dimp"])


# ------------------------------------------------------------------ driver

_HANDLERS = {
    "eval": _cmd_eval,
    "check": _cmd_check,
    "s5": _cmd_s5,
    "d2": _cmd_d2,
    "translate": _cmd_translate,
    "classify": _cmd_classify,
    "paper-verify": _cmd_paper_verify,
    "search": _cmd_search,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="d2lab",
        description="Matrix and modal checks for two axiomatizations of "
                    "discussive logic.")
    parser.add_argument("--version", action="version",
                        version=f"d2lab {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="output format (default text)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common],
                       help="evaluate a formula on a matrix")
    p.add_argument("matrix", help="matrix file or fixture id")
    p.add_argument("formula", help="discursive formula or axiom id")
    p.add_argument("--assign", metavar="p=1,q=2",
                   help="evaluate one assignment instead of quantifying")

    p = sub.add_parser("check", parents=[common],
                       help="check a matrix against an axiom system")
    p.add_argument("matrix", help="matrix file or fixture id")
    p.add_argument("--system", required=True, choices=("C", "D"))
    p.add_argument("--refute", metavar="AXIOM",
                   help="also require this axiom to fail")

    p = sub.add_parser("s5", parents=[common],
                       help="decide S5 validity of a modal formula")
    p.add_argument("formula", help="modal formula")
    p.add_argument("--atom-limit", type=int, default=DEFAULT_ATOM_LIMIT)

    p = sub.add_parser("d2", parents=[common],
                       help="decide discussive validity via translation")
    p.add_argument("formula", help="discursive formula or axiom id")
    p.add_argument("--dconj", choices=("right", "left"), default="right",
                   help="which conjunct gets the possibility operator")
    p.add_argument("--no-outer-diamond", action="store_true",
                   help="drop the outer possibility operator")
    p.add_argument("--atom-limit", type=int, default=DEFAULT_ATOM_LIMIT)

    p = sub.add_parser("translate", parents=[common],
                       help="print the modal translation of a formula")
    p.add_argument("formula", help="discursive formula or axiom id")
    p.add_argument("--dconj", choices=("right", "left"), default="right")

    p = sub.add_parser("classify", parents=[common],
                       help="recompute the published validity marks")
    p.add_argument("--atom-limit", type=int, default=DEFAULT_ATOM_LIMIT)

    sub.add_parser("paper-verify", parents=[common],
                   help="replay every bundled countermodel's published role")

    p = sub.add_parser("search", parents=[common],
                       help="enumerate matrices meeting constraints")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--validate", metavar="IDS",
                   help="comma-separated axiom ids that must pass")
    p.add_argument("--refute", metavar="IDS",
                   help="comma-separated axiom ids that must fail")
    p.add_argument("--designated", metavar="VALUES",
                   help="fix the designated set, e.g. 1,3")
    p.add_argument("--neg", metavar="VALUES",
                   help="fix the negation row, e.g. 3,3,2")
    p.add_argument("--prune-isomorphic", action="store_true",
                   help="emit one representative per isomorphism orbit")
    p.add_argument("--limit", type=int, help="stop after this many matrices")
    p.add_argument("--budget", type=float, metavar="SECONDS",
                   help=f"time budget (default from ${BUDGET_ENV})")
    p.add_argument("--out", metavar="DIR",
                   help="write each matrix to DIR as a .mat file")
    return parser


def _execute(args: argparse.Namespace) -> Report:
    result, findings, status = _HANDLERS[args.command](args)
    return Report(args.command, result, findings, status)


def run(argv: list[str]) -> Report:
    """Parse argv, run the subcommand, and package the outcome."""
    return _execute(_build_parser().parse_args(argv))


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        report = _execute(args)
    except (AtomLimitError, VariableLimitError) as exc:
        print(f"d2lab: limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (CliError, FormulaError, MatrixError, ModalError, SearchError,
            OSError) as exc:
        print(f"d2lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        print(report.to_json())
    else:
        _print_text(report, sys.stdout)
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
