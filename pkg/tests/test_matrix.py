"""Matrix evaluation, scheme checking, and the file format."""

import random

import pytest

from d2lab.axioms import SYSTEM_C, SYSTEM_D, AxiomSystem, axiom_scheme
from d2lab.fixtures import MATRIX_IDS, paper_matrix
from d2lab.formula import parse
from d2lab.matrix import (
    EvaluationError, Matrix, MatrixError, MatrixFormatError,
    VariableLimitError, check_mp, check_scheme, check_system, eval_formula,
    parse_matrix, read_matrix, render_matrix, write_matrix,
)
from d2lab.oracle import oracle_check_mp, oracle_check_scheme
from helpers import random_discursive, random_matrix

# classical two-valued logic: 1 = false, 2 = true, max/min/material tables
B2 = Matrix.build("b2", 2, {2}, (2, 1),
                  [[1, 2], [2, 2]],
                  [[1, 1], [1, 2]],
                  [[2, 2], [1, 2]])


def test_eval_table_lookups():
    p1 = paper_matrix("P1")
    assert eval_formula(p1, parse("~p"), {"p": 3}) == 2
    assert eval_formula(p1, parse("p | q"), {"p": 1, "q": 2}) == 1
    assert eval_formula(p1, parse("p => ~~p"), {"p": 1}) == 2
    assert 2 not in p1.designated
    # composing the accessor functions gives the same answer
    f = parse("~p | q")
    assert eval_formula(p1, f, {"p": 1, "q": 2}) == p1.or_of(p1.neg_of(1), 2)


def test_eval_rejects_modal_nodes_and_missing_names():
    with pytest.raises(EvaluationError):
        eval_formula(B2, parse("<>p", language="modal"), {"p": 1})
    with pytest.raises(EvaluationError):
        eval_formula(B2, parse("p | q"), {"p": 1})
    with pytest.raises(MatrixError):
        eval_formula(B2, parse("p"), {"p": 7})


def test_check_scheme_witness_is_first_in_order():
    p1 = paper_matrix("P1")
    res = check_scheme(p1, axiom_scheme("DDK10"))
    assert not res.passed
    assert res.witness == (("A", 1),) and res.value == 2
    assert check_scheme(p1, parse("A => A")).passed
    # classical matrix refutes the contradiction scheme at the first value
    res = check_scheme(B2, parse("A ^ ~A"))
    assert res.witness == (("A", 1),) and res.value == 1


def test_check_scheme_quantifies_leaves_in_first_occurrence_order():
    # scheme leaves are (B, A); the first witness must follow that order
    m = random_matrix(random.Random(5), 3)
    scheme = parse("B => A ^ B")
    res = check_scheme(m, scheme)
    if not res.passed:
        assert [name for name, _ in res.witness] == ["B", "A"]


def test_constant_designated_dimp_validates_any_dimp_scheme():
    m = Matrix.build("const", 2, {1}, (2, 1),
                     [[1, 2], [2, 2]], [[1, 1], [1, 2]], [[1, 1], [1, 1]])
    assert check_scheme(m, axiom_scheme("C1")).passed
    assert check_scheme(m, axiom_scheme("DDK10")).passed


def test_variable_limit():
    wide = parse("A => (B => (C => (D => (E => (F => (G => A))))))")
    with pytest.raises(VariableLimitError):
        check_scheme(B2, wide)
    # an explicit larger limit lifts the guard
    assert check_scheme(B2, wide, var_limit=7).passed


def test_check_mp():
    assert check_mp(paper_matrix("P1")).passed
    assert check_mp(paper_matrix("P13")).passed
    broken = Matrix.build("mp-broken", 2, {1}, (2, 1),
                          [[1, 2], [2, 2]], [[1, 1], [1, 2]],
                          [[1, 1], [1, 1]])
    res = check_mp(broken)
    assert (res.passed, res.antecedent, res.consequent) == (False, 1, 2)


def test_check_system():
    for system in (SYSTEM_C, SYSTEM_D):
        report = check_system(B2, system)
        assert report.validates and report.refuted == ()
    report = check_system(paper_matrix("P5"), SYSTEM_C)
    assert report.validates
    assert report.result_for("C9").passed
    with pytest.raises(KeyError):
        report.result_for("C16")
    empty = AxiomSystem("empty", ())
    report = check_system(B2, empty)
    assert report.axiom_results == () and report.validates


def test_two_evaluators_agree_on_random_inputs():
    rng = random.Random(1789)
    for _ in range(200):
        m = random_matrix(rng, rng.randint(2, 4))
        scheme = random_discursive(rng, 4, atoms=(), metavars=("A", "B", "C"))
        mine = check_scheme(m, scheme)
        other = oracle_check_scheme(m, scheme)
        assert mine.passed == other.passed
        if not mine.passed:
            assert tuple(sorted(mine.witness)) in other.witnesses()
            # the witness really does evaluate to the reported value
            got = eval_formula(m, scheme, mine.witness_dict)
            assert got == mine.value and got not in m.designated
        mp_mine, violations = check_mp(m), oracle_check_mp(m)
        assert mp_mine.passed == (not violations)
        if not mp_mine.passed:
            assert (mp_mine.antecedent, mp_mine.consequent) in violations


def test_matrix_validation_errors():
    with pytest.raises(MatrixError):
        Matrix.build("bad", 2, set(), (2, 1),
                     [[1, 1], [1, 1]], [[1, 1], [1, 1]], [[1, 1], [1, 1]])
    with pytest.raises(MatrixError):
        Matrix.build("bad", 2, {3}, (2, 1),
                     [[1, 1], [1, 1]], [[1, 1], [1, 1]], [[1, 1], [1, 1]])
    with pytest.raises(MatrixError):
        Matrix.build("bad", 2, {1}, (2, 1, 1),
                     [[1, 1], [1, 1]], [[1, 1], [1, 1]], [[1, 1], [1, 1]])
    with pytest.raises(MatrixError):
        Matrix.build("bad", 2, {1}, (2, 1),
                     [[1, 1, 1], [1, 1]], [[1, 1], [1, 1]], [[1, 1], [1, 1]])
    with pytest.raises(MatrixError):
        Matrix.build("bad", 2, {1}, (2, 1),
                     [[1, 9], [1, 1]], [[1, 1], [1, 1]], [[1, 1], [1, 1]])


def test_file_format_roundtrip(tmp_path):
    rng = random.Random(33)
    samples = [paper_matrix(mid) for mid in MATRIX_IDS]
    samples += [random_matrix(rng, n, f"r{n}") for n in (1, 2, 3, 4)]
    for m in samples:
        assert parse_matrix(render_matrix(m), m.matrix_id) == m
        path = tmp_path / f"{m.matrix_id}.mat"
        write_matrix(m, path)
        assert read_matrix(path) == m


def test_file_format_accepts_comments_table_order_and_inline_rows():
    # header keywords are fixed in order; the three tables may permute
    text = """
    # comment line
    size 2
    designated 2   # trailing comment
    neg 2 1
    dimp
    2 2
    1 2
    or 1 2 2 2
    dand 1 1 1 2
    """
    m = parse_matrix(text, "b2")
    assert m == B2


def test_file_format_errors_carry_line_numbers():
    bad = [
        "size 2\ndesignated 2\nneg 2 1\nor 1 2 2 2\ndand 1 1 1 2",   # no dimp
        "size 2\nsize 2\ndesignated 2\nneg 2 1\n"
        "or 1 2 2 2\ndand 1 1 1 2\ndimp 2 2 1 2",                    # dup size
        "size 2\ndesignated 2\nneg 2 1\nor 1 2 2 9\n"
        "dand 1 1 1 2\ndimp 2 2 1 2",                                # range
        "size 2\ndesignated 2\nneg 2 1\nor 1 2 2\n"
        "dand 1 1 1 2\ndimp 2 2 1 2",                                # short row
        "size 2\ndesignated 2\nneg 2 1\nor 1 2 2 2\n"
        "dand 1 1 1 2\ndimp 2 2 1 2\nwhat 1",                        # junk
    ]
    for text in bad:
        with pytest.raises(MatrixFormatError) as err:
            parse_matrix(text, "bad")
        assert err.value.line is None or isinstance(err.value.line, int)


def test_paper_matrix_pins():
    p2 = paper_matrix("P2")
    assert (p2.size, p2.designated, p2.neg) == (4, frozenset({2, 3, 4}),
                                                (4, 3, 4, 1))
    assert paper_matrix("P6").neg == (3, 2, 1, 4)
    p13 = paper_matrix("P13")
    assert p13.neg == (2, 1, 4, 3)
    assert p13.or_of(2, 3) == 2 and p13.dimp_of(2, 3) == 3
    with pytest.raises(KeyError):
        paper_matrix("P14")
