"""Parser, renderer, and scheme-instantiation behavior."""

import random

import pytest

from d2lab.formula import (
    Atom, DConj, DImp, Dia, Imp, MetaVar, Neg, Or,
    ParseError, SchemeError, SubstitutionError, WrongLanguageError,
    atom_names, canonical_instance, is_discursive, is_ground, is_modal,
    leaf_names, metavariables, parse, render, subformulas, substitute,
)
from helpers import random_discursive, random_modal

P, Q = Atom("p"), Atom("q")
A, B = MetaVar("A"), MetaVar("B")


def test_parse_structures():
    assert parse("A => (B => A)") == DImp(A, DImp(B, A))
    assert parse("~~p") == Neg(Neg(P))
    assert parse("<>(<>p -> q)", language="modal") == Dia(Imp(Dia(P), Q))


def test_precedence():
    # unary > ^ > | > =>, with => right-associative
    assert parse("~p ^ q | r") == Or(DConj(Neg(P), Q), Atom("r"))
    assert parse("p | q ^ r") == Or(P, DConj(Q, Atom("r")))
    assert parse("p => q => r") == DImp(P, DImp(Q, Atom("r")))
    assert parse("p & q -> r | s", language="modal") == \
        Imp(parse("p & q", language="modal"), parse("r | s", language="modal"))
    assert parse("~<>p", language="modal") == Neg(Dia(P))


def test_parentheses_override_precedence():
    assert parse("(p | q) ^ r") == DConj(Or(P, Q), Atom("r"))
    assert parse("(p => q) => r") == DImp(DImp(P, Q), Atom("r"))


def test_render_examples():
    assert render(Neg(Neg(P))) == "~~p"
    ddk14_shape = DImp(Neg(Or(P, Q)), DConj(Neg(Q), Neg(P)))
    assert render(ddk14_shape) == "~(p | q) => (~q ^ ~p)"
    assert render(parse("p ^ q")) == "p ^ q"


def test_roundtrip_random():
    rng = random.Random(20260814)
    for i in range(500):
        f = random_discursive(rng, 6, metavars=("A", "B") if i % 3 else ())
        assert parse(render(f)) == f
        assert render(parse(render(f))) == render(f)
    for _ in range(500):
        f = random_modal(rng, 6)
        assert parse(render(f), language="modal") == f


def test_parse_errors_carry_position():
    for text in ("", "p |", "p q", "(p", "p ~ q", ")p"):
        with pytest.raises(ParseError) as err:
            parse(text)
        assert err.value.text == text
        assert isinstance(err.value.position, int)


def test_wrong_language():
    with pytest.raises(WrongLanguageError):
        parse("<>p", language="discursive")
    with pytest.raises(WrongLanguageError):
        parse("p -> q", language="discursive")
    with pytest.raises(WrongLanguageError):
        parse("p ^ q", language="modal")
    with pytest.raises(WrongLanguageError):
        parse("p => q", language="modal")
    with pytest.raises(WrongLanguageError):
        parse("A | p", language="modal")   # metavariables are discursive-only


def test_walkers():
    f = parse("B => A ^ B")
    assert leaf_names(f) == ["B", "A"]
    assert metavariables(f) == ["B", "A"]
    assert atom_names(f) == []
    g = parse("~(p | q) => (q ^ A)")
    assert leaf_names(g) == ["p", "q", "A"]
    assert atom_names(g) == ["p", "q"]
    assert metavariables(g) == ["A"]
    assert len(list(subformulas(parse("~~p")))) == 3


def test_language_predicates():
    both = parse("p | ~q")
    assert is_discursive(both) and is_modal(both) and is_ground(both)
    assert is_discursive(parse("p ^ q")) and not is_modal(parse("p ^ q"))
    boxed = parse("[]p -> q", language="modal")
    assert is_modal(boxed) and not is_discursive(boxed)
    assert not is_ground(parse("A => p"))


def test_substitute():
    c1 = parse("A => (B => A)")
    image = substitute(c1, {"A": parse("p | q"), "B": parse("~p")})
    assert image == parse("(p | q) => (~p => (p | q))")
    assert substitute(parse("A => ~~A"), {"A": P}) == parse("p => ~~p")
    ground = parse("~(p | q)")
    assert substitute(MetaVar("A"), {"A": ground}) == ground


def test_substitute_errors():
    with pytest.raises(SubstitutionError):
        substitute(parse("A => B"), {"A": P})   # B unmapped
    with pytest.raises(SubstitutionError):
        substitute(parse("A => A"), {"A": parse("B => p")})   # image not ground


def test_canonical_instance():
    assert canonical_instance(parse("A => ~~A")) == parse("p => ~~p")
    three = canonical_instance(parse("A => (B => C)"))
    assert three == parse("p => (q => r)")
    ground = parse("p ^ ~q")
    assert canonical_instance(ground) == ground
    with pytest.raises(SchemeError):
        canonical_instance(parse("A => (B => (C => D))"))


def test_structural_equality_and_hash():
    assert parse("p => q") == parse("p => q")
    assert hash(parse("p ^ q")) == hash(DConj(P, Q))
    assert parse("p => q") != parse("q => p")
    assert len({parse("p | q"), parse("p | q"), parse("q | p")}) == 2
