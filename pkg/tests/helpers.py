"""Seeded random generators shared across the test modules."""

from __future__ import annotations

import random

from d2lab.formula import (
    And, Atom, Box, DConj, DImp, Dia, Iff, Imp, MetaVar, Neg, Or,
)
from d2lab.matrix import Matrix

DISCURSIVE_BINARY = (Or, DConj, DImp)
MODAL_BINARY = (Or, And, Imp, Iff)
MODAL_UNARY = (Neg, Dia, Box)


def random_discursive(rng: random.Random, max_depth: int,
                      atoms=("p", "q", "r"), metavars=()):
    leaves = [Atom(name) for name in atoms]
    leaves += [MetaVar(name) for name in metavars]

    def build(depth):
        if depth == 0 or rng.random() < 0.3:
            return rng.choice(leaves)
        if rng.random() < 0.25:
            return Neg(build(depth - 1))
        op = rng.choice(DISCURSIVE_BINARY)
        return op(build(depth - 1), build(depth - 1))

    return build(max_depth)


def random_modal(rng: random.Random, max_depth: int, atoms=("p", "q", "r")):
    leaves = [Atom(name) for name in atoms]

    def build(depth):
        if depth == 0 or rng.random() < 0.25:
            return rng.choice(leaves)
        if rng.random() < 0.4:
            return rng.choice(MODAL_UNARY)(build(depth - 1))
        op = rng.choice(MODAL_BINARY)
        return op(build(depth - 1), build(depth - 1))

    return build(max_depth)


def random_negor(rng: random.Random, max_depth: int, atoms=("p", "q", "r")):
    """A formula using only negation and disjunction."""
    leaves = [Atom(name) for name in atoms]

    def build(depth):
        if depth == 0 or rng.random() < 0.3:
            return rng.choice(leaves)
        if rng.random() < 0.4:
            return Neg(build(depth - 1))
        return Or(build(depth - 1), build(depth - 1))

    return build(max_depth)


def random_matrix(rng: random.Random, size: int, matrix_id="rnd") -> Matrix:
    values = list(range(1, size + 1))
    designated = rng.sample(values, rng.randint(1, size))
    neg = tuple(rng.choice(values) for _ in values)

    def table():
        return [[rng.choice(values) for _ in values] for _ in values]

    return Matrix.build(matrix_id, size, designated, neg,
                        table(), table(), table())
