"""Backtracking enumeration against the brute-force oracle."""

import itertools
import random

import pytest

from d2lab.axioms import axiom_scheme
from d2lab.fixtures import paper_matrix
from d2lab.matrix import Matrix, check_mp, check_scheme
from d2lab.search import (
    PartialMatrix, SearchConstraints, SearchError, Termination, canonicalize,
    find_matrices, naive_enumerate,
)


def run(constraints, **kwargs):
    stream = list(find_matrices(constraints, **kwargs))
    assert isinstance(stream[-1], Termination)
    return stream[:-1], stream[-1]


def naive_filter(validate, refute):
    keep = []
    for m in naive_enumerate(2):
        if not check_mp(m).passed:
            continue
        if not all(check_scheme(m, axiom_scheme(a)).passed for a in validate):
            continue
        if any(check_scheme(m, axiom_scheme(a)).passed for a in refute):
            continue
        keep.append(m)
    return keep


def test_constraint_validation():
    with pytest.raises(SearchError):
        SearchConstraints(0, (), ())
    with pytest.raises(SearchError):
        SearchConstraints(2, ("C99",), ())
    with pytest.raises(SearchError):
        SearchConstraints(2, (), (), designated=frozenset({3}))
    with pytest.raises(SearchError):
        SearchConstraints(2, (), (), neg=(1, 2, 1))
    with pytest.raises(SearchError):
        SearchConstraints(2, (), (), limit=-1)
    with pytest.raises(SearchError):
        SearchConstraints(2, (), (), budget=-1.0)
    # a zero limit is legal and emits nothing
    got, termination = run(SearchConstraints(2, (), (), limit=0))
    assert got == [] and termination.reason == "limit"


def test_naive_enumerate_counts():
    assert len(naive_enumerate(1)) == 1
    # 3 designated choices x 4 neg rows x (2^4)^3 table fillings
    assert len(naive_enumerate(2)) == 49152
    with pytest.raises(SearchError):
        naive_enumerate(3)


def test_matches_naive_filter_at_n2():
    expected = naive_filter(("C1",), ("DDK10",))
    got, termination = run(SearchConstraints(2, ("C1",), ("DDK10",)))
    assert termination.reason == "exhausted"
    assert set(got) == set(expected)
    assert len(got) == len(expected) == 512
    # detachment is enforced even with no refutation targets
    got, _ = run(SearchConstraints(2, ("C2",), ()))
    assert set(got) == set(naive_filter(("C2",), ()))
    assert all(check_mp(m).passed for m in got)


def test_pruned_stream_is_canonical_image():
    constraints = SearchConstraints(2, ("C1",), ("DDK10",),
                                    prune_isomorphic=True)
    pruned, termination = run(constraints)
    assert termination.reason == "exhausted"
    unpruned, _ = run(SearchConstraints(2, ("C1",), ("DDK10",)))
    assert set(pruned) == {canonicalize(m) for m in unpruned}


def test_emitted_matrices_satisfy_the_constraints():
    got, _ = run(SearchConstraints(2, ("C1", "C5"), ("DDK12",)))
    for m in got:
        assert check_mp(m).passed
        assert check_scheme(m, axiom_scheme("C1")).passed
        assert check_scheme(m, axiom_scheme("C5")).passed
        assert not check_scheme(m, axiom_scheme("DDK12")).passed


def test_deterministic_order():
    first, _ = run(SearchConstraints(2, ("C1",), ("DDK10",)))
    second, _ = run(SearchConstraints(2, ("C1",), ("DDK10",)))
    assert [m.matrix_id for m in first] == [m.matrix_id for m in second]


def test_fixed_designated_and_neg_are_respected():
    constraints = SearchConstraints(2, ("C1",), (),
                                    designated=frozenset({2}), neg=(2, 1))
    got, _ = run(constraints)
    assert got
    for m in got:
        assert m.designated == frozenset({2}) and m.neg == (2, 1)


def test_termination_markers():
    got, termination = run(SearchConstraints(2, ("C1",), (), limit=5))
    assert len(got) == 5 and termination.reason == "limit"
    assert termination.count == 5
    _, termination = run(SearchConstraints(1, ("C1",), ("DDK10",)))
    assert termination.reason == "exhausted" and termination.count == 0
    got, termination = run(SearchConstraints(1, ("C1",), ()))
    assert len(got) == 1 and termination.reason == "exhausted"
    assert termination.elapsed >= 0.0


def test_budget_marker():
    nine = tuple(f"C{i}" for i in range(1, 10))
    _, termination = run(SearchConstraints(3, nine, ("DDK10",), budget=0.05))
    assert termination.reason == "budget"


def test_rejected_partials_have_no_passing_completion():
    rejected = []
    constraints = SearchConstraints(2, ("C1",), ("DDK10",))
    run(constraints, on_reject=rejected.append)
    assert rejected
    rng = random.Random(17)
    sample = rng.sample(rejected, min(100, len(rejected)))
    for partial in sample:
        assert isinstance(partial, PartialMatrix)
        for m in partial.completions():
            ok = (check_mp(m).passed
                  and check_scheme(m, axiom_scheme("C1")).passed
                  and not check_scheme(m, axiom_scheme("DDK10")).passed)
            assert not ok


def test_partial_matrix_completions_count():
    cells = (1, 2, 0, 1) + (1,) * 4 + (0,) * 4   # five open cells
    partial = PartialMatrix(2, frozenset({1}), (2, 1), cells)
    completions = list(partial.completions())
    assert len(completions) == 2 ** 5
    assert len(set(completions)) == 2 ** 5
    for m in completions:
        assert isinstance(m, Matrix)
        assert m.dimp_of(1, 1) == 1 and m.dimp_of(1, 2) == 2


def test_canonicalize_properties():
    rng = random.Random(404)
    from helpers import random_matrix
    for _ in range(60):
        m = random_matrix(rng, rng.randint(2, 3))
        canon = canonicalize(m)
        assert canonicalize(canon) == canon
        assert canon.designated == m.designated
        # permuting values (designated-set preserving) cannot change the form
        for perm in _stabilizing_permutations(m):
            assert canonicalize(_apply(m, perm)) == canon


def _stabilizing_permutations(m):
    for perm in itertools.permutations(m.values):
        if {perm[v - 1] for v in m.designated} == set(m.designated):
            yield perm


def _apply(m, perm):
    """Rename value v to perm[v-1] throughout."""
    inverse = [0] * m.size
    for v in m.values:
        inverse[perm[v - 1] - 1] = v

    def table(of):
        return [[perm[of(inverse[i - 1], inverse[j - 1]) - 1]
                 for j in m.values] for i in m.values]

    neg = [perm[m.neg[inverse[v - 1] - 1] - 1] for v in m.values]
    return Matrix.build("perm", m.size, {perm[v - 1] for v in m.designated},
                        neg, table(m.or_of), table(m.dand_of),
                        table(m.dimp_of))


def test_canonical_p1_pinned():
    assert canonicalize(paper_matrix("P1")).matrix_id == "md1f75046a5fa"
    assert canonicalize(paper_matrix("P5")).matrix_id == "mff4042b93af1"


def test_content_derived_ids():
    one, _ = run(SearchConstraints(2, ("C1",), (), limit=1))
    again, _ = run(SearchConstraints(2, ("C1",), (), limit=1))
    assert one[0].matrix_id == again[0].matrix_id
    assert one[0].matrix_id.startswith("m")
