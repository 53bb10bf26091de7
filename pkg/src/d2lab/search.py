"""Backtracking search for matrices separating axiom schemes.

Given a size, the search enumerates designated sets, then negation
tables, then fills the three binary tables cell by cell, looking for
matrices that keep every requested scheme designated (with detachment
sound) while giving at least one non-designated value to every scheme
marked for refutation.

Cells are filled implication table first, then disjunction, then
discussive conjunction, row-major, candidate values ascending.
Detachment and the implication-only schemes constrain the implication
table directly, so filling it first kills dead branches earliest;
within each later table, most instances become decidable the moment
their cell is assigned.

Pruning state per scheme instance is a "possible values" bit mask:
assigned cells contribute their value, open cells everything detachment
allows them.  Masks only shrink as cells fill, so an instance whose
mask falls inside the designated set is settled for good, one whose
mask misses the designated set entirely refutes (or, for a scheme being
validated, kills the branch).
"""

from __future__ import annotations

import hashlib
import itertools
import time
from dataclasses import dataclass
from typing import Callable, Iterator, Union

from .axioms import axiom_scheme
from .formula import Atom, DConj, DImp, Formula, MetaVar, Neg, Or, leaf_names
from .matrix import Matrix


class SearchError(Exception):
    """The search constraints are malformed or unsupported."""


class _Stop(Exception):
    pass


class _Budget(Exception):
    pass


@dataclass(frozen=True)
class SearchConstraints:
    """What the emitted matrices must satisfy.

    ``validate`` and ``refute`` hold axiom ids; every emitted matrix
    keeps each validated scheme designated under all assignments,
    is detachment-sound, and refutes each listed target.  ``designated``
    and ``neg`` pin those components instead of searching over them.
    ``budget`` is in seconds, checked between cell assignments.
    """

    size: int
    validate: tuple[str, ...] = ()
    refute: tuple[str, ...] = ()
    designated: frozenset[int] | None = None
    neg: tuple[int, ...] | None = None
    prune_isomorphic: bool = False
    limit: int | None = None
    budget: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "validate", tuple(self.validate))
        object.__setattr__(self, "refute", tuple(self.refute))
        if not isinstance(self.size, int) or self.size < 1:
            raise SearchError(f"size must be a positive integer, got {self.size!r}")
        for axiom_id in self.validate + self.refute:
            try:
                axiom_scheme(axiom_id)
            except KeyError:
                raise SearchError(f"unknown axiom id {axiom_id!r}") from None
        if self.designated is not None:
            designated = frozenset(self.designated)
            if not designated or not all(
                    v in range(1, self.size + 1) for v in designated):
                raise SearchError(
                    f"fixed designated set must be a nonempty subset of "
                    f"1..{self.size}")
            object.__setattr__(self, "designated", designated)
        if self.neg is not None:
            neg = tuple(self.neg)
            if len(neg) != self.size or not all(
                    v in range(1, self.size + 1) for v in neg):
                raise SearchError(
                    f"fixed negation table must list {self.size} values in "
                    f"1..{self.size}")
            object.__setattr__(self, "neg", neg)
        if self.limit is not None and self.limit < 0:
            raise SearchError("limit must be nonnegative")
        if self.budget is not None and self.budget <= 0:
            raise SearchError("budget must be positive")


@dataclass(frozen=True)
class Termination:
    """Final stream item: why the search stopped.

    ``exhausted`` means the constraint space was fully explored;
    ``limit`` and ``budget`` mean truncation, so absence of results
    proves nothing.
    """

    reason: str
    count: int
    elapsed: float


@dataclass(frozen=True)
class PartialMatrix:
    """A snapshot of the table-filling state; 0 marks an open cell.

    Cells are ordered implication, disjunction, conjunction, each
    row-major, matching the fill order.
    """

    size: int
    designated: frozenset[int]
    neg: tuple[int, ...]
    cells: tuple[int, ...]

    def completions(self) -> Iterator[Matrix]:
        """Every total extension, for brute-force cross-checks."""
        open_cells = [i for i, v in enumerate(self.cells) if v == 0]
        filled = list(self.cells)
        for combo in itertools.product(range(1, self.size + 1),
                                       repeat=len(open_cells)):
            for i, v in zip(open_cells, combo):
                filled[i] = v
            yield _matrix_from_cells(self.size, self.designated, self.neg, filled)


def _content_id(size, designated, neg, cells) -> str:
    text = f"{size};{sorted(designated)};{neg};{tuple(cells)}"
    return "m" + hashlib.sha1(text.encode()).hexdigest()[:12]


def _matrix_from_cells(size, designated, neg, cells) -> Matrix:
    nn = size * size
    def rows(base):
        return tuple(tuple(cells[base + i * size + j] for j in range(size))
                     for i in range(size))
    return Matrix(
        matrix_id=_content_id(size, designated, neg, cells),
        size=size,
        designated=frozenset(designated),
        neg=tuple(neg),
        or_table=rows(nn),
        dand_table=rows(2 * nn),
        dimp_table=rows(0),
    )


def _cells_from_matrix(m: Matrix) -> list[int]:
    flat = []
    for table in (m.dimp_table, m.or_table, m.dand_table):
        for row in table:
            flat.extend(row)
    return flat


# ---------------------------------------------------------------------------
# Instance compilation
# ---------------------------------------------------------------------------
#
# An instance is a scheme with concrete values at the leaves.  It
# compiles to a postfix program over three instructions: push a value
# mask, map a mask through negation, or look up a (still fillable)
# table.  Table instructions carry the cell-block base; which cell gets
# read depends on the operand values at run time.

def _compile_instance(scheme: Formula, values: dict[str, int],
                      neg: tuple[int, ...], n: int) -> tuple[list[tuple], int]:
    nn = n * n
    base_of = {DImp: 0, Or: nn, DConj: 2 * nn}
    program: list[tuple] = []
    kinds = 0

    def emit(node: Formula) -> int | None:
        """Emit code; return a constant value when one is known."""
        nonlocal kinds
        if isinstance(node, (Atom, MetaVar)):
            return values[node.name]
        if isinstance(node, Neg):
            inner = emit(node.child)
            if inner is not None:
                return neg[inner - 1]
            program.append(("neg",))
            return None
        base = base_of[type(node)]
        left = emit(node.left)
        if left is not None:
            program.append(("mask", 1 << (left - 1)))
        right = emit(node.right)
        if right is not None:
            program.append(("mask", 1 << (right - 1)))
        program.append(("table", base))
        kinds |= 1 << (base // nn)
        return None

    root = emit(scheme)
    if root is not None:
        program.append(("mask", 1 << (root - 1)))
    return program, kinds


def _possible_mask(program, cells, allowed, n, neg_map) -> tuple[int, int, bool]:
    """Values the instance can still take, as a bit mask.

    Also reports which open cells the evaluation read: returns
    ``(mask, open_cell, multiple)`` where ``open_cell`` is -1 when every
    lookup hit an assigned cell and ``multiple`` flags more than one
    distinct open cell.  A single-open-cell instance is a constraint on
    just that cell and can be folded into its allowed mask.
    """
    stack: list[int] = []
    push = stack.append
    pop = stack.pop
    open_cell = -1
    multiple = False
    for op in program:
        tag = op[0]
        if tag == "mask":
            push(op[1])
        elif tag == "neg":
            push(neg_map[pop()])
        else:
            base = op[1]
            bm = pop()
            am = pop()
            out = 0
            a = am
            while a:
                abit = a & -a
                a ^= abit
                row = base + (abit.bit_length() - 1) * n
                b = bm
                while b:
                    bbit = b & -b
                    b ^= bbit
                    cell = row + bbit.bit_length() - 1
                    v = cells[cell]
                    if v:
                        out |= 1 << (v - 1)
                    else:
                        out |= allowed[cell]
                        if cell != open_cell:
                            if open_cell >= 0:
                                multiple = True
                            open_cell = cell
            push(out)
    return stack[-1], open_cell, multiple


# ---------------------------------------------------------------------------
# Isomorphism handling
# ---------------------------------------------------------------------------

def _stabilizer_perms(n: int, designated: frozenset[int],
                      fixed_neg: tuple[int, ...] | None) -> list[tuple[int, ...]]:
    """Value permutations preserving the designated set (and a pinned
    negation table, when there is one)."""
    perms = []
    for perm in itertools.permutations(range(1, n + 1)):
        if any((perm[v - 1] in designated) != (v in designated)
               for v in range(1, n + 1)):
            continue
        if fixed_neg is not None and any(
                perm[fixed_neg[v - 1] - 1] != fixed_neg[perm[v - 1] - 1]
                for v in range(1, n + 1)):
            continue
        perms.append(perm)
    return perms


def _permuted_key(n, designated, neg, cells, perm):
    inv = [0] * n
    for i, image in enumerate(perm):
        inv[image - 1] = i + 1
    dmask = sum(1 << (v - 1) for v in designated)  # stable under perm
    new_neg = tuple(perm[neg[inv[w] - 1] - 1] for w in range(n))
    nn = n * n
    blocks = []
    for base in (nn, 2 * nn, 0):  # or, dand, dimp: the documented key order
        blocks.append(tuple(
            perm[cells[base + (inv[i - 1] - 1) * n + (inv[j - 1] - 1)] - 1]
            for i in range(1, n + 1) for j in range(1, n + 1)))
    return (dmask, new_neg) + tuple(blocks)


def canonicalize(m: Matrix) -> Matrix:
    """The least relabeling of ``m`` under designated-preserving value
    permutations.

    The comparison key is (designated mask, negation, disjunction,
    conjunction, implication), tables flattened row-major.  Idempotent;
    the result carries a content-derived matrix id.
    """
    cells = _cells_from_matrix(m)
    best = None
    for perm in _stabilizer_perms(m.size, m.designated, None):
        key = _permuted_key(m.size, m.designated, m.neg, cells, perm)
        if best is None or key < best:
            best = key
    _, neg, or_flat, dand_flat, dimp_flat = best
    flat = list(dimp_flat) + list(or_flat) + list(dand_flat)
    return _matrix_from_cells(m.size, m.designated, neg, flat)


def _is_orbit_min(n, designated, neg, cells, perms) -> bool:
    identity = tuple(range(1, n + 1))
    own = _permuted_key(n, designated, neg, cells, identity)
    for perm in perms:
        if perm == identity:
            continue
        if _permuted_key(n, designated, neg, cells, perm) < own:
            return False
    return True


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def naive_enumerate(n: int) -> list[Matrix]:
    """Every matrix of size ``n``, unfiltered; a brute-force oracle.

    Only sizes 1 and 2 are allowed: the count is
    (2^n - 1) * n^n * n^(3n^2), already 49152 at n=2.
    """
    if not isinstance(n, int) or not 1 <= n <= 2:
        raise SearchError("naive enumeration is limited to sizes 1 and 2")
    values = range(1, n + 1)
    out = []
    for dmask in range(1, 1 << n):
        designated = frozenset(v for v in values if dmask >> (v - 1) & 1)
        for neg in itertools.product(values, repeat=n):
            for cells in itertools.product(values, repeat=3 * n * n):
                out.append(_matrix_from_cells(n, designated, neg, list(cells)))
    return out


def _designated_choices(c: SearchConstraints) -> Iterator[frozenset[int]]:
    if c.designated is not None:
        yield c.designated
        return
    for dmask in range(1, 1 << c.size):
        yield frozenset(v for v in range(1, c.size + 1) if dmask >> (v - 1) & 1)


def _neg_choices(c: SearchConstraints) -> Iterator[tuple[int, ...]]:
    if c.neg is not None:
        yield c.neg
        return
    yield from itertools.product(range(1, c.size + 1), repeat=c.size)


def find_matrices(
    constraints: SearchConstraints,
    on_reject: Callable[[PartialMatrix], None] | None = None,
) -> Iterator[Union[Matrix, Termination]]:
    """Stream every matrix satisfying the constraints, then a
    :class:`Termination` telling whether the space was exhausted.

    Emission order is deterministic: designated sets by ascending bit
    mask, negation tables lexicographically, table cells in fill order
    with values ascending.  With ``prune_isomorphic`` only the least
    member of each isomorphism orbit is emitted.  ``on_reject`` is a
    diagnostics hook called with each partial assignment the propagator
    rejects.
    """
    c = constraints
    validate = [(axiom_id, axiom_scheme(axiom_id)) for axiom_id in c.validate]
    refute = [(axiom_id, axiom_scheme(axiom_id)) for axiom_id in c.refute]
    start = time.monotonic()
    emitted = 0
    reason = "exhausted"
    try:
        if c.limit is not None and c.limit == 0:
            raise _Stop
        for designated in _designated_choices(c):
            for neg in _neg_choices(c):
                for m in _branch(c, validate, refute, designated, neg,
                                 start, on_reject):
                    yield m
                    emitted += 1
                    if c.limit is not None and emitted >= c.limit:
                        raise _Stop
    except _Stop:
        reason = "limit"
    except _Budget:
        reason = "budget"
    yield Termination(reason, emitted, time.monotonic() - start)


def _branch(c, validate, refute, designated, neg, start, on_reject):
    """Search one (designated set, negation table) branch."""
    n = c.size
    nn = n * n
    ncells = 3 * nn
    full = (1 << n) - 1
    dmask = sum(1 << (v - 1) for v in designated)
    neg_map = [0] * (1 << n)
    for mask in range(1 << n):
        acc = 0
        for v in range(1, n + 1):
            if mask >> (v - 1) & 1:
                acc |= 1 << (neg[v - 1] - 1)
        neg_map[mask] = acc

    # Detachment, statically: a designated antecedent and undesignated
    # consequent forbid a designated implication value.
    allowed = [full] * ncells
    for i in range(n):
        for j in range(n):
            if (i + 1) in designated and (j + 1) not in designated:
                allowed[i * n + j] &= ~dmask

    def instances(scheme):
        names = leaf_names(scheme)
        out = []
        for combo in itertools.product(range(1, n + 1), repeat=len(names)):
            out.append(_compile_instance(scheme, dict(zip(names, combo)), neg, n))
        return out

    val_programs = []
    for _, scheme in validate:
        val_programs.extend(instances(scheme))
    ref_programs = [instances(scheme) for _, scheme in refute]

    perms = (_stabilizer_perms(n, designated, c.neg)
             if c.prune_isomorphic else None)

    cells = [0] * ncells

    def snapshot() -> PartialMatrix:
        return PartialMatrix(n, designated, neg, tuple(cells))

    def restore(undo):
        for cell, old in undo:
            allowed[cell] = old

    def evaluate(kind, active, refstate, undo):
        """Re-derive instance states after an assignment.

        ``kind`` is the table block just touched (None = sweep
        everything, done at phase boundaries); instances not reading
        that block carry over untouched.  An instance whose value hinges
        on a single open cell is folded into that cell's allowed mask
        (recorded in ``undo``) and retired.  Returns None on
        contradiction: a validated instance that can no longer be
        designated, a cell left with no allowed value, or a refutation
        target none of whose instances can leave the designated set.
        """
        new_active = []
        for idx in active:
            program, kinds = val_programs[idx]
            if kind is not None and not kinds >> kind & 1:
                new_active.append(idx)
                continue
            mask, open_cell, multiple = _possible_mask(
                program, cells, allowed, n, neg_map)
            if not mask & dmask:
                return None
            if not mask & ~dmask & full:
                continue
            if multiple or open_cell < 0:
                new_active.append(idx)
                continue
            # Single open cell: keep only its values under which the
            # instance stays designatable; retire the instance if every
            # kept value settles it outright.
            candidates = allowed[open_cell]
            keep = 0
            settled = True
            bits = candidates
            while bits:
                bit = bits & -bits
                bits ^= bit
                cells[open_cell] = bit.bit_length()
                sub = _possible_mask(program, cells, allowed, n, neg_map)[0]
                if not sub & dmask:
                    pass
                elif not sub & ~dmask & full:
                    keep |= bit
                else:
                    keep |= bit
                    settled = False
            cells[open_cell] = 0
            if keep != candidates:
                undo.append((open_cell, candidates))
                allowed[open_cell] = keep
                if not keep:
                    return None
            if not settled:
                new_active.append(idx)
        new_ref = []
        for t, (satisfied, ractive) in enumerate(refstate):
            if satisfied:
                new_ref.append((True, ()))
                continue
            programs = ref_programs[t]
            sat = False
            still = []
            for idx in ractive:
                program, kinds = programs[idx]
                if kind is not None and not kinds >> kind & 1:
                    still.append(idx)
                    continue
                mask = _possible_mask(program, cells, allowed, n, neg_map)[0]
                if not mask & dmask:
                    sat = True
                    break
                if mask & ~dmask & full:
                    still.append(idx)
            if sat:
                new_ref.append((True, ()))
            elif still:
                new_ref.append((False, tuple(still)))
            else:
                return None
        return new_active, new_ref

    state = evaluate(None,
                     list(range(len(val_programs))),
                     [(False, tuple(range(len(programs))))
                      for programs in ref_programs],
                     [])
    if state is None:
        if on_reject is not None:
            on_reject(snapshot())
        return

    def go(depth, active, refstate):
        if c.budget is not None and time.monotonic() - start > c.budget:
            raise _Budget
        boundary_undo = None
        if depth and depth < ncells and depth % nn == 0:
            # Entering a new table: sweep every instance once, so
            # constraints straddling the boundary collapse into cell
            # masks before this block is filled.
            boundary_undo = []
            state = evaluate(None, active, refstate, boundary_undo)
            if state is None:
                restore(boundary_undo)
                if on_reject is not None:
                    on_reject(snapshot())
                return
            active, refstate = state
        try:
            if depth == ncells:
                if perms is None or _is_orbit_min(n, designated, neg,
                                                  cells, perms):
                    yield _matrix_from_cells(n, designated, neg, cells)
                return
            kind = depth // nn
            candidates = allowed[depth]
            while candidates:
                bit = candidates & -candidates
                candidates ^= bit
                cells[depth] = bit.bit_length()
                undo = []
                state = evaluate(kind, active, refstate, undo)
                if state is None:
                    if on_reject is not None:
                        on_reject(snapshot())
                else:
                    yield from go(depth + 1, state[0], state[1])
                restore(undo)
                cells[depth] = 0
        finally:
            if boundary_undo:
                restore(boundary_undo)

    yield from go(0, state[0], state[1])
