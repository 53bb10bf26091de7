"""Translation into S5 and a decision procedure by model enumeration.

The translation ``tau`` leaves negation and disjunction alone, renders
discussive implication as "possibly-antecedent implies consequent", and
attaches a possibility operator to one operand of discussive
conjunction (the right one by default, switchable).  A discussive
formula counts as valid when ``<>tau(f)`` holds at every world of every
S5 model.

In S5 the accessibility relation is an equivalence, and a formula is
satisfiable over some equivalence class iff it is satisfiable where
every world sees every world.  So validity only needs the "universal"
models: nonempty sets of distinct propositional valuations over the
formula's atoms.  Over k atoms there are 2^(2^k) - 1 of those, which is
exhaustively enumerable for small k.  Valuations are packed into bit
positions and the extension of each subformula (the set of worlds where
it holds) is computed as an integer mask, one model at a time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .formula import (
    And, Atom, Box, DConj, Dia, DImp, Formula, Iff, Imp, MetaVar, Neg, Or,
    atom_names, is_discursive, is_ground, is_modal, subformulas,
)

DCONJ_VARIANTS = ("right", "left")
DEFAULT_ATOM_LIMIT = 4


class ModalError(Exception):
    """Base class for translation and model errors."""


class AtomLimitError(ModalError):
    """Too many atoms to enumerate; the question is undecided, not settled."""


class ModelError(ModalError):
    """A Kripke model violates its invariants."""


class PreconditionError(ModalError):
    """An operation's stated precondition does not hold."""


# ---------------------------------------------------------------------------
# Translation
# ---------------------------------------------------------------------------

def translate(f: Formula, dconj: str = "right") -> Formula:
    """Map a ground discussive formula into the modal language.

    Atoms, negation and disjunction pass through unchanged.
    ``a => b`` becomes ``<>a' -> b'``.  ``a ^ b`` becomes ``a' & <>b'``
    with ``dconj="right"`` and ``<>a' & b'`` with ``dconj="left"``.
    """
    if dconj not in DCONJ_VARIANTS:
        raise ValueError(f"dconj must be one of {DCONJ_VARIANTS}, got {dconj!r}")
    if isinstance(f, MetaVar):
        raise PreconditionError(
            f"cannot translate metavariable {f.name}; instantiate the scheme first")
    if isinstance(f, Atom):
        return f
    if isinstance(f, Neg):
        return Neg(translate(f.child, dconj))
    if isinstance(f, Or):
        return Or(translate(f.left, dconj), translate(f.right, dconj))
    if isinstance(f, DImp):
        return Imp(Dia(translate(f.left, dconj)), translate(f.right, dconj))
    if isinstance(f, DConj):
        left = translate(f.left, dconj)
        right = translate(f.right, dconj)
        if dconj == "right":
            return And(left, Dia(right))
        return And(Dia(left), right)
    raise PreconditionError(
        f"{type(f).__name__} is not a discussive connective")


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class S5UniversalModel:
    """A nonempty set of distinct valuations, all mutually accessible.

    ``worlds[i][j]`` is the truth of ``atoms[j]`` at world ``i``.
    """

    atoms: tuple[str, ...]
    worlds: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        if not self.worlds:
            raise ModelError("a model needs at least one world")
        if len(set(self.atoms)) != len(self.atoms):
            raise ModelError("duplicate atom names")
        if any(len(w) != len(self.atoms) for w in self.worlds):
            raise ModelError("every valuation must cover every atom")
        if len(set(self.worlds)) != len(self.worlds):
            raise ModelError("universal-model worlds must be distinct valuations")

    def to_explicit(self) -> "ExplicitKripkeModel":
        """The same model with named worlds and the total relation."""
        names = tuple(f"w{i}" for i in range(len(self.worlds)))
        relation = {(a, b) for a in names for b in names}
        valuation = {
            atom: frozenset(names[i] for i, world in enumerate(self.worlds)
                            if world[j])
            for j, atom in enumerate(self.atoms)}
        return ExplicitKripkeModel(names, relation, valuation)

    def describe(self) -> str:
        rows = []
        for world in self.worlds:
            rows.append("{" + ", ".join(
                f"{atom}={'T' if value else 'F'}"
                for atom, value in zip(self.atoms, world)) + "}")
        return "[" + "; ".join(rows) + "]"


class ExplicitKripkeModel:
    """A finite Kripke model whose relation is an equivalence.

    ``worlds`` are distinct names, ``relation`` is a set of name pairs
    (checked for reflexivity, symmetry and transitivity), ``valuation``
    maps each atom to the set of worlds where it is true.
    """

    def __init__(self, worlds, relation, valuation):
        self.worlds: tuple[str, ...] = tuple(worlds)
        self.relation: frozenset[tuple[str, str]] = frozenset(relation)
        self.valuation: dict[str, frozenset[str]] = {
            atom: frozenset(ws) for atom, ws in dict(valuation).items()}
        self._validate()
        self._successors = {
            w: tuple(u for u in self.worlds if (w, u) in self.relation)
            for w in self.worlds}

    def _validate(self) -> None:
        if not self.worlds:
            raise ModelError("a model needs at least one world")
        domain = set(self.worlds)
        if len(domain) != len(self.worlds):
            raise ModelError("duplicate world names")
        for pair in self.relation:
            if pair[0] not in domain or pair[1] not in domain:
                raise ModelError(f"relation mentions unknown world in {pair}")
        for w in domain:
            if (w, w) not in self.relation:
                raise ModelError(f"relation is not reflexive at {w}")
        for (a, b) in self.relation:
            if (b, a) not in self.relation:
                raise ModelError(f"relation is not symmetric at ({a}, {b})")
        for (a, b) in self.relation:
            for c in domain:
                if (b, c) in self.relation and (a, c) not in self.relation:
                    raise ModelError(
                        f"relation is not transitive at ({a}, {b}, {c})")
        for atom, ws in self.valuation.items():
            if not ws <= domain:
                raise ModelError(f"valuation of {atom!r} mentions unknown worlds")

    def successors(self, world: str) -> tuple[str, ...]:
        return self._successors[world]


def eval_explicit(model: ExplicitKripkeModel, world: str, f: Formula) -> bool:
    """Kripke forcing at a world of an explicit model."""
    if world not in model._successors:
        raise ModelError(f"unknown world {world!r}")
    if isinstance(f, Atom):
        try:
            return world in model.valuation[f.name]
        except KeyError:
            raise ModalError(f"model does not value atom {f.name!r}") from None
    if isinstance(f, Neg):
        return not eval_explicit(model, world, f.child)
    if isinstance(f, Or):
        return eval_explicit(model, world, f.left) or eval_explicit(model, world, f.right)
    if isinstance(f, And):
        return eval_explicit(model, world, f.left) and eval_explicit(model, world, f.right)
    if isinstance(f, Imp):
        return (not eval_explicit(model, world, f.left)
                or eval_explicit(model, world, f.right))
    if isinstance(f, Iff):
        return eval_explicit(model, world, f.left) == eval_explicit(model, world, f.right)
    if isinstance(f, Dia):
        return any(eval_explicit(model, u, f.child) for u in model.successors(world))
    if isinstance(f, Box):
        return all(eval_explicit(model, u, f.child) for u in model.successors(world))
    raise ModalError(f"not a modal formula node: {type(f).__name__}")


# ---------------------------------------------------------------------------
# Validity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    """Outcome of a validity check.

    A Valid verdict records how many universal models were enumerated;
    an Invalid one carries the first falsifying model (lowest world-set
    mask, then lowest world) and the index of the refuting world.
    """

    valid: bool
    models_checked: int
    countermodel: S5UniversalModel | None = None
    world_index: int | None = None

    def describe(self) -> str:
        if self.valid:
            return f"Valid (all {self.models_checked} universal models)"
        return (f"Invalid at world {self.world_index} of "
                f"{self.countermodel.describe()}")


def _compile(f: Formula) -> list[tuple]:
    """Postorder program computing extensions as bit masks."""
    program: list[tuple] = []
    todo: list[tuple[Formula, bool]] = [(f, False)]
    while todo:
        node, expanded = todo.pop()
        if isinstance(node, Atom):
            program.append(("atom", node.name))
            continue
        if not expanded:
            todo.append((node, True))
            if isinstance(node, (Neg, Dia, Box)):
                todo.append((node.child, False))
            else:
                todo.append((node.right, False))
                todo.append((node.left, False))
            continue
        program.append((type(node).__name__.lower(),))
    return program


def _extension(program: list[tuple], atom_mask: dict[str, int],
               model: int, full: int) -> int:
    """Worlds of ``model`` (a mask over all valuations) where f holds."""
    stack: list[int] = []
    push = stack.append
    pop = stack.pop
    for instr in program:
        op = instr[0]
        if op == "atom":
            push(atom_mask[instr[1]] & model)
        elif op == "neg":
            push(model & ~pop())
        elif op == "or":
            b = pop()
            push(pop() | b)
        elif op == "and":
            b = pop()
            push(pop() & b)
        elif op == "imp":
            b = pop()
            push((model & ~pop()) | b)
        elif op == "iff":
            b = pop()
            push(model & ~(pop() ^ b))
        elif op == "dia":
            push(model if pop() else 0)
        else:  # box
            push(model if pop() == model else 0)
    (result,) = stack
    return result


def _universal_model(atoms: tuple[str, ...], model_mask: int) -> S5UniversalModel:
    k = len(atoms)
    worlds = []
    for v in range(1 << k):
        if model_mask >> v & 1:
            worlds.append(tuple(bool(v >> j & 1) for j in range(k)))
    return S5UniversalModel(atoms, tuple(worlds))


def s5_valid(f: Formula, atom_limit: int = DEFAULT_ATOM_LIMIT) -> Verdict:
    """Decide S5 validity by enumerating every universal model.

    Raises :class:`AtomLimitError` beyond ``atom_limit`` atoms rather
    than deciding anything: 2^(2^k) - 1 models stop being enumerable.
    """
    if not is_modal(f):
        raise PreconditionError("s5_valid expects a modal formula")
    atoms = tuple(sorted(atom_names(f)))
    if len(atoms) > atom_limit:
        raise AtomLimitError(
            f"{len(atoms)} atoms exceed the enumeration limit of {atom_limit}; "
            f"validity undecided at this budget")
    k = len(atoms)
    n_val = 1 << k
    atom_mask = {
        atom: sum(1 << v for v in range(n_val) if v >> j & 1)
        for j, atom in enumerate(atoms)}
    program = _compile(f)
    full = (1 << n_val) - 1
    checked = 0
    for model in range(1, full + 1):
        checked += 1
        ext = _extension(program, atom_mask, model, full)
        if ext != model:
            failing = model & ~ext
            lowest = (failing & -failing).bit_length() - 1
            world_index = bin(model & ((1 << lowest) - 1)).count("1")
            return Verdict(False, checked,
                           countermodel=_universal_model(atoms, model),
                           world_index=world_index)
    return Verdict(True, checked)


def extension_mask(f: Formula, atoms: tuple[str, ...], model_mask: int) -> int:
    """Extension of ``f`` in one universal model, for bulk evaluation.

    ``model_mask`` selects valuations over ``atoms`` (bit j of valuation
    v gives the truth of ``atoms[j]``); the result masks the worlds of
    the model where ``f`` holds.
    """
    k = len(atoms)
    n_val = 1 << k
    atom_mask = {
        atom: sum(1 << v for v in range(n_val) if v >> j & 1)
        for j, atom in enumerate(atoms)}
    return _extension(_compile(f), atom_mask, model_mask, (1 << n_val) - 1)


def d2_valid(f: Formula, dconj: str = "right", outer_diamond: bool = True,
             atom_limit: int = DEFAULT_ATOM_LIMIT) -> Verdict:
    """Validity of a ground discussive formula.

    Decided as S5 validity of ``<>tau(f)``; the outer possibility
    operator can be dropped for sensitivity comparisons.
    """
    if not is_discursive(f):
        raise PreconditionError("d2_valid expects a discursive formula")
    if not is_ground(f):
        raise PreconditionError("d2_valid expects a ground formula; "
                                "instantiate schemes first")
    translated = translate(f, dconj)
    if outer_diamond:
        translated = Dia(translated)
    return s5_valid(translated, atom_limit)


# ---------------------------------------------------------------------------
# Tautological equivalence and the possibility-implication property
# ---------------------------------------------------------------------------

def _truth(f: Formula, assignment: dict[str, bool]) -> bool:
    if isinstance(f, Atom):
        return assignment[f.name]
    if isinstance(f, Neg):
        return not _truth(f.child, assignment)
    if isinstance(f, Or):
        return _truth(f.left, assignment) or _truth(f.right, assignment)
    if isinstance(f, And):
        return _truth(f.left, assignment) and _truth(f.right, assignment)
    if isinstance(f, Imp):
        return not _truth(f.left, assignment) or _truth(f.right, assignment)
    if isinstance(f, Iff):
        return _truth(f.left, assignment) == _truth(f.right, assignment)
    raise PreconditionError(f"not truth-functional: {type(f).__name__}")


def taut_equiv(phi: Formula, psi: Formula) -> bool:
    """Truth-table equivalence of two modality-free formulas."""
    for f in (phi, psi):
        if any(isinstance(node, (Dia, Box)) for node in subformulas(f)):
            raise PreconditionError("taut_equiv expects modality-free formulas")
        if not is_modal(f):
            raise PreconditionError("taut_equiv expects propositional formulas")
    atoms = sorted(set(atom_names(phi)) | set(atom_names(psi)))
    for truths in itertools.product((False, True), repeat=len(atoms)):
        assignment = dict(zip(atoms, truths))
        if _truth(phi, assignment) != _truth(psi, assignment):
            return False
    return True


def check_prop31(phi: Formula, psi: Formula,
                 atom_limit: int = DEFAULT_ATOM_LIMIT) -> bool:
    """Is ``<>(<>phi' -> psi')`` S5-valid, for tautologically equivalent
    negation-disjunction formulas?

    ``phi`` and ``psi`` must use only ``~``, ``|`` and atoms (so their
    translations are themselves), and must be tautologically
    equivalent; those are preconditions, not part of the answer.
    """
    for f in (phi, psi):
        if not is_ground(f) or not all(
                isinstance(node, (Atom, Neg, Or)) for node in subformulas(f)):
            raise PreconditionError(
                "expected ground formulas over ~, | and atoms only")
    t_phi = translate(phi)
    t_psi = translate(psi)
    if not taut_equiv(t_phi, t_psi):
        raise PreconditionError("the two formulas are not tautologically equivalent")
    return s5_valid(Dia(Imp(Dia(t_phi), t_psi)), atom_limit).valid


# ---------------------------------------------------------------------------
# Axiom classification
# ---------------------------------------------------------------------------

# Published classification marks for the D axioms: "+" claimed valid,
# "-" claimed invalid, "?" left open, None not listed at all.
CLAIMED_D2_STATUS: dict[str, str | None] = {
    "DDK10": "+",
    "DDK11": None,
    "DDK12": "-",
    "DDK13": "-",
    "DDK14": "-",
    "DDK15": "+",
    "DDK16": "-",
    "DDK17": "+",
    "DDK18": "?",
    "DDK19": "-",
    "DDK20": "+",
    "DDK21": "?",
    "DDK22": "-",
}


@dataclass(frozen=True)
class ClassificationRow:
    """One axiom's computed verdict next to its published mark.

    ``verdict`` uses the default right-possibility conjunction;
    ``verdict_left`` redoes the check under the left variant so
    conjunction-sensitive rows show both.  ``status`` is ``agrees`` or
    ``finding`` against a definite mark, ``resolved`` for a mark of
    ``?``, and ``unlisted`` when there is no mark.
    """

    axiom_id: str
    verdict: Verdict
    verdict_left: Verdict
    claimed: str | None
    status: str

    @property
    def certificate(self) -> str:
        return self.verdict.describe()


def _status(claimed: str | None, verdict: Verdict) -> str:
    if claimed is None:
        return "unlisted"
    if claimed == "?":
        return "resolved"
    return "agrees" if (claimed == "+") == verdict.valid else "finding"


def classify_d_axioms(atom_limit: int = DEFAULT_ATOM_LIMIT) -> list[ClassificationRow]:
    """Decide validity for the classified D axioms and compare marks."""
    from .axioms import SYSTEM_D
    from .formula import canonical_instance

    rows = []
    for axiom_id in CLAIMED_D2_STATUS:
        instance = canonical_instance(SYSTEM_D.scheme(axiom_id))
        verdict = d2_valid(instance, "right", atom_limit=atom_limit)
        verdict_left = d2_valid(instance, "left", atom_limit=atom_limit)
        rows.append(ClassificationRow(
            axiom_id=axiom_id,
            verdict=verdict,
            verdict_left=verdict_left,
            claimed=CLAIMED_D2_STATUS[axiom_id],
            status=_status(CLAIMED_D2_STATUS[axiom_id], verdict),
        ))
    return rows


def check_c_axioms(dconj: str = "right",
                   atom_limit: int = DEFAULT_ATOM_LIMIT) -> list[tuple[str, Verdict]]:
    """Validity verdicts for the canonical instances of C1 through C15."""
    from .axioms import SYSTEM_C
    from .formula import canonical_instance

    return [
        (axiom_id, d2_valid(canonical_instance(scheme), dconj,
                            atom_limit=atom_limit))
        for axiom_id, scheme in SYSTEM_C.axioms]
