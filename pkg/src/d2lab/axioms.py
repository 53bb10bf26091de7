"""The two discussive axiom systems under study.

System D has twenty-two schemes (DDK1 through DDK22); system C has
fifteen (C1 through C15).  Both take detachment for ``=>`` as the sole
rule of inference.  Schemes are stored as concrete syntax and parsed on
module import, so a typo fails fast.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import Formula, parse

_D_SOURCE = [
    ("DDK1", "A => (B => A)"),
    ("DDK2", "(A => (B => C)) => ((A => B) => (A => C))"),
    ("DDK3", "((A => B) => A) => A"),
    ("DDK4", "(A ^ B) => A"),
    ("DDK5", "(A ^ B) => B"),
    ("DDK6", "A => (B => (A ^ B))"),
    ("DDK7", "A => (A | B)"),
    ("DDK8", "B => (A | B)"),
    ("DDK9", "(A => C) => ((B => C) => ((A | B) => C))"),
    ("DDK10", "A => ~~A"),
    ("DDK11", "~~A => A"),
    ("DDK12", "~(A | ~A) => B"),
    ("DDK13", "~(A | B) => ~(B | A)"),
    ("DDK14", "~(A | B) => (~B ^ ~A)"),
    ("DDK15", "~(~~A | B) => ~(A | B)"),
    ("DDK16", "~((A | B) => C) => ((~A => B) | C)"),
    ("DDK17", "~((A | B) | C) => ~(A | (B | C))"),
    ("DDK18", "~((A => B) | C) => (A ^ ~(B | C))"),
    ("DDK19", "~((A ^ B) | C) => (A => ~(B | C))"),
    ("DDK20", "~(~(A | B) | C) => (~(~A | C) | ~(~B | C))"),
    ("DDK21", "~(~(A => B) | C) => (A => ~(~B | C))"),
    ("DDK22", "~(~(A ^ B) | C) => (A ^ ~(~B | C))"),
]

_C_SOURCE = [
    ("C1", "A => (B => A)"),
    ("C2", "(A => (B => C)) => ((A => B) => (A => C))"),
    ("C3", "(A ^ B) => A"),
    ("C4", "(A ^ B) => B"),
    ("C5", "A => (B => (A ^ B))"),
    ("C6", "A => (A | B)"),
    ("C7", "B => (A | B)"),
    ("C8", "(A => C) => ((B => C) => ((A | B) => C))"),
    ("C9", "A | (A => B)"),
    ("C10", "~(~A ^ (~~A ^ ~(A | ~A)))"),
    ("C11", "~(~A ^ (~B ^ ~(A | B))) => ~(~A ^ (~B ^ (~C ^ ~(A | (B | C)))))"),
    ("C12", "~(~A ^ (~B ^ (~C ^ ~(A | (B | C))))) => ~(~A ^ (~C ^ (~B ^ ~(A | (C | B)))))"),
    ("C13", "~(~A ^ (~B ^ (~C ^ ~(A | (B | C))))) => ((A | (B | ~C)) => (A | B))"),
    ("C14", "~(~A ^ ~B) => (A | B)"),
    ("C15", "(A | (B | ~B)) => ~(~A ^ ~(B | ~B))"),
]


@dataclass(frozen=True)
class AxiomSystem:
    """An ordered collection of named axiom schemes."""

    system_id: str
    axioms: tuple[tuple[str, Formula], ...]

    @property
    def axiom_ids(self) -> tuple[str, ...]:
        return tuple(axiom_id for axiom_id, _ in self.axioms)

    def scheme(self, axiom_id: str) -> Formula:
        for candidate, scheme in self.axioms:
            if candidate == axiom_id:
                return scheme
        raise KeyError(axiom_id)

    def __contains__(self, axiom_id: str) -> bool:
        return any(candidate == axiom_id for candidate, _ in self.axioms)


SYSTEM_D = AxiomSystem(
    "D", tuple((axiom_id, parse(text)) for axiom_id, text in _D_SOURCE))

SYSTEM_C = AxiomSystem(
    "C", tuple((axiom_id, parse(text)) for axiom_id, text in _C_SOURCE))

_SYSTEMS = {"D": SYSTEM_D, "C": SYSTEM_C}


def axiom_system(system_id: str) -> AxiomSystem:
    """Look up a system by its one-letter id (``C`` or ``D``)."""
    try:
        return _SYSTEMS[system_id]
    except KeyError:
        raise KeyError(f"unknown axiom system {system_id!r}; "
                       f"known: {sorted(_SYSTEMS)}") from None


def axiom_scheme(axiom_id: str) -> Formula:
    """Look up a scheme by axiom id across both systems."""
    for system in _SYSTEMS.values():
        if axiom_id in system:
            return system.scheme(axiom_id)
    raise KeyError(f"unknown axiom id {axiom_id!r}")
