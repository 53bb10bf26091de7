"""d2lab: finite-matrix and S5 adjudication toolkit for discussive logics.

The package checks finite logical matrices against two Hilbert-style
axiom systems for discussive logic, decides validity through the
possibility-operator translation into S5, replays the bundled
countermodel fixtures against their published roles, and searches for
new matrices meeting validate/refute constraints.
"""

from .axioms import SYSTEM_C, SYSTEM_D, axiom_scheme, axiom_system
from .fixtures import MATRIX_IDS, paper_matrix, verify_paper_claims
from .formula import canonical_instance, parse, render, substitute
from .matrix import (
    Matrix, check_mp, check_scheme, check_system, eval_formula, read_matrix,
    write_matrix,
)
from .modal import classify_d_axioms, d2_valid, s5_valid, translate
from .search import SearchConstraints, canonicalize, find_matrices

__version__ = "0.1.0"

__all__ = [
    "SYSTEM_C", "SYSTEM_D", "axiom_scheme", "axiom_system",
    "MATRIX_IDS", "paper_matrix", "verify_paper_claims",
    "canonical_instance", "parse", "render", "substitute",
    "Matrix", "check_mp", "check_scheme", "check_system", "eval_formula",
    "read_matrix", "write_matrix",
    "classify_d_axioms", "d2_valid", "s5_valid", "translate",
    "SearchConstraints", "canonicalize", "find_matrices",
    "__version__",
]
