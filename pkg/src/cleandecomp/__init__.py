"""Exact constructive decompositions of ring elements into an idempotent
plus two (or more) units, with brute-force cross-checks on finite rings.

The package covers square matrices over any exactly represented ring,
banded operators on a countable basis, and cyclic group rings over
localized bases, plus a CLI (``cleandecomp``) that emits verification
reports.  All arithmetic is exact: integers, rationals, residues,
localizations, polynomials, matrices, and group rings built over them.
"""

from .decompose import (
    CleanDecomposition,
    decompose_2x2,
    decompose_3x3,
    decompose_nxn,
    good_units_from_clean,
    lengthen_decomposition,
    local_two_clean,
    verify_decomposition,
)
from .errors import CleanDecompError, ComputationError, InputError
from .finite import (
    enumerate_ring,
    integer_n_clean_check,
    is_element_n_clean,
    pierce_stalks,
    ring_n_clean,
)
from .matrices import ElementaryTransvection, Matrix, NegateAll, RowSwap
from .rings import (
    Element,
    GroupRing,
    IntegerRing,
    IntegersMod,
    LocalizedIntegers,
    MatrixRing,
    PolynomialRing,
    Q,
    RationalField,
    UnitWitness,
    Z,
    canonicalize,
    format_descriptor,
    is_idempotent,
    jacobson_member,
    parse_descriptor,
    random_element,
    try_invert,
)

__version__ = "0.1.0"

__all__ = [
    "CleanDecomposition",
    "CleanDecompError",
    "ComputationError",
    "Element",
    "ElementaryTransvection",
    "GroupRing",
    "InputError",
    "IntegerRing",
    "IntegersMod",
    "LocalizedIntegers",
    "Matrix",
    "MatrixRing",
    "NegateAll",
    "PolynomialRing",
    "Q",
    "RationalField",
    "RowSwap",
    "UnitWitness",
    "Z",
    "canonicalize",
    "decompose_2x2",
    "decompose_3x3",
    "decompose_nxn",
    "enumerate_ring",
    "format_descriptor",
    "good_units_from_clean",
    "integer_n_clean_check",
    "is_element_n_clean",
    "is_idempotent",
    "jacobson_member",
    "lengthen_decomposition",
    "local_two_clean",
    "parse_descriptor",
    "pierce_stalks",
    "random_element",
    "ring_n_clean",
    "try_invert",
    "verify_decomposition",
]
