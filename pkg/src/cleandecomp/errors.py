"""Exception types shared across the package.

Two families matter to callers.  ``InputError`` subclasses mean the caller
handed us something malformed or out of scope (bad descriptor text, an
element that does not live in the stated ring, an unsupported size).  The
CLI maps these to exit code 2.  ``ComputationError`` subclasses mean a
well-formed request could not be completed (no inverse exists, a search cap
was exhausted).  ``InternalPatternViolation`` signals a broken internal
invariant and should never escape on valid inputs.
"""


class CleanDecompError(Exception):
    """Base class for every error raised by this package."""


class InputError(CleanDecompError):
    """Malformed or out-of-scope input."""


class ParseError(InputError):
    """Text does not match the element or descriptor grammar."""


class DenominatorNotUnit(InputError):
    """A fraction's reduced denominator is not invertible in the target ring."""


class BadInput(InputError):
    """Argument outside the documented domain (wrong parity, bad bounds)."""


class UnsupportedRing(InputError):
    """The requested operation is not defined for this ring kind."""


class UnsupportedOrder(InputError):
    """Group order shares a factor with the localized prime; regroup first."""


class BadFactorization(InputError):
    """Requested regrouping does not split the group order as coprime parts."""


class ShapeMismatch(InputError):
    """Matrix dimensions do not conform for the requested operation."""


class DescriptorMismatch(InputError):
    """Operands live in different rings."""


class SizeTooSmall(InputError):
    """Matrix decompositions need size at least 2."""


class NotFinite(InputError):
    """Enumeration requested for an infinite ring."""


class TooLarge(InputError):
    """Enumeration or search would exceed the configured cap."""


class ComputationError(CleanDecompError):
    """A well-formed request that has no answer on this path."""


class NotAUnit(ComputationError):
    """The element has no two-sided inverse (or none detectable here)."""


class NotInvertible(ComputationError):
    """A required scalar (such as the group order) is not a unit in the base."""


class TwoNotInvertible(ComputationError):
    """2 is not invertible in this ring, so halving constructions fail."""


class NoUnitPivot(ComputationError):
    """Elimination found no unit pivot in the remaining column."""


class NoScalarRule(ComputationError):
    """No per-entry decomposition rule applies to this base ring."""


class CapExceeded(ComputationError):
    """An iteration or search exceeded its cap before terminating."""


class InternalPatternViolation(CleanDecompError):
    """A structural invariant of a construction failed; indicates a bug."""
