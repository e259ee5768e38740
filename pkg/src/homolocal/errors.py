"""Error taxonomy.

Every named failure mode raised by the package lives here so callers can
catch one base class.  Validation failures carry witnesses (the offending
indices or elements) in .args.
"""


class HomolocalError(Exception):
    pass


class ParseError(HomolocalError):
    pass


class AssociativityViolation(HomolocalError):
    """(e_i e_j) e_k != e_i (e_j e_k) for the reported basis triple."""


class UnitViolation(HomolocalError):
    """Declared unit fails to be two-sided on the reported basis element."""


class FiltrationViolation(HomolocalError):
    """One of the three filtration axioms fails; args = (axiom, witness)."""


class SizeMismatch(HomolocalError):
    pass


class NotAField(HomolocalError):
    pass


class NotIdempotent(HomolocalError):
    pass


class NotInvertible(HomolocalError):
    pass


class DegreeZero(HomolocalError):
    """Operator undefined at chain degree 0."""


class NotNormalized(HomolocalError):
    """Chain has words with interior unit letters; B needs normalized input."""


class AnticommutationFailure(HomolocalError):
    """The two boundaries of a bicomplex failed to anticommute on the
    requested window.  Signals an implementation bug, never user error."""


class BudgetExceeded(HomolocalError):
    """A dimension product passed the configured ceiling (HOMOLOCAL_BUDGET)."""


class SearchBudgetExceeded(HomolocalError):
    """Bounded conjugacy/class search exhausted its budget without deciding."""


class InvolutionViolation(HomolocalError):
    pass


class LevelViolation(HomolocalError):
    """A homomorphism failed to respect filtration levels."""


class NotAnIdeal(HomolocalError):
    pass


class DiagramViolation(HomolocalError):
    pass


class NotLevelPreserving(LevelViolation):
    pass


class NoSurjection(HomolocalError):
    pass


class NotSurjective(HomolocalError):
    pass


class ConjugacyHypothesisFails(HomolocalError):
    pass


class CommutationHypothesisFails(HomolocalError):
    pass
