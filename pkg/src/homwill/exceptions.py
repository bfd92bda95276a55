"""Exception types shared across the package."""


class HomwillError(Exception):
    """Base class for all errors raised by homwill."""


class FormMismatchError(HomwillError, ValueError):
    """Operands live in different algebras (dimension, form or block split)."""


class MembershipError(HomwillError, ValueError):
    """A matrix is not skew with respect to its bilinear form."""


class LatticeRoundingError(HomwillError, ArithmeticError):
    """An eigenvalue is farther than the lattice tolerance from i*Z."""


class RealityError(HomwillError, ValueError):
    """A loop violates the reality or twist condition."""


class NonCommutingPotentialError(HomwillError, ValueError):
    """The two constant Maurer-Cartan coefficients do not commute."""


class DegenerateProjectionError(HomwillError, ArithmeticError):
    """The lightlike vector has (almost) vanishing timelike component."""


class WillmoreConditionError(HomwillError, ValueError):
    """Monodromy data violates L1 = -i H1."""


class ImmersionError(HomwillError, ArithmeticError):
    """A sampled map fails to be an immersion (degenerate metric)."""


class CoverageError(HomwillError, ValueError):
    """The charts cover too little of the sphere for a global integral."""


class DecompositionError(HomwillError, ValueError):
    """An eigenvalue multiplicity profile is not that of an so(3) representation."""
