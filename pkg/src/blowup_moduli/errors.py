"""Exception types shared across the library."""


class ShapeMismatch(ValueError):
    """Matrix shapes are not conformable for the requested operation."""


class SingularMatrix(ValueError):
    """A matrix that was required to be invertible is singular."""


class SingularGroupElement(SingularMatrix):
    """A group element acting on a configuration is not invertible."""


class ChargeTooLarge(ValueError):
    """Operation is only implemented for charge k <= 2."""


class NotIntegrable(ValueError):
    """Configuration fails the integrability (or effectiveness) condition."""


class NotSplitOverQi(ArithmeticError):
    """Required eigen-data needs a second quadratic extension of Q(i)."""


class EigenvalueCollision(ValueError):
    """Gluing denominator vanishes: the two first-matrix eigenvalues agree."""


class NotInNL(ValueError):
    """Configuration does not satisfy the eigenvalue locality conditions."""


class InconsistentPair(ValueError):
    """A two-sided representation does not describe a single glued point."""


class DegreeMismatch(ValueError):
    """A ring map image is not homogeneous of the generator's degree."""


class NonCollapsing(RuntimeError):
    """A spectral sequence page has unexpected entries above column zero."""
