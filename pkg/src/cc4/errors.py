"""Exception hierarchy shared by every cc4 module."""


class CCError(Exception):
    """Base class for all cc4 errors."""


class InvalidInput(CCError, ValueError):
    """An argument violates a documented precondition."""


class DegenerateDenominator(CCError, ArithmeticError):
    """The closed-form masses divide by p2, which vanishes at this shape."""


class InfeasibleMass(CCError, ValueError):
    """A requested construction would produce a non-positive mass."""


class InfeasibleShape(InfeasibleMass):
    """The shape has no all-positive mass vector."""


class SingularSystem(CCError, ArithmeticError):
    """The reduced 3x3 linear system is numerically singular."""


class CollisionDetected(CCError, ArithmeticError):
    """Two bodies are (numerically) at the same place."""


class RootNotBracketed(CCError, ArithmeticError):
    """Bracket expansion for a curve root ran past its limit."""


class LabelAbsent(CCError, LookupError):
    """No raster cell carries the requested region label."""
