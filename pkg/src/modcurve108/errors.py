"""Exception types shared across the package.

Division by zero in the number field raises the builtin ZeroDivisionError.
"""


class InvalidPrime(ValueError):
    """Argument is not an odd prime > 3 where one is required."""


class NotSplit(ValueError):
    """Prime does not split completely in Q(zeta, cbrt(2))."""


class NonIntegral(ArithmeticError):
    """A denominator is divisible by the reduction prime."""


class NonIntegralWeight(ValueError):
    """Eta product whose leading q-power is not a nonnegative integer."""


class InsufficientPrecision(ValueError):
    """q-expansion precision below the floor needed for the canonical model."""


class ModelMismatch(RuntimeError):
    """Canonical model has the wrong shape (relation count, point off curve, ...)."""


class NotABasis(ValueError):
    """Lattice reduction got linearly dependent input vectors."""


class GroupTooLarge(RuntimeError):
    """Matrix group closure exceeded its configured element bound."""


class UnexpectedVariety(RuntimeError):
    """Groebner basis of the parameter ideal is not of the expected shape."""


class NotAnAutomorphism(RuntimeError):
    """A candidate projective map does not preserve the canonical ideal."""
