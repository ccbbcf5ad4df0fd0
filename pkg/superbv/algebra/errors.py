"""Exceptions raised by the superbv arithmetic and geometry layers."""


class NotInvertible(ArithmeticError):
    """The reduced part of a scalar (or determinant) is not a Laurent unit."""


class BerezinianUndefined(ArithmeticError):
    """The odd-odd block of a supermatrix has no inverse."""


class MixedParity(ValueError):
    """A homogeneous element was required but the value mixes parities."""


class VarTableMismatch(ValueError):
    """Operands live over different variable tables."""


class ParityViolation(ValueError):
    """An assignment or matrix entry does not respect the Z/2 grading."""


class Unsupported(NotImplementedError):
    """The input lies outside the class of presentations the engine handles."""


class ConventionViolation(ArithmeticError):
    """An identity that fixes a sign or normalisation convention failed."""


class AtlasError(ValueError):
    """Charts or transition maps are inconsistent."""


__all__ = ['NotInvertible', 'BerezinianUndefined', 'MixedParity', 'VarTableMismatch', 'ParityViolation',
           'Unsupported', 'ConventionViolation', 'AtlasError']
