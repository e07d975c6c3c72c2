"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class AmplifiberError(Exception):
    exit_code = 4


class ValidationError(AmplifiberError, ValueError):
    """Bad user input: malformed nodes, inconsistent sizes, unsupported cases."""

    exit_code = 2


class DimensionError(ValidationError):
    pass


class PositivityError(ValidationError):
    pass


class UnsupportedError(ValidationError):
    pass


class DegeneracyError(AmplifiberError, ArithmeticError):
    """A rank drop or vanishing determinant where genericity was required."""

    exit_code = 3


class RankError(DegeneracyError):
    pass


class SingularMatrixError(DegeneracyError):
    pass


class GenericityError(DegeneracyError):
    """A reference point or residue location sits on a wall."""

    def __init__(self, message, wall=None):
        super().__init__(message)
        self.wall = wall


class PoleError(DegeneracyError):
    def __init__(self, message, factors=()):
        super().__init__(message)
        self.factors = tuple(factors)
