"""Exception hierarchy.

Two families: ``ValidationError`` for bad input or violated hypotheses
(CLI exit code 1) and ``NumericalError`` for caps and failed numerical
procedures (CLI exit code 2).
"""


class SasakiForgeError(Exception):
    exit_code = 1


class ValidationError(SasakiForgeError, ValueError):
    exit_code = 1


class NumericalError(SasakiForgeError, ArithmeticError):
    exit_code = 2


# cone_model
class DimensionMismatch(ValidationError):
    pass


class NotPointed(ValidationError):
    pass


class NotFullDimensional(ValidationError):
    pass


class NotGorenstein(ValidationError):
    pass


class BetaNotInterior(ValidationError):
    pass


class UnboundedSlice(ValidationError):
    pass


class DegeneratePolytope(ValidationError):
    pass


# reeb_minimizer
class EmptyInterior(ValidationError):
    pass


class ZeroLeadingComponent(ValidationError):
    pass


class MaxIterationsExceeded(NumericalError):
    pass


class LeftInterior(NumericalError):
    pass


# profiles
class PositivityViolation(ValidationError):
    pass


class NegativeTau(ValidationError):
    pass


class MuZero(ValidationError):
    pass


class InvalidFamily(ValidationError):
    pass


class BracketFailure(NumericalError):
    pass


# coordinates
class NonPositiveTau(ValidationError):
    pass


class ProfileNotExtendable(ValidationError):
    pass


class QuadratureFailure(NumericalError):
    pass


# curvature_check
class NonPositiveInput(ValidationError):
    pass
