"""Exception types raised by the numerical routines."""


class EvaluationError(ArithmeticError):
    """A special function or quadrature produced a non-finite or unreliable value."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    pass


class BranchCutError(DomainError):
    pass


class ConvergenceError(EvaluationError):
    pass


class CertificationError(EvaluationError):
    """The argument-principle count disagrees with the expected number of zeros."""


class UnsupportedOrderError(ValueError):
    pass


class AccuracyWarning(UserWarning):
    pass
