"""Exception types shared across the package."""


class FlagvalError(Exception):
    """Base class; `witness` carries a re-checkable payload when there is one."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class ZeroElement(FlagvalError):
    pass


class OutOfWindow(FlagvalError):
    pass


class PartialMap(FlagvalError):
    pass


class InvarianceFailure(FlagvalError):
    pass


class WindowTooShallow(FlagvalError):
    pass


class Rank2Failure(FlagvalError):
    pass


class UnhandledConfiguration(FlagvalError):
    pass


class BasisConditionFailure(FlagvalError):
    pass


class RingUnsupported(FlagvalError):
    pass


class HypothesisFailure(FlagvalError):
    pass


class NotACPair(FlagvalError):
    pass


class BudgetExceeded(FlagvalError):
    pass


class DependentBasis(FlagvalError):
    pass


class AxiomFailure(FlagvalError):
    pass


class NotAF(FlagvalError):
    pass


class InputError(FlagvalError):
    pass
