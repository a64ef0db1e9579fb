"""Exception hierarchy shared across the package."""


class FuzzyEntError(Exception):
    """Base class for all package errors."""


class NonConvergence(FuzzyEntError):
    """An iterative numerical routine exhausted its budget before meeting tolerance."""


class NotAState(FuzzyEntError, ValueError):
    """Matrix cannot be interpreted as a two-qubit density matrix."""


class DegenerateState(FuzzyEntError, ValueError):
    """Correlation matrix has vanishing norm and cannot be normalized."""


class OutOfRange(FuzzyEntError, ValueError):
    pass


class DimensionTooLarge(FuzzyEntError, ValueError):
    pass


class NoBracket(FuzzyEntError):
    """No sign change of the entanglement indicator was found on the search interval."""


class InvalidSpec(FuzzyEntError, ValueError):
    pass
