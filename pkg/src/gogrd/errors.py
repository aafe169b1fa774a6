"""Exception types shared across the package."""


class GogError(Exception):
    """Base class for all errors raised by gogrd."""


class ElementKindMismatch(GogError, TypeError):
    pass


class BudgetExceeded(GogError):
    """Raised when an enumeration would exceed its element budget.

    ``partial`` carries whatever was computed before the cap was hit
    (a LengthTable, a list of curve points, ...) and ``reached`` the
    last radius that was completed.
    """

    def __init__(self, message, partial=None, reached=None):
        super().__init__(message)
        self.partial = partial
        self.reached = reached


class NotInSubgroup(GogError, ValueError):
    pass


class OracleUnknown(GogError):
    pass


class NotWellDefined(GogError):
    """A crossing path could not be followed; ``index`` is 1-based."""

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class NotHyperbolic(GogError, ValueError):
    pass


class ZeroVector(GogError, ValueError):
    pass


class NotABasis(GogError, ValueError):
    pass


class SupportOutsideDomain(GogError, KeyError):
    pass


class ContextMismatch(GogError, ValueError):
    pass


class TooFewSamples(GogError, ValueError):
    pass


class NoSamplesFound(GogError):
    pass


class UnknownScenario(GogError, KeyError):
    pass


class ConfigParse(GogError, ValueError):
    pass
