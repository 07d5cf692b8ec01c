"""Exception types shared across the package."""


class PrecisionError(ArithmeticError):
    """Working precision is insufficient to decide a required statement.

    Callers at pipeline level may retry at doubled precision; low-level code
    never silently truncates.
    """


class InvariantError(AssertionError):
    """A certified internal invariant failed.  Indicates a bug, never bad input."""


class UnsupportedError(ValueError):
    """Input is outside the supported desk-scale domain."""


class NotGaloisError(ValueError):
    """The requested local extension is not Galois, or precision is too low to see it."""


class HenselConditionError(ValueError):
    """A hypothesis of the valuation-criterion root lifting fails at the given point.

    `condition` is 1, 2 or 3, matching the three hypotheses
    (value valuation, derivative valuation, higher-derivative valuations).
    """

    def __init__(self, condition, message):
        super().__init__(message)
        self.condition = condition
