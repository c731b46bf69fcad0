"""Exception types shared across modules."""


class InterleavingsError(Exception):
    pass


class ParseError(InterleavingsError, ValueError):
    pass


class DomainMismatch(InterleavingsError, ValueError):
    pass


class Undecidable(InterleavingsError):
    pass


class NotATranslation(InterleavingsError, ValueError):
    pass


class ShapeMismatch(InterleavingsError, ValueError):
    pass


class DimensionMismatch(ShapeMismatch):
    pass


class NotFunctorial(InterleavingsError, ValueError):
    pass


class PreconditionFailed(InterleavingsError, ValueError):
    def __init__(self, missing):
        self.missing = tuple(missing)
        super().__init__("no 2-morphism for: " + ", ".join(self.missing))


class SearchBudgetExceeded(InterleavingsError):
    """Raised instead of answering 'no' when a search could not finish."""


class UnsupportedAction(InterleavingsError, ValueError):
    pass


class MalformedCategory(InterleavingsError, ValueError):
    pass


class MalformedLPC(InterleavingsError, ValueError):
    pass


class SizeCap(InterleavingsError):
    pass


class NotAFunctor(InterleavingsError, ValueError):
    pass


class NonSublevelClosed(InterleavingsError, ValueError):
    pass


class UnsupportedDegree(InterleavingsError, ValueError):
    pass


class NumericalRange(InterleavingsError, ArithmeticError):
    """An endpoint underflowed or overflowed, so the closed form is no longer exact."""
