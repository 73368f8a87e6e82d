"""Exception types.  Every error carries enough context to act on."""


class FlagLabError(Exception):
    pass


class NotAPrimePower(FlagLabError, ValueError):
    pass


class DivisionByZero(FlagLabError, ZeroDivisionError):
    pass


class AmbientMismatch(FlagLabError, ValueError):
    pass


class OutOfRange(FlagLabError, ValueError):
    pass


class UndefinedBranch(FlagLabError, ValueError):
    pass


class MemoryBudgetExceeded(FlagLabError, MemoryError):
    pass


class IndexOutOfRange(FlagLabError, IndexError):
    pass


class DuplicateIndex(FlagLabError, ValueError):
    pass


class SpecIncidenceViolation(FlagLabError, ValueError):
    pass


class NotACoclique(FlagLabError, ValueError):
    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class NotMaximal(FlagLabError, ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class WrongDimension(FlagLabError, ValueError):
    pass


class NonMaximalWeightSpectrum(FlagLabError, ValueError):
    """A space occurs in a number of flags that is not a Gaussian ``[k, 1]``."""

    def __init__(self, msg, space=None, count=None):
        super().__init__(msg)
        self.space = space
        self.count = count


class NotIntersecting(FlagLabError, ValueError):
    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class MixedDimensions(FlagLabError, ValueError):
    pass


class NotPairwiseSkew(FlagLabError, ValueError):
    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class SpaceNotInFamily(FlagLabError, ValueError):
    pass


class ViewTooLarge(FlagLabError, ValueError):
    pass
