"""Exception hierarchy shared by all modules."""


class LongresError(Exception):
    """Base class for every error raised by the package."""


class ShapeMismatch(LongresError, ValueError):
    pass


class SingularBlock(LongresError, ArithmeticError):
    """A block that must be inverted is numerically singular."""


class NotPsd(LongresError, ValueError):
    pass


class OutOfDomain(LongresError, ValueError):
    """Point lies outside the union of rotated halfplane products."""


class DefectMismatch(LongresError, ValueError):
    pass


class InconsistentSamples(LongresError, ValueError):
    pass


class MissingBasePoint(LongresError, ValueError):
    pass


class SpectrumAtOne(LongresError, ArithmeticError):
    pass


class IdentityViolated(LongresError, ValueError):
    pass


class IsometryDefect(LongresError, ValueError):
    pass


class NotSelfAdjoint(LongresError, ValueError):
    pass


class NotCommuting(LongresError, ValueError):
    pass


class NotRealFunction(LongresError, ValueError):
    pass


class NotInvariant(LongresError, ValueError):
    pass
