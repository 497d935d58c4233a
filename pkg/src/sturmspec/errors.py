"""Exception types shared across the package."""


class SturmSpecError(Exception):
    pass


class MalformedDigits(SturmSpecError, ValueError):
    pass


class DegenerateExpansion(SturmSpecError, ValueError):
    """The expansion evaluates to the -1 sentinel, so its spectrum is the whole line."""


class TraceOverflow(SturmSpecError, ArithmeticError):
    pass


class NotAnEdge(SturmSpecError, ValueError):
    pass


class ZeroCoupling(SturmSpecError, ValueError):
    pass


class SizeCap(SturmSpecError, ValueError):
    pass


class MissingNeighbor(SturmSpecError, LookupError):
    pass


class Inconsistent(SturmSpecError, AssertionError):
    pass


class PreconditionFail(SturmSpecError, ValueError):
    pass


class DepthExceeded(SturmSpecError, IndexError):
    pass


class InsufficientDepth(SturmSpecError, ValueError):
    pass


class NotAdmissible(SturmSpecError, ValueError):
    pass
