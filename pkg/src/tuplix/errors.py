class TuplixError(Exception):
    """Base class for engine errors."""


class MalformedInput(TuplixError):
    pass


class ArityMismatch(TuplixError):
    pass


class UnboundFunctionVar(TuplixError):
    pass


class UnknownAttribute(TuplixError, KeyError):
    pass


class UnknownUnit(TuplixError, KeyError):
    pass


class ResourceLimit(TuplixError):
    """The case-split budget was exhausted."""


class UnboundVariable(TuplixError, KeyError):
    pass
