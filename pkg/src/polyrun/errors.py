"""Exception hierarchy shared by every module."""


class PolyError(Exception):
    """Base class for all library errors."""


class EnumerationRequired(PolyError):
    """An infinite direction or position set would have to be tabulated."""


class UnsupportedShape(PolyError, ValueError):
    pass


class Infeasible(PolyError, ValueError):
    """No polynomial map exists between the requested polynomials."""


class MissingBranch(PolyError, ValueError):
    pass


class InvalidDirection(PolyError, ValueError):
    pass


class InvalidComonoid(PolyError, ValueError):
    pass


class WeightError(PolyError, ValueError):
    pass


class CarrierMismatch(PolyError, ValueError):
    pass


class VoterCountMismatch(PolyError, ValueError):
    pass


class IllegalMove(PolyError, ValueError):
    pass
