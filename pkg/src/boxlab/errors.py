"""Exception hierarchy shared by every boxlab module."""


class BoxlabError(Exception):
    pass


class NormalizationError(BoxlabError, ValueError):
    pass


class RangeError(BoxlabError, ValueError):
    pass


class SignallingError(BoxlabError, ValueError):
    pass


class DomainError(BoxlabError, ValueError):
    pass


class WeightError(BoxlabError, ValueError):
    pass


class DimensionError(BoxlabError, ValueError):
    pass


class AxisError(BoxlabError, ValueError):
    pass


class NotRealizable(BoxlabError, ValueError):
    pass


class DegeneracyError(NotRealizable):
    """Boundary table (t(0,0) in {0,1}) whose other setting is not uniform."""


class DegenerateError(BoxlabError):
    """An instance is only feasible with some hidden-variable weight equal to zero."""


class ExhaustionError(BoxlabError):
    """No model with at most four hidden values exists for an unsteerable box."""


class SubdivisionLimit(BoxlabError):
    pass


class ParseError(BoxlabError, ValueError):
    pass


class MismatchError(BoxlabError):
    def __init__(self, message, diff=None):
        super().__init__(message)
        self.diff = diff or {}
